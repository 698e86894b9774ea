"""Exact sparse linear algebra over the rationals."""

import heapq
from collections.abc import Callable, Hashable, Iterable, Mapping
from fractions import Fraction
from typing import Any

from aws_lambda_powertools import Logger

from .config import SERVICE_NAME
from .exceptions import SpanError

logger = Logger(service=SERVICE_NAME, child=True)

SparseVector = dict[int, Fraction]


def axpy(
    target: SparseVector, factor: Fraction, source: Mapping[int, Fraction]
) -> None:
    """In place target += factor * source, dropping cancelled entries."""
    for col, value in source.items():
        updated = target.get(col, Fraction(0)) + factor * value
        if updated:
            target[col] = updated
        else:
            target.pop(col, None)


def normalized_key(vec: Mapping[int, Fraction]) -> tuple[tuple[int, Fraction], ...]:
    """Key identifying a vector up to a nonzero scalar."""
    lead = vec[min(vec)]
    return tuple(sorted((c, v / lead) for c, v in vec.items()))


def dedupe(rows: Iterable[Mapping[int, Fraction]]) -> list[SparseVector]:
    """Drop zero rows and rows proportional to an earlier row."""
    seen: set[tuple[tuple[int, Fraction], ...]] = set()
    out: list[SparseVector] = []
    for vec in rows:
        clean = {c: Fraction(v) for c, v in vec.items() if v}
        if not clean:
            continue
        key = normalized_key(clean)
        if key not in seen:
            seen.add(key)
            out.append(clean)
    return out


class EchelonBasis:
    """Reduced row echelon basis maintained one vector at a time.

    Every pivot column occurs only in its own row and pivot entries are 1.
    The pivot of a new row is its smallest column under ``order``.
    """

    def __init__(
        self, order: Callable[[int], Any] | None = None, track: bool = False
    ) -> None:
        self._order = order or (lambda col: col)
        self._track = track
        self._rows: dict[int, SparseVector] = {}
        self._combos: dict[int, dict[Hashable, Fraction]] = {}

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def rows(self) -> list[SparseVector]:
        """Rows sorted by pivot order."""
        return [dict(self._rows[p]) for p in sorted(self._rows, key=self._order)]

    def pivots(self) -> list[int]:
        return sorted(self._rows, key=self._order)

    def _reduce(
        self, vec: Mapping[int, Fraction]
    ) -> tuple[SparseVector, dict[Hashable, Fraction]]:
        remainder = {c: Fraction(v) for c, v in vec.items() if v}
        combo: dict[Hashable, Fraction] = {}
        for pivot in [c for c in remainder if c in self._rows]:
            factor = remainder[pivot]
            axpy(remainder, -factor, self._rows[pivot])
            if self._track:
                for tag, value in self._combos[pivot].items():
                    combo[tag] = combo.get(tag, Fraction(0)) + factor * value
        return remainder, combo

    def reduce(self, vec: Mapping[int, Fraction]) -> SparseVector:
        """Remainder of vec after eliminating every pivot column."""
        return self._reduce(vec)[0]

    def contains(self, vec: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping[int, Fraction], tag: Hashable = None) -> bool:
        """Insert vec; returns False when it is already in the span."""
        remainder, combo = self._reduce(vec)
        if not remainder:
            return False
        pivot = min(remainder, key=self._order)
        lead = remainder[pivot]
        remainder = {c: v / lead for c, v in remainder.items()}
        if self._track:
            combo = {t: -v / lead for t, v in combo.items() if v}
            combo[tag] = combo.get(tag, Fraction(0)) + 1 / lead
        for other_pivot, other in self._rows.items():
            factor = other.get(pivot)
            if factor:
                axpy(other, -factor, remainder)
                if self._track:
                    other_combo = self._combos[other_pivot]
                    for t, v in combo.items():
                        updated = other_combo.get(t, Fraction(0)) - factor * v
                        if updated:
                            other_combo[t] = updated
                        else:
                            other_combo.pop(t, None)
        self._rows[pivot] = remainder
        if self._track:
            self._combos[pivot] = combo
        return True

    def express(self, vec: Mapping[int, Fraction]) -> dict[Hashable, Fraction]:
        """Coefficients of vec in terms of the tagged vectors added so far.

        Raises:
            SpanError: If vec is outside the span
        """
        if not self._track:
            raise SpanError("Basis was built without combination tracking")
        remainder, combo = self._reduce(vec)
        if remainder:
            raise SpanError(f"Vector has {len(remainder)} entries outside the span")
        return {t: v for t, v in combo.items() if v}


class MarkowitzEliminator:
    """Gauss-Jordan elimination with Markowitz-style pivot selection.

    The sparsest remaining row is pivoted on its column of smallest column
    count, which approximates the minimum (r - 1)(c - 1) fill-in estimate.
    """

    def __init__(self, rows: Iterable[Mapping[int, Fraction]], ncols: int) -> None:
        self.ncols = ncols
        self._rows: dict[int, SparseVector] = {}
        self._col_rows: dict[int, set[int]] = {}
        for rid, vec in enumerate(rows):
            clean = {c: Fraction(v) for c, v in vec.items() if v}
            if not clean:
                continue
            self._rows[rid] = clean
            for col in clean:
                self._col_rows.setdefault(col, set()).add(rid)
        self.pivots: dict[int, int] = {}
        self._pivoted: set[int] = set()

    def _subtract(self, rid: int, factor: Fraction, source: SparseVector) -> None:
        target = self._rows[rid]
        for col, value in source.items():
            updated = target.get(col, Fraction(0)) - factor * value
            if updated:
                if col not in target:
                    self._col_rows.setdefault(col, set()).add(rid)
                target[col] = updated
            elif col in target:
                del target[col]
                self._col_rows[col].discard(rid)

    def run(self) -> "MarkowitzEliminator":
        heap = [(len(vec), rid) for rid, vec in self._rows.items()]
        heapq.heapify(heap)
        while heap:
            size, rid = heapq.heappop(heap)
            vec = self._rows.get(rid)
            if rid in self._pivoted or vec is None or len(vec) != size:
                continue
            if not vec:
                del self._rows[rid]
                continue
            pivot = min(vec, key=lambda c: (len(self._col_rows[c]), c))
            lead = vec[pivot]
            for col in vec:
                vec[col] /= lead
            for other in sorted(self._col_rows[pivot] - {rid}):
                self._subtract(other, self._rows[other][pivot], vec)
                if other not in self._pivoted:
                    heapq.heappush(heap, (len(self._rows[other]), other))
            self._pivoted.add(rid)
            self.pivots[pivot] = rid
        logger.debug(
            "Elimination finished",
            extra={"columns": self.ncols, "rank": len(self.pivots)},
        )
        return self

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def nullspace(self) -> list[SparseVector]:
        """Basis of the kernel, one vector per free column in ascending order."""
        basis: list[SparseVector] = []
        pivot_of = {rid: col for col, rid in self.pivots.items()}
        for free in range(self.ncols):
            if free in self.pivots:
                continue
            vec: SparseVector = {free: Fraction(1)}
            for rid in self._col_rows.get(free, ()):
                if rid in pivot_of:
                    vec[pivot_of[rid]] = -self._rows[rid][free]
            basis.append(vec)
        return basis


def nullspace(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[SparseVector]:
    """Exact kernel basis of a sparse system with ncols unknowns."""
    return MarkowitzEliminator(rows, ncols).run().nullspace()


def rank(rows: Iterable[Mapping[int, Fraction]]) -> int:
    materialized = list(rows)
    ncols = 1 + max((c for vec in materialized for c in vec), default=-1)
    return MarkowitzEliminator(materialized, ncols).run().rank

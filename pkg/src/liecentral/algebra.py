"""Lie algebras given by exact structure constants."""

import json
import random
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Any

from aws_lambda_powertools import Logger
from pydantic import ValidationError

from . import rational
from .config import DEFAULT_SEED, DEFAULT_TRIALS, RANK_COEFFICIENT_BOUND, SERVICE_NAME
from .exceptions import (
    AlgebraDocumentError,
    DiagonalBracketError,
    DuplicateBracketError,
    RationalFormatError,
    SubalgebraError,
    UnknownGeneratorError,
)
from .models import (
    AlgebraDocument,
    BracketEntry,
    JacobiReport,
    JacobiViolation,
    ResidualTerm,
    RhsTerm,
)
from .sparse import SparseVector, axpy

logger = Logger(service=SERVICE_NAME, child=True)

Pair = tuple[int, int]
BracketTable = Mapping[tuple[str, str], Mapping[str, Fraction | int]]


class LieAlgebra:
    """Finite-dimensional Lie algebra over the rationals.

    Only pairs a < b are stored; [Z_b, Z_a] = -[Z_a, Z_b] is implied and
    diagonal brackets vanish. Basis order is part of the algebra's identity.
    """

    __slots__ = ("name", "basis", "_index", "_constants")

    def __init__(
        self,
        name: str,
        basis: Sequence[str],
        constants: Mapping[Pair, Mapping[int, Fraction | int]] | None = None,
    ) -> None:
        self.name = name
        self.basis: tuple[str, ...] = tuple(basis)
        self._index = {gen: i for i, gen in enumerate(self.basis)}
        if len(self._index) != len(self.basis):
            raise AlgebraDocumentError("Generator names must be unique", "basis")
        table: dict[Pair, SparseVector] = {}
        for (a, b), rhs in (constants or {}).items():
            if a == b:
                raise DiagonalBracketError(f"Diagonal bracket on {self.basis[a]}")
            sign = Fraction(1) if a < b else Fraction(-1)
            key = (min(a, b), max(a, b))
            if key in table:
                raise DuplicateBracketError(
                    f"Bracket [{self.basis[a]}, {self.basis[b]}] given twice"
                )
            terms = {c: sign * Fraction(v) for c, v in rhs.items() if v}
            for c in terms:
                if not 0 <= c < len(self.basis):
                    raise UnknownGeneratorError(f"Target index {c} outside basis")
            if terms:
                table[key] = terms
        self._constants = table

    @classmethod
    def from_table(
        cls, name: str, basis: Sequence[str], table: BracketTable
    ) -> "LieAlgebra":
        """Build from brackets keyed by generator names."""
        index = {gen: i for i, gen in enumerate(basis)}

        def lookup(gen: str, where: str) -> int:
            if gen not in index:
                raise UnknownGeneratorError(f"Unknown generator {gen!r}", where)
            return index[gen]

        constants: dict[Pair, dict[int, Fraction]] = {}
        for (a, b), rhs in table.items():
            where = f"[{a}, {b}]"
            ia, ib = lookup(a, where), lookup(b, where)
            constants[(ia, ib)] = {
                lookup(c, where): Fraction(v) for c, v in rhs.items()
            }
        return cls(name, basis, constants)

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name!r}, dim={self.dim})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.name, self.basis, self._constants) == (
            other.name,
            other.basis,
            other._constants,
        )

    def __hash__(self) -> int:
        return hash((self.name, self.basis, self.structural_key()))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def constants(self) -> dict[Pair, SparseVector]:
        """Copy of the a < b structure constant table."""
        return {k: dict(v) for k, v in self._constants.items()}

    def index(self, gen: str) -> int:
        try:
            return self._index[gen]
        except KeyError:
            raise UnknownGeneratorError(
                f"Unknown generator {gen!r} in {self.name}"
            ) from None

    def structure(self, a: int, b: int) -> SparseVector:
        """Coefficients of [Z_a, Z_b] indexed by target generator."""
        if a == b:
            return {}
        if a < b:
            return dict(self._constants.get((a, b), {}))
        return {c: -v for c, v in self._constants.get((b, a), {}).items()}

    def nonzero_pairs(self) -> list[Pair]:
        return sorted(self._constants)

    def is_abelian(self) -> bool:
        return not self._constants

    def structural_key(self) -> tuple[Any, ...]:
        """Identity of the bracket table with generator names ignored."""
        return (
            self.dim,
            tuple(
                (pair, tuple(sorted(rhs.items())))
                for pair, rhs in sorted(self._constants.items())
            ),
        )

    def renamed(self, name: str) -> "LieAlgebra":
        return LieAlgebra(name, self.basis, self._constants)

    def generator(self, gen: str) -> "AlgebraElement":
        self.index(gen)
        return AlgebraElement({gen: Fraction(1)})

    def element(self, vec: Mapping[int, Fraction]) -> "AlgebraElement":
        """Element from index-keyed coefficients."""
        return AlgebraElement({self.basis[i]: v for i, v in vec.items()})

    def vector(self, x: "AlgebraElement") -> SparseVector:
        """Index-keyed coefficients of an element."""
        return {self.index(gen): v for gen, v in x.coeffs.items()}

    def subalgebra(self, gens: Iterable[str], name: str | None = None) -> "LieAlgebra":
        """Restriction of the bracket table to a closed subset of generators.

        Raises:
            SubalgebraError: If some bracket leaves the subset
        """
        chosen = sorted({self.index(g) for g in gens})
        position = {old: new for new, old in enumerate(chosen)}
        constants: dict[Pair, dict[int, Fraction]] = {}
        for a, b in combinations(chosen, 2):
            rhs = self.structure(a, b)
            outside = [self.basis[c] for c in rhs if c not in position]
            if outside:
                raise SubalgebraError(
                    f"[{self.basis[a]}, {self.basis[b]}] leaves the subset"
                    f" via {outside}"
                )
            if rhs:
                constants[(position[a], position[b])] = {
                    position[c]: v for c, v in rhs.items()
                }
        basis = [self.basis[i] for i in chosen]
        return LieAlgebra(name or f"{self.name}|{','.join(basis)}", basis, constants)

    def is_subalgebra(self, gens: Iterable[str]) -> bool:
        try:
            self.subalgebra(gens)
        except SubalgebraError:
            return False
        return True


class AlgebraElement:
    """Sparse linear combination of generators with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[str, Fraction | int] | None = None) -> None:
        self.coeffs: dict[str, Fraction] = {
            gen: Fraction(v) for gen, v in (coeffs or {}).items() if v
        }

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(
            f"{rational.format_rational(v)}*{gen}" for gen, v in self.coeffs.items()
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.coeffs)
        for gen, v in other.coeffs.items():
            out[gen] = out.get(gen, Fraction(0)) + v
        return AlgebraElement(out)

    def __neg__(self) -> "AlgebraElement":
        return self.scaled(-1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __rmul__(self, factor: Fraction | int) -> "AlgebraElement":
        return self.scaled(factor)

    def scaled(self, factor: Fraction | int) -> "AlgebraElement":
        return AlgebraElement({gen: v * factor for gen, v in self.coeffs.items()})

    def coefficient(self, gen: str) -> Fraction:
        return self.coeffs.get(gen, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs


def _parse_coefficient(text: str, where: str) -> Fraction:
    try:
        return rational.parse_rational(text)
    except ValueError as e:
        raise RationalFormatError(str(e), where) from e


def parse_algebra(doc: AlgebraDocument | Mapping[str, Any]) -> LieAlgebra:
    """Build a LieAlgebra from an algebra document.

    Args:
        doc: Parsed document or raw JSON mapping

    Returns:
        The algebra with basis in document order

    Raises:
        AlgebraDocumentError: With the location of the first problem found
    """
    if not isinstance(doc, AlgebraDocument):
        try:
            doc = AlgebraDocument.model_validate(doc)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(p) for p in first["loc"])
            raise AlgebraDocumentError(first["msg"], location or None) from e

    index = {gen: i for i, gen in enumerate(doc.basis)}
    constants: dict[Pair, dict[int, Fraction]] = {}
    for k, entry in enumerate(doc.brackets):
        where = f"brackets[{k}]"
        for side in ("a", "b"):
            if getattr(entry, side) not in index:
                raise UnknownGeneratorError(
                    f"Unknown generator {getattr(entry, side)!r}", f"{where}.{side}"
                )
        a, b = index[entry.a], index[entry.b]
        if a == b:
            raise DiagonalBracketError(
                f"Diagonal bracket [{entry.a}, {entry.a}]", where
            )
        key = (min(a, b), max(a, b))
        if key in constants:
            raise DuplicateBracketError(
                f"Duplicate bracket [{entry.a}, {entry.b}]", where
            )
        sign = 1 if a < b else -1
        rhs: dict[int, Fraction] = {}
        for t, term in enumerate(entry.rhs):
            term_where = f"{where}.rhs[{t}]"
            if term.gen not in index:
                raise UnknownGeneratorError(
                    f"Unknown generator {term.gen!r}", f"{term_where}.gen"
                )
            coef = _parse_coefficient(term.coef, f"{term_where}.coef")
            c = index[term.gen]
            rhs[c] = rhs.get(c, Fraction(0)) + sign * coef
        constants[key] = rhs

    alg = LieAlgebra(doc.name, doc.basis, constants)
    logger.debug("Parsed algebra", extra={"algebra": alg.name, "dim": alg.dim})
    return alg


def load_algebra(path: Path) -> LieAlgebra:
    """Read and parse an algebra document from a JSON file.

    Raises:
        AlgebraDocumentError: If the file is not valid JSON or not a valid document
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise AlgebraDocumentError(f"Invalid JSON: {e.msg}", f"line {e.lineno}") from e
    return parse_algebra(raw)


def serialize_algebra(alg: LieAlgebra) -> AlgebraDocument:
    """Document form with brackets and rhs terms in basis-index order."""
    brackets = [
        BracketEntry(
            a=alg.basis[a],
            b=alg.basis[b],
            rhs=[
                RhsTerm(gen=alg.basis[c], coef=rational.format_rational(v))
                for c, v in sorted(rhs.items())
            ],
        )
        for (a, b), rhs in sorted(alg.constants.items())
    ]
    return AlgebraDocument(name=alg.name, basis=list(alg.basis), brackets=brackets)


def dump_algebra(alg: LieAlgebra) -> str:
    """Byte-deterministic JSON rendering."""
    return json.dumps(serialize_algebra(alg).model_dump(), indent=2, ensure_ascii=False)


def bracket_vectors(
    alg: LieAlgebra, x: Mapping[int, Fraction], y: Mapping[int, Fraction]
) -> SparseVector:
    """Bracket on index-keyed coefficient vectors."""
    out: SparseVector = {}
    for a, xa in x.items():
        for b, yb in y.items():
            if a != b:
                axpy(out, xa * yb, alg.structure(a, b))
    return out


def bracket(alg: LieAlgebra, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of the structure constants."""
    return alg.element(bracket_vectors(alg, alg.vector(x), alg.vector(y)))


def jacobi_residual(alg: LieAlgebra, a: int, b: int, c: int) -> SparseVector:
    """[Z_a,[Z_b,Z_c]] + [Z_b,[Z_c,Z_a]] + [Z_c,[Z_a,Z_b]]."""
    out: SparseVector = {}
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        inner = alg.structure(y, z)
        axpy(out, Fraction(1), bracket_vectors(alg, {x: Fraction(1)}, inner))
    return out


def jacobi_check(alg: LieAlgebra) -> JacobiReport:
    """Evaluate the Jacobi sum on every unordered triple of distinct generators."""
    violations = []
    for a, b, c in combinations(range(alg.dim), 3):
        residual = jacobi_residual(alg, a, b, c)
        if residual:
            violations.append(
                JacobiViolation(
                    triple=(alg.basis[a], alg.basis[b], alg.basis[c]),
                    residual=[
                        ResidualTerm(gen=alg.basis[k], coef=rational.format_rational(v))
                        for k, v in sorted(residual.items())
                    ],
                )
            )
    if violations:
        logger.warning(
            "Jacobi identity violated",
            extra={"algebra": alg.name, "violations": len(violations)},
        )
    return JacobiReport(algebra=alg.name, passed=not violations, violations=violations)


def adjoint_matrix(
    alg: LieAlgebra, z: AlgebraElement | Mapping[int, Fraction]
) -> rational.Matrix:
    """Matrix whose (C, B) entry is sum_A z^A c^C_{A,B}."""
    coeffs = alg.vector(z) if isinstance(z, AlgebraElement) else z
    out = [[Fraction(0)] * alg.dim for _ in range(alg.dim)]
    for a, za in coeffs.items():
        for b in range(alg.dim):
            for c, v in alg.structure(a, b).items():
                out[c][b] += za * v
    return rational.as_matrix(out)


def coadjoint_matrix(
    alg: LieAlgebra, x: AlgebraElement | Mapping[int, Fraction]
) -> rational.Matrix:
    """Antisymmetric matrix whose (A, B) entry is sum_C x_C c^C_{A,B}.

    Its generic rank is the dimension of a generic coadjoint orbit; basis
    size minus that rank counts the independent invariants.
    """
    coeffs = alg.vector(x) if isinstance(x, AlgebraElement) else x
    out = [[Fraction(0)] * alg.dim for _ in range(alg.dim)]
    for (a, b), rhs in alg.constants.items():
        value = sum(
            (coeffs.get(c, Fraction(0)) * v for c, v in rhs.items()), Fraction(0)
        )
        out[a][b] = value
        out[b][a] = -value
    return rational.as_matrix(out)


def generic_rank(
    alg: LieAlgebra,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
    bound: int = RANK_COEFFICIENT_BOUND,
) -> int:
    """Maximum exact rank of the coadjoint form over pseudorandom integer points.

    Each trial draws z with integer coefficients in [-bound, bound]. The
    result is a lower bound on the generic rank and equals it with
    overwhelming probability.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if alg.is_abelian():
        return 0
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        z = {a: Fraction(rng.randint(-bound, bound)) for a in range(alg.dim)}
        best = max(best, rational.rank(coadjoint_matrix(alg, z)))
    logger.info(
        "Computed generic rank",
        extra={"algebra": alg.name, "rank": best, "seed": seed, "trials": trials},
    )
    return best


def casimir_count(
    alg: LieAlgebra,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
    bound: int = RANK_COEFFICIENT_BOUND,
) -> int:
    """Number of independent Casimirs, basis size minus generic rank."""
    return alg.dim - generic_rank(alg, seed, trials, bound)

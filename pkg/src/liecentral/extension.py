"""Algebraic central extensions by exact linear algebra on 2-cocycles."""

import random
import time
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from itertools import combinations
from typing import Any

from aws_lambda_powertools import Logger
from pydantic import BaseModel, ConfigDict, Field

from . import rational
from .algebra import LieAlgebra, serialize_algebra
from .config import DEFAULT_SEED, SERVICE_NAME
from .exceptions import LieCentralError
from .models import AlgebraFamily, Charge, CocyclePayload, ExtensionPayload
from .sparse import EchelonBasis, MarkowitzEliminator, SparseVector, axpy, dedupe

logger = Logger(service=SERVICE_NAME, child=True)

Pair = tuple[int, int]


def pair_columns(dim: int) -> dict[Pair, int]:
    """Column of each unknown M_ab, a < b, in lexicographic order."""
    return {pair: col for col, pair in enumerate(combinations(range(dim), 2))}


class CocycleAnsatz(BaseModel):
    """Candidate central charges, one per unordered generator pair."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    algebra: LieAlgebra
    unknowns: list[Pair]
    pruned: dict[Pair, str] = Field(default_factory=dict)

    @property
    def active(self) -> list[Pair]:
        return [p for p in self.unknowns if p not in self.pruned]

    def label(self, pair: Pair) -> str:
        a, b = pair
        return f"M[{self.algebra.basis[a]},{self.algebra.basis[b]}]"


class Cocycle(BaseModel):
    """Representative of a nontrivial 2-cocycle class."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    charges: dict[Pair, Fraction]
    central_name: str

    def to_payload(self, alg: LieAlgebra) -> CocyclePayload:
        return CocyclePayload(
            charges=[
                Charge(
                    a=alg.basis[a], b=alg.basis[b], coef=rational.format_rational(v)
                )
                for (a, b), v in sorted(self.charges.items())
            ],
            central_name=self.central_name,
        )


class ExtensionResult(BaseModel):
    """Central extension classes and the extended algebra."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    algebra: LieAlgebra
    cocycles: list[Cocycle]
    extended: LieAlgebra
    pruned: int = 0

    @property
    def dimension(self) -> int:
        return len(self.cocycles)

    def to_payload(self) -> ExtensionPayload:
        return ExtensionPayload(
            algebra=self.algebra.name,
            n_e=self.dimension,
            cocycles=[c.to_payload(self.algebra) for c in self.cocycles],
            extended_algebra=serialize_algebra(self.extended),
        )


def build_ansatz(alg: LieAlgebra) -> CocycleAnsatz:
    """One unknown M_ab for every pair a < b."""
    return CocycleAnsatz(algebra=alg, unknowns=list(combinations(range(alg.dim), 2)))


class ExtensionFreeRegistry:
    """Algebras the solver itself has shown to admit no central extension.

    Entries are keyed by the bracket table with names ignored and are only
    recorded after an unpruned solve.
    """

    def __init__(self) -> None:
        self._verified: dict[tuple[Any, ...], bool] = {}

    def __len__(self) -> int:
        return sum(self._verified.values())

    def is_extension_free(self, alg: LieAlgebra) -> bool:
        key = alg.structural_key()
        if key not in self._verified:
            result = solve_central_extension(alg, self_check=False)
            self._verified[key] = result.dimension == 0
            logger.info(
                "Registry verified subalgebra",
                extra={
                    "algebra": alg.name,
                    "dimension": alg.dim,
                    "extension_free": self._verified[key],
                },
            )
        return self._verified[key]


def standard_pruning_subsets(family: AlgebraFamily | str, n: int) -> list[list[str]]:
    """Euclidean and symplectic subalgebras used to prune catalog ansatze."""
    family = AlgebraFamily(family)
    rotations = [f"J{i}{j}" for i, j in combinations(range(1, n + 1), 2)]

    def with_rotations(prefix: str) -> list[str]:
        return rotations + [f"{prefix}{k}" for k in range(1, n + 1)]

    if family in (AlgebraFamily.IE, AlgebraFamily.GALILEI):
        return [with_rotations("G"), with_rotations("P")]
    if family in (AlgebraFamily.IHA, AlgebraFamily.QHA):
        return [with_rotations(p) for p in ("G", "P", "F", "Q")]
    if family == AlgebraFamily.ISP:
        size = 2 * n + 2
        return [[f"W{a}_{b}" for a in range(1, size + 1) for b in range(a, size + 1)]]
    return []


def prune_by_subalgebras(
    ansatz: CocycleAnsatz,
    known_extension_free: Sequence[Iterable[str]],
    registry: ExtensionFreeRegistry | None = None,
) -> CocycleAnsatz:
    """Fix intra-subset unknowns to zero for verified extension-free subalgebras.

    Subsets whose subalgebra does admit an extension are skipped.

    Raises:
        SubalgebraError: If a subset is not closed under the bracket
    """
    if registry is None:
        registry = ExtensionFreeRegistry()
    alg = ansatz.algebra
    pruned = dict(ansatz.pruned)
    for subset in known_extension_free:
        names = list(subset)
        sub = alg.subalgebra(names)
        if not registry.is_extension_free(sub):
            logger.info(
                "Skipping subset that admits a central extension",
                extra={"algebra": alg.name, "subset": names},
            )
            continue
        note = f"{{{','.join(sub.basis)}}} is extension-free"
        indices = sorted(alg.index(g) for g in names)
        for pair in combinations(indices, 2):
            pruned.setdefault(pair, note)
    logger.info(
        "Pruned ansatz",
        extra={
            "algebra": alg.name,
            "unknowns": len(ansatz.unknowns),
            "pruned": len(pruned),
        },
    )
    return ansatz.model_copy(update={"pruned": pruned})


def _charge_term(
    row: SparseVector, columns: Mapping[Pair, int], d: int, e: int, coef: Fraction
) -> None:
    """row += coef * M_de, with M antisymmetric."""
    if d == e:
        return
    pair, sign = ((d, e), 1) if d < e else ((e, d), -1)
    col = columns.get(pair)
    if col is not None:
        axpy(row, Fraction(1), {col: sign * coef})


def jacobi_system(ansatz: CocycleAnsatz) -> list[SparseVector]:
    """Linear constraints on the active unknowns, one row per generator triple.

    Row for a < b < c: sum_d c^d_ab M_dc + c^d_bc M_da + c^d_ca M_db = 0.
    Columns follow pair_columns; pruned unknowns are fixed to zero.
    """
    alg = ansatz.algebra
    full = pair_columns(alg.dim)
    columns = {p: full[p] for p in ansatz.active}
    rows = []
    for a, b, c in combinations(range(alg.dim), 3):
        row: SparseVector = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for d, coef in alg.structure(x, y).items():
                _charge_term(row, columns, d, z, coef)
        rows.append(row)
    return dedupe(rows)


def coboundary_space(alg: LieAlgebra) -> list[SparseVector]:
    """For each generator g, the trivial cocycle (a, b) -> c^g_ab."""
    columns = pair_columns(alg.dim)
    vectors: list[SparseVector] = [{} for _ in range(alg.dim)]
    for (a, b), rhs in alg.constants.items():
        for g, coef in rhs.items():
            vectors[g][columns[(a, b)]] = coef
    return vectors


def _nullspace_on(
    rows: list[SparseVector], active_columns: list[int]
) -> list[SparseVector]:
    """Kernel restricted to the active columns, in full column indexing."""
    compact = {col: k for k, col in enumerate(active_columns)}
    local = [{compact[c]: v for c, v in r.items()} for r in rows]
    kernel = MarkowitzEliminator(local, len(active_columns)).run().nullspace()
    return [{active_columns[k]: v for k, v in vec.items()} for vec in kernel]


def _default_names(
    alg: LieAlgebra, count: int, preferred: Sequence[str] | None
) -> list[str]:
    if preferred and len(preferred) == count and not set(preferred) & set(alg.basis):
        return list(preferred)
    names, k = [], 1
    while len(names) < count:
        if f"Z{k}" not in alg.basis:
            names.append(f"Z{k}")
        k += 1
    return names


def extended_algebra(
    alg: LieAlgebra, cocycles: Sequence[Cocycle], name: str | None = None
) -> LieAlgebra:
    """alg with one new central generator per cocycle appended to the basis."""
    constants = alg.constants
    for k, cocycle in enumerate(cocycles):
        central = alg.dim + k
        for pair, coef in cocycle.charges.items():
            constants.setdefault(pair, {})[central] = coef
    basis = list(alg.basis) + [c.central_name for c in cocycles]
    return LieAlgebra(name or f"{alg.name}-ext", basis, constants)


def is_cocycle(alg: LieAlgebra, charges: Mapping[Pair, Fraction]) -> bool:
    """True when the charges satisfy every Jacobi constraint."""
    columns = pair_columns(alg.dim)
    vec = {columns[p]: v for p, v in charges.items() if v}
    for row in jacobi_system(build_ansatz(alg)):
        if sum((v * vec.get(c, Fraction(0)) for c, v in row.items()), Fraction(0)):
            return False
    return True


def solve_central_extension(
    alg: LieAlgebra,
    seed: int = DEFAULT_SEED,
    subsets: Sequence[Iterable[str]] | None = None,
    registry: ExtensionFreeRegistry | None = None,
    central_names: Sequence[str] | None = None,
    self_check: bool = True,
) -> ExtensionResult:
    """Nontrivial central extension classes of alg.

    The cocycle space is the kernel of the Jacobi system; its classes are
    taken modulo the coboundaries. Representatives are the reduced echelon
    form, under lexicographic pair order, of the kernel reduced against the
    coboundary echelon basis, so pruned and unpruned solves agree.

    Args:
        alg: Algebra satisfying the Jacobi identity
        seed: Seed for the random-combination self-check
        subsets: Generator subsets offered for pruning
        registry: Extension-free registry used when pruning
        central_names: Names for the new central generators when the
            dimension matches
        self_check: Verify a random combination of the result

    Returns:
        The extension classes with the extended algebra
    """
    started = time.perf_counter()
    ansatz = build_ansatz(alg)
    if subsets:
        ansatz = prune_by_subalgebras(ansatz, subsets, registry)
    full = pair_columns(alg.dim)
    rows = jacobi_system(ansatz)
    active = sorted(full[p] for p in ansatz.active)
    kernel = _nullspace_on(rows, active)

    trivial = EchelonBasis()
    for vec in coboundary_space(alg):
        trivial.add(vec)
    classes = EchelonBasis()
    for vec in kernel:
        remainder = trivial.reduce(vec)
        if remainder:
            classes.add(remainder)

    pairs = {col: pair for pair, col in full.items()}
    representatives = [{pairs[c]: v for c, v in row.items()} for row in classes.rows()]
    names = _default_names(alg, len(representatives), central_names)
    cocycles = [
        Cocycle(charges=r, central_name=nm)
        for r, nm in zip(representatives, names, strict=True)
    ]

    if self_check and cocycles:
        _self_check(alg, cocycles, trivial, seed)

    result = ExtensionResult(
        algebra=alg,
        cocycles=cocycles,
        extended=extended_algebra(alg, cocycles),
        pruned=len(ansatz.pruned),
    )
    logger.info(
        "Solved central extension",
        extra={
            "algebra": alg.name,
            "unknowns": len(ansatz.active),
            "rows": len(rows),
            "kernel": len(kernel),
            "coboundary_rank": trivial.rank,
            "N_e": result.dimension,
            "elapsed_ms": round((time.perf_counter() - started) * 1000, 2),
        },
    )
    return result


def _self_check(
    alg: LieAlgebra, cocycles: Sequence[Cocycle], trivial: EchelonBasis, seed: int
) -> None:
    rng = random.Random(seed)
    full = pair_columns(alg.dim)
    combo: SparseVector = {}
    for cocycle in cocycles:
        factor = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        axpy(combo, factor, {full[p]: v for p, v in cocycle.charges.items()})
    pairs = {col: pair for pair, col in full.items()}
    charges = {pairs[c]: v for c, v in combo.items()}
    if not is_cocycle(alg, charges):
        raise LieCentralError(f"Extension of {alg.name} failed the Jacobi self-check")
    if trivial.contains(combo):
        raise LieCentralError(f"Extension of {alg.name} returned a coboundary")

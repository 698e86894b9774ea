"""Hand-entered catalog of the Lie algebras the engine works with."""

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from aws_lambda_powertools import Logger

from .algebra import LieAlgebra
from .config import MAX_CATALOG_N, SERVICE_NAME
from .models import AlgebraFamily, CatalogEntry, CatalogListing
from .rational import Matrix

logger = Logger(service=SERVICE_NAME, child=True)


def rot(i: int, j: int) -> tuple[str, int]:
    """Name and sign of J_ij, using J_ji = -J_ij."""
    return (f"J{i}{j}", 1) if i < j else (f"J{j}{i}", -1)


def w_name(alpha: int, beta: int) -> str:
    """Symmetric generator W_ab; W_ba is the same generator."""
    a, b = sorted((alpha, beta))
    return f"W{a}_{b}"


def standard_metric(n: int) -> Matrix:
    """The block form [[0, I_n], [-I_n, 0]]."""
    size = 2 * n
    return tuple(
        tuple(
            Fraction(1) if j == i + n else Fraction(-1) if i == j + n else Fraction(0)
            for j in range(size)
        )
        for i in range(size)
    )


def extended_metric(n: int) -> Matrix:
    """Standard metric bordered for the (E, T) pair, ordered P, Q, E, T."""
    base = standard_metric(n)
    size = 2 * n + 2
    out = [[Fraction(0)] * size for _ in range(size)]
    for i in range(2 * n):
        for j in range(2 * n):
            out[i][j] = base[i][j]
    out[2 * n][2 * n + 1] = Fraction(-1)
    out[2 * n + 1][2 * n] = Fraction(1)
    return tuple(tuple(r) for r in out)


class BracketBuilder:
    """Accumulates name-keyed brackets in any argument order."""

    def __init__(self, basis: Iterable[str]) -> None:
        self.basis = list(basis)
        self._index = {gen: i for i, gen in enumerate(self.basis)}
        self._table: dict[tuple[int, int], dict[int, Fraction]] = {}

    def add(self, a: str, b: str, c: str, coef: Fraction | int = 1) -> None:
        """Add coef * c to [a, b]."""
        if not coef or a == b:
            return
        ia, ib, ic = self._index[a], self._index[b], self._index[c]
        sign = 1 if ia < ib else -1
        rhs = self._table.setdefault((min(ia, ib), max(ia, ib)), {})
        updated = rhs.get(ic, Fraction(0)) + sign * Fraction(coef)
        if updated:
            rhs[ic] = updated
        else:
            rhs.pop(ic, None)

    def build(self, name: str) -> LieAlgebra:
        return LieAlgebra(name, self.basis, {k: v for k, v in self._table.items() if v})


def _rotation_names(n: int) -> list[str]:
    return [f"J{i}{j}" for i, j in combinations(range(1, n + 1), 2)]


def _vectors(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(1, n + 1)]


def _add_rotations(builder: BracketBuilder, n: int) -> None:
    """[J_ij, J_kl] = d_jk J_il - d_jl J_ik - d_ik J_jl + d_il J_jk."""
    pairs = list(combinations(range(1, n + 1), 2))
    for (i, j), (k, m) in combinations(pairs, 2):
        left = f"J{i}{j}"
        right = f"J{k}{m}"
        for delta, (p, q), coef in (
            (j == k, (i, m), 1),
            (j == m, (i, k), -1),
            (i == k, (j, m), -1),
            (i == m, (j, k), 1),
        ):
            if delta and p != q:
                target, sign = rot(p, q)
                builder.add(left, right, target, coef * sign)


def _add_vector(builder: BracketBuilder, prefix: str, n: int) -> None:
    """[J_ij, X_k] = d_jk X_i - d_ik X_j."""
    for i, j in combinations(range(1, n + 1), 2):
        builder.add(f"J{i}{j}", f"{prefix}{j}", f"{prefix}{i}", 1)
        builder.add(f"J{i}{j}", f"{prefix}{i}", f"{prefix}{j}", -1)


def _add_pairing(
    builder: BracketBuilder, left: str, right: str, target: str, n: int
) -> None:
    """[left_i, right_k] = d_ik target."""
    for i in range(1, n + 1):
        builder.add(f"{left}{i}", f"{right}{i}", target)


def _add_symplectic(
    builder: BracketBuilder, zeta: Matrix, vectors: list[str] | None = None
) -> None:
    """W brackets for metric zeta, plus the action on vector generators V_a."""
    size = len(zeta)
    pairs = [(a, b) for a in range(size) for b in range(a, size)]

    def z(x: int, y: int) -> Fraction:
        return zeta[x][y]

    for (a, b), (k, d) in combinations(pairs, 2):
        left, right = w_name(a + 1, b + 1), w_name(k + 1, d + 1)
        for coef, (p, q) in (
            (z(b, k), (a, d)),
            (z(a, k), (b, d)),
            (z(b, d), (a, k)),
            (z(a, d), (b, k)),
        ):
            if coef:
                builder.add(left, right, w_name(p + 1, q + 1), coef)
    if vectors is None:
        return
    for a, b in pairs:
        left = w_name(a + 1, b + 1)
        for k in range(size):
            builder.add(left, vectors[k], vectors[a], z(b, k))
            builder.add(left, vectors[k], vectors[b], z(a, k))


def _w_names(size: int) -> list[str]:
    return [w_name(a, b) for a in range(1, size + 1) for b in range(a, size + 1)]


def heisenberg(n: int) -> LieAlgebra:
    builder = BracketBuilder(_vectors("P", n) + _vectors("Q", n) + ["I"])
    _add_pairing(builder, "P", "Q", "I", n)
    return builder.build(f"H({n})")


def _ha_builder(n: int, extra: list[str]) -> BracketBuilder:
    builder = BracketBuilder(
        _rotation_names(n) + _vectors("G", n) + _vectors("F", n) + ["R"] + extra
    )
    _add_rotations(builder, n)
    _add_vector(builder, "G", n)
    _add_vector(builder, "F", n)
    _add_pairing(builder, "G", "F", "R", n)
    return builder


def hamilton(n: int) -> LieAlgebra:
    """Ha(n): rotations, velocity and force boosts, and R."""
    return _ha_builder(n, []).build(f"Ha({n})")


def _iha_builder(n: int, extra: list[str]) -> BracketBuilder:
    builder = _ha_builder(n, _vectors("P", n) + _vectors("Q", n) + ["E", "T"] + extra)
    _add_vector(builder, "P", n)
    _add_vector(builder, "Q", n)
    _add_pairing(builder, "G", "Q", "T", n)
    _add_pairing(builder, "F", "P", "T", n)
    for i in range(1, n + 1):
        builder.add("E", f"G{i}", f"P{i}", -1)
        builder.add("E", f"F{i}", f"Q{i}", 1)
    builder.add("E", "R", "T", 2)
    return builder


def inhomogeneous_hamilton(n: int) -> LieAlgebra:
    """IHa(n): Ha(n) with the translations P, Q, E, T."""
    return _iha_builder(n, []).build(f"IHa({n})")


def quantum_hamilton(n: int) -> LieAlgebra:
    """QHa(n): IHa(n) centrally extended by I, M and A."""
    builder = _iha_builder(n, ["I", "M", "A"])
    _add_pairing(builder, "P", "Q", "I", n)
    builder.add("E", "T", "I", -1)
    _add_pairing(builder, "G", "P", "M", n)
    _add_pairing(builder, "F", "Q", "A", n)
    return builder.build(f"QHa({n})")


def _ie_builder(n: int, extra: list[str]) -> BracketBuilder:
    builder = BracketBuilder(
        _rotation_names(n) + _vectors("G", n) + _vectors("P", n) + ["E"] + extra
    )
    _add_rotations(builder, n)
    _add_vector(builder, "G", n)
    _add_vector(builder, "P", n)
    for i in range(1, n + 1):
        builder.add("E", f"G{i}", f"P{i}", -1)
    return builder


def inhomogeneous_euclidean(n: int) -> LieAlgebra:
    """IE(n): rotations, boosts, space and time translations."""
    return _ie_builder(n, []).build(f"IE({n})")


def galilei(n: int) -> LieAlgebra:
    """Galilei(n): IE(n) with the mass generator M."""
    builder = _ie_builder(n, ["M"])
    _add_pairing(builder, "G", "P", "M", n)
    return builder.build(f"Galilei({n})")


def special_orthogonal(n: int) -> LieAlgebra:
    builder = BracketBuilder(_rotation_names(n))
    _add_rotations(builder, n)
    return builder.build(f"so({n})")


def euclidean(n: int) -> LieAlgebra:
    builder = BracketBuilder(_rotation_names(n) + _vectors("P", n))
    _add_rotations(builder, n)
    _add_vector(builder, "P", n)
    return builder.build(f"e({n})")


def symplectic(n: int) -> LieAlgebra:
    """sp(2n) on the standard metric."""
    builder = BracketBuilder(_w_names(2 * n))
    _add_symplectic(builder, standard_metric(n))
    return builder.build(f"sp({2 * n})")


def hamilton_symplectic(n: int) -> LieAlgebra:
    """HSp(2n): sp(2n) acting on the Heisenberg algebra H(n)."""
    builder = BracketBuilder(
        _w_names(2 * n) + _vectors("P", n) + _vectors("Q", n) + ["I"]
    )
    zeta = standard_metric(n)
    vector = _vectors("P", n) + _vectors("Q", n)
    _add_symplectic(builder, zeta, vector)
    for a, b in combinations(range(2 * n), 2):
        builder.add(vector[a], vector[b], "I", zeta[a][b])
    return builder.build(f"HSp({2 * n})")


def inhomogeneous_symplectic(n: int) -> LieAlgebra:
    """ISp(2n+2): sp on the extended metric with translations Y."""
    size = 2 * n + 2
    builder = BracketBuilder(_w_names(size) + _vectors("Y", size))
    _add_symplectic(builder, extended_metric(n), _vectors("Y", size))
    return builder.build(f"ISp({size})")


def translations(m: int) -> LieAlgebra:
    """Abelian T(m)."""
    return BracketBuilder(_vectors("X", m)).build(f"T({m})")


@dataclass(frozen=True)
class FamilySpec:
    """Catalog metadata for one family."""

    family: AlgebraFamily
    label: str
    description: str
    builder: Callable[[int], LieAlgebra]
    dimension: Callable[[int], int]
    dimension_formula: str
    n_min: int = 1
    n_max: int = MAX_CATALOG_N


FAMILIES: dict[AlgebraFamily, FamilySpec] = {
    spec.family: spec
    for spec in (
        FamilySpec(
            AlgebraFamily.H,
            "H(n)",
            "Weyl-Heisenberg algebra",
            heisenberg,
            lambda n: 2 * n + 1,
            "2n+1",
        ),
        FamilySpec(
            AlgebraFamily.HA,
            "Ha(n)",
            "Homogeneous Hamilton algebra",
            hamilton,
            lambda n: n * (n - 1) // 2 + 2 * n + 1,
            "n(n-1)/2+2n+1",
        ),
        FamilySpec(
            AlgebraFamily.HSP,
            "HSp(2n)",
            "Symplectic algebra acting on H(n)",
            hamilton_symplectic,
            lambda n: n * (2 * n + 1) + 2 * n + 1,
            "n(2n+1)+2n+1",
        ),
        FamilySpec(
            AlgebraFamily.IE,
            "IE(n)",
            "Inhomogeneous Euclidean algebra with boosts",
            inhomogeneous_euclidean,
            lambda n: n * (n - 1) // 2 + 2 * n + 1,
            "n(n-1)/2+2n+1",
        ),
        FamilySpec(
            AlgebraFamily.IHA,
            "IHa(n)",
            "Inhomogeneous Hamilton algebra",
            inhomogeneous_hamilton,
            lambda n: n * (n - 1) // 2 + 4 * n + 3,
            "n(n-1)/2+4n+3",
        ),
        FamilySpec(
            AlgebraFamily.ISP,
            "ISp(2n+2)",
            "Inhomogeneous symplectic algebra",
            inhomogeneous_symplectic,
            lambda n: (n + 1) * (2 * n + 3) + 2 * n + 2,
            "(n+1)(2n+3)+2n+2",
        ),
        FamilySpec(
            AlgebraFamily.GALILEI,
            "Galilei(n)",
            "Centrally extended Galilei algebra",
            galilei,
            lambda n: n * (n - 1) // 2 + 2 * n + 2,
            "n(n-1)/2+2n+2",
        ),
        FamilySpec(
            AlgebraFamily.QHA,
            "QHa(n)",
            "Centrally extended inhomogeneous Hamilton algebra",
            quantum_hamilton,
            lambda n: n * (n - 1) // 2 + 4 * n + 6,
            "n(n-1)/2+4n+6",
        ),
        FamilySpec(
            AlgebraFamily.SO,
            "so(n)",
            "Rotation algebra",
            special_orthogonal,
            lambda n: n * (n - 1) // 2,
            "n(n-1)/2",
            n_min=2,
        ),
        FamilySpec(
            AlgebraFamily.SP,
            "sp(2n)",
            "Symplectic algebra",
            symplectic,
            lambda n: n * (2 * n + 1),
            "n(2n+1)",
        ),
        FamilySpec(
            AlgebraFamily.E,
            "e(n)",
            "Euclidean algebra",
            euclidean,
            lambda n: n * (n + 1) // 2,
            "n(n+1)/2",
        ),
        FamilySpec(
            AlgebraFamily.T,
            "T(m)",
            "Abelian translation algebra",
            translations,
            lambda n: n,
            "m",
        ),
    )
}


def dimension(family: AlgebraFamily | str, n: int) -> int:
    return FAMILIES[AlgebraFamily(family)].dimension(n)


class Catalog:
    """Catalog lookup with optional algebras that replace entries by name."""

    def __init__(self, overrides: Mapping[str, LieAlgebra] | None = None) -> None:
        self._overrides: dict[str, LieAlgebra] = dict(overrides or {})
        self._cache: dict[tuple[AlgebraFamily, int], LieAlgebra] = {}

    def override(self, alg: LieAlgebra) -> None:
        """Replace the catalog algebra carrying the same name."""
        logger.info("Catalog override registered", extra={"algebra": alg.name})
        self._overrides[alg.name] = alg
        self._cache.clear()

    def get(self, family: AlgebraFamily | str, n: int) -> LieAlgebra:
        """Catalog algebra for a family and size.

        Raises:
            ValueError: If the family is unknown or n is out of range
        """
        try:
            spec = FAMILIES[AlgebraFamily(family)]
        except ValueError:
            raise ValueError(f"Unknown algebra family: {family!r}") from None
        if not spec.n_min <= n <= spec.n_max:
            raise ValueError(
                f"{spec.label} requires {spec.n_min} <= n <= {spec.n_max}, got {n}"
            )
        key = (spec.family, n)
        if key not in self._cache:
            alg = spec.builder(n)
            self._cache[key] = self._overrides.get(alg.name, alg)
        return self._cache[key]

    def listing(self) -> CatalogListing:
        entries = []
        for spec in FAMILIES.values():
            sizes = [n for n in (1, 2, 3) if spec.n_min <= n <= spec.n_max]
            entries.append(
                CatalogEntry(
                    family=spec.family,
                    label=spec.label,
                    description=spec.description,
                    n_min=spec.n_min,
                    n_max=spec.n_max,
                    dimension_formula=spec.dimension_formula,
                    dimensions={str(n): spec.dimension(n) for n in sizes},
                )
            )
        return CatalogListing(families=entries)

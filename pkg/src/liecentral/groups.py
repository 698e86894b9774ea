"""Exact parameterized matrix realizations of the catalog groups."""

import math
import random
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from aws_lambda_powertools import Logger
from pydantic import BaseModel, ConfigDict

from . import rational
from .algebra import LieAlgebra
from .catalog import FAMILIES, extended_metric, standard_metric, w_name
from .config import SERVICE_NAME
from .exceptions import (
    FamilyMismatchError,
    ParameterError,
    SpanError,
    TemplateError,
)
from .models import AlgebraFamily, GroupElementPayload, GroupFamily
from .rational import ONE, ZERO, Matrix, Vector
from .sparse import EchelonBasis, SparseVector

logger = Logger(service=SERVICE_NAME, child=True)

Params = dict[str, Any]


class GroupElement(BaseModel):
    """A family member together with the parameters that produce it."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: GroupFamily
    n: int
    params: Params
    matrix: Matrix

    def to_payload(self) -> GroupElementPayload:
        return GroupElementPayload(
            family=self.family,
            n=self.n,
            params={k: _format_param(v) for k, v in self.params.items()},
            matrix=rational.format_matrix(self.matrix),
        )


class GeneratorMatrix(BaseModel):
    """Lie algebra generator realized as a matrix."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    matrix: Matrix


class SymplecticMetric(BaseModel):
    """Antisymmetric metric with square minus the identity."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    extended: bool
    matrix: Matrix


class TimeInvarianceResult(BaseModel):
    """Outcome of the S T S^-1 = T test with the recovered HSp parameters."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    invariant: bool
    params: Params | None = None


def _format_param(value: Any) -> Any:
    if isinstance(value, Fraction):
        return rational.format_rational(value)
    if isinstance(value, tuple) and value and isinstance(value[0], tuple):
        return rational.format_matrix(value)
    if isinstance(value, tuple):
        return [rational.format_rational(x) for x in value]
    return value


def symplectic_metric(n: int, extended: bool = False) -> SymplecticMetric:
    """The standard metric, or its (E, T) bordered form when extended."""
    matrix = extended_metric(n) if extended else standard_metric(n)
    return SymplecticMetric(n=n, extended=extended, matrix=matrix)


def check_symplectic(s: Matrix, metric: SymplecticMetric) -> bool:
    """Exact test of S zeta S^t = zeta."""
    if rational.shape(s) != rational.shape(metric.matrix):
        return False
    return rational.matmul(s, metric.matrix, rational.transpose(s)) == metric.matrix


def is_orthogonal(r: Matrix) -> bool:
    return rational.matmul(r, rational.transpose(r)) == rational.identity(len(r))


def _scalar(params: Mapping[str, Any], key: str) -> Fraction:
    value = params[key]
    try:
        if isinstance(value, str):
            return rational.parse_rational(value)
        return Fraction(value)
    except (TypeError, ValueError) as e:
        raise ParameterError(f"Parameter {key} is not a rational: {value!r}") from e


def _sign(params: Mapping[str, Any], key: str = "eps") -> int:
    value = _scalar(params, key)
    if value not in (1, -1):
        raise ParameterError(f"Parameter {key} must be +1 or -1, got {value}")
    return int(value)


def _vector(params: Mapping[str, Any], key: str, length: int) -> Vector:
    value = params[key]
    if len(value) != length:
        raise ParameterError(
            f"Parameter {key} needs {length} entries, got {len(value)}"
        )
    return tuple(_scalar({key: x}, key) for x in value)


def _square(params: Mapping[str, Any], key: str, size: int) -> Matrix:
    value = params[key]
    if len(value) != size or any(len(r) != size for r in value):
        raise ParameterError(f"Parameter {key} must be {size}x{size}")
    return tuple(tuple(_scalar({key: x}, key) for x in r) for r in value)


def _unit_vector(length: int, k: int, s: Fraction) -> Vector:
    return tuple(s if i == k else ZERO for i in range(length))


def _random_rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        if value or not nonzero:
            return value


def random_orthogonal(n: int, rng: random.Random) -> Matrix:
    """Cayley transform (I - K)(I + K)^-1 of a random skew K, possibly reflected."""
    k = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            k[i][j] = _random_rational(rng)
            k[j][i] = -k[i][j]
    skew = rational.as_matrix(k)
    eye = rational.identity(n)
    r = rational.matmul(
        rational.sub(eye, skew), rational.inverse(rational.add(eye, skew))
    )
    if rng.random() < 0.5:
        r = (tuple(-x for x in r[0]),) + r[1:]
    return r


def random_symplectic(metric: Matrix, rng: random.Random, factors: int = 3) -> Matrix:
    """Product of transvections I + lambda v v^t zeta."""
    size = len(metric)
    s = rational.identity(size)
    for _ in range(factors):
        v = [Fraction(rng.randint(-2, 2)) for _ in range(size)]
        if not any(v):
            v[rng.randrange(size)] = ONE
        lam = _random_rational(rng, nonzero=True)
        outer = rational.matmul(rational.column(v), rational.row(v), metric)
        step = rational.add(rational.identity(size), rational.scale(outer, lam))
        s = rational.matmul(s, step)
    return s


def omega_matrix(
    n: int, eps: int, a: Fraction, block: Matrix, w: Vector, r: Fraction
) -> Matrix:
    """[[aA, 0, w], [-eps a w^t zeta A, eps a^2, r], [0, 0, eps]] of size 2n+2."""
    size = 2 * n + 2
    mid, last = 2 * n, 2 * n + 1
    coupling = rational.matmul(rational.row(w), standard_metric(n), block)[0]
    out = [[ZERO] * size for _ in range(size)]
    for i in range(2 * n):
        for j in range(2 * n):
            out[i][j] = a * block[i][j]
        out[i][last] = w[i]
        out[mid][i] = -eps * a * coupling[i]
    out[mid][mid] = eps * a * a
    out[mid][last] = r
    out[last][last] = Fraction(eps)
    return rational.as_matrix(out)


def affine(linear: Matrix, translation: Sequence[Fraction]) -> Matrix:
    """[[L, t], [0, 1]]."""
    size = len(linear)
    rows = [tuple(linear[i]) + (Fraction(translation[i]),) for i in range(size)]
    rows.append((ZERO,) * size + (ONE,))
    return tuple(rows)


def _split_affine(m: Matrix) -> tuple[Matrix, Vector]:
    size = len(m) - 1
    linear = rational.sub_block(m, range(size), range(size))
    return linear, tuple(m[i][size] for i in range(size))


def _doubled(r: Matrix) -> Matrix:
    n = len(r)
    return rational.block([[r, 0], [0, r]], [n, n])


def _rational_sqrt(value: Fraction) -> Fraction | None:
    if value <= 0:
        return None
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num != value.numerator or den * den != value.denominator:
        return None
    return Fraction(num, den)


@dataclass(frozen=True)
class Chart:
    """One coordinate direction through the identity."""

    name: str
    point: Callable[[Fraction], Params]
    scale: Fraction = ONE


def _rotation_direction(n: int, i: int, j: int, s: Fraction) -> Matrix:
    """I + s (E_ij - E_ji), 1-based indices."""
    eye = rational.identity(n)
    gen = rational.sub(
        rational.unit(n, n, i - 1, j - 1), rational.unit(n, n, j - 1, i - 1)
    )
    return rational.add(eye, rational.scale(gen, s))


def _symplectic_direction(metric: Matrix, a: int, b: int, s: Fraction) -> Matrix:
    """I + s (E_ab + E_ba) zeta, 1-based indices."""
    size = len(metric)
    sym = rational.add(
        rational.unit(size, size, a - 1, b - 1), rational.unit(size, size, b - 1, a - 1)
    )
    return rational.add(
        rational.identity(size), rational.scale(rational.matmul(sym, metric), s)
    )


class GroupTemplate:
    """Parameterized matrix family.

    Subclasses provide the raw template, its inverse (parameter
    extraction) and the coordinate charts used to differentiate it.
    """

    family: GroupFamily
    keys: tuple[str, ...] = ()

    def size(self, n: int) -> int:
        raise NotImplementedError

    def raw(self, n: int, params: Params) -> Matrix:
        raise NotImplementedError

    def normalize(self, n: int, params: Mapping[str, Any]) -> Params:
        raise NotImplementedError

    def extract(self, n: int, m: Matrix) -> Params:
        raise NotImplementedError

    def identity_params(self, n: int) -> Params:
        raise NotImplementedError

    def random_params(self, n: int, rng: random.Random) -> Params:
        raise NotImplementedError

    def charts(self, n: int) -> list[Chart]:
        raise TemplateError(f"No generator charts for family {self.family.value}")

    def validate(self, n: int, params: Mapping[str, Any]) -> Params:
        missing = set(self.keys) - set(params)
        extra = set(params) - set(self.keys)
        if missing or extra:
            raise ParameterError(
                f"Family {self.family.value} takes parameters {list(self.keys)}; "
                f"missing {sorted(missing)}, unexpected {sorted(extra)}"
            )
        return self.normalize(n, params)

    def _chart(
        self,
        n: int,
        name: str,
        key: str,
        value: Callable[[Fraction], Any],
        scale: int = 1,
    ) -> Chart:
        base = self.identity_params(n)
        return Chart(name, lambda s: {**base, key: value(s)}, Fraction(scale))


class UpsilonTemplate(GroupTemplate):
    """Weyl-Heisenberg elements Upsilon(w, iota)."""

    family = GroupFamily.H
    keys = ("w", "iota")

    def size(self, n: int) -> int:
        return 2 * n + 2

    def raw(self, n: int, params: Params) -> Matrix:
        return omega_matrix(
            n, 1, ONE, rational.identity(2 * n), params["w"], params["iota"]
        )

    def normalize(self, n: int, params: Mapping[str, Any]) -> Params:
        return {"w": _vector(params, "w", 2 * n), "iota": _scalar(params, "iota")}

    def extract(self, n: int, m: Matrix) -> Params:
        last = 2 * n + 1
        return {"w": tuple(m[i][last] for i in range(2 * n)), "iota": m[2 * n][last]}

    def identity_params(self, n: int) -> Params:
        return {"w": (ZERO,) * (2 * n), "iota": ZERO}

    def random_params(self, n: int, rng: random.Random) -> Params:
        return {
            "w": tuple(_random_rational(rng) for _ in range(2 * n)),
            "iota": _random_rational(rng),
        }

    def _heisenberg_charts(self, n: int) -> list[Chart]:
        charts = [
            self._chart(n, f"P{k}", "w", lambda s, k=k: _unit_vector(2 * n, k - 1, s))
            for k in range(1, n + 1)
        ]
        charts += [
            self._chart(
                n, f"Q{k}", "w", lambda s, k=k: _unit_vector(2 * n, n + k - 1, s)
            )
            for k in range(1, n + 1)
        ]
        charts.append(self._chart(n, "I", "iota", lambda s: s, scale=-2))
        return charts

    def charts(self, n: int) -> list[Chart]:
        return self._heisenberg_charts(n)


class GammaTemplate(UpsilonTemplate):
    """HSp(2n) elements Gamma(eps, A, w, iota)."""

    family = GroupFamily.HSP
    keys = ("eps", "A", "w", "iota")

    def raw(self, n: int, params: Params) -> Matrix:
        return omega_matrix(
            n, params["eps"], ONE, params["A"], params["w"], params["iota"]
        )

    def normalize(self, n: int, params: Mapping[str, Any]) -> Params:
        a = _square(params, "A", 2 * n)
        if not check_symplectic(a, symplectic_metric(n)):
            raise ParameterError("Block A is not symplectic")
        return {"eps": _sign(params), "A": a, **super().normalize(n, params)}

    def extract(self, n: int, m: Matrix) -> Params:
        block = rational.sub_block(m, range(2 * n), range(2 * n))
        return {"eps": m[2 * n + 1][2 * n + 1], "A": block, **super().extract(n, m)}

    def identity_params(self, n: int) -> Params:
        return {"eps": 1, "A": rational.identity(2 * n), **super().identity_params(n)}

    def random_params(self, n: int, rng: random.Random) -> Params:
        return {
            "eps": rng.choice((1, -1)),
            "A": random_symplectic(standard_metric(n), rng),
            **super().random_params(n, rng),
        }

    def charts(self, n: int) -> list[Chart]:
        metric = standard_metric(n)
        charts = [
            self._chart(
                n,
                w_name(a, b),
                "A",
                lambda s, a=a, b=b: _symplectic_direction(metric, a, b, s),
            )
            for a in range(1, 2 * n + 1)
            for b in range(a, 2 * n + 1)
        ]
        return charts + self._heisenberg_charts(n)


class OmegaTemplate(GammaTemplate):
    """Linear automorphisms Omega(eps, a, A, w, r) of the Weyl-Heisenberg group."""

    family = GroupFamily.AUT_H
    keys = ("eps", "a", "A", "w", "r")

    def raw(self, n: int, params: Params) -> Matrix:
        return omega_matrix(
            n, params["eps"], params["a"], params["A"], params["w"], params["r"]
        )

    def normalize(self, n: int, params: Mapping[str, Any]) -> Params:
        a = _scalar(params, "a")
        if not a:
            raise ParameterError("Scale a must be nonzero")
        base = super().normalize(n, {**params, "iota": params["r"]})
        return {
            "eps": base["eps"],
            "a": a,
            "A": base["A"],
            "w": base["w"],
            "r": base["iota"],
        }

    def extract(self, n: int, m: Matrix) -> Params:
        mid, last = 2 * n, 2 * n + 1
        eps = m[last][last]
        if eps not in (1, -1):
            raise TemplateError(f"Corner entry {eps} is not +1 or -1")
        a = _rational_sqrt(eps * m[mid][mid])
        if a is None:
            raise TemplateError("Middle entry is not eps times a rational square")
        block = rational.scale(rational.sub_block(m, range(2 * n), range(2 * n)), 1 / a)
        return {
            "eps": eps,
            "a": a,
            "A": block,
            "w": tuple(m[i][last] for i in range(2 * n)),
            "r": m[mid][last],
        }

    def identity_params(self, n: int) -> Params:
        base = super().identity_params(n)
        return {"eps": 1, "a": ONE, "A": base["A"], "w": base["w"], "r": ZERO}

    def random_params(self, n: int, rng: random.Random) -> Params:
        base = super().random_params(n, rng)
        return {
            "eps": base["eps"],
            "a": _random_rational(rng, nonzero=True),
            "A": base["A"],
            "w": base["w"],
            "r": base["iota"],
        }

    def charts(self, n: int) -> list[Chart]:
        raise TemplateError("No generator charts for family aut_h")


class HamiltonTemplate(GroupTemplate):
    """Ha(n) elements Phi(eps, R, v, f, r)."""

    family = GroupFamily.HA
    keys = ("eps", "R", "v", "f", "r")

    def size(self, n: int) -> int:
        return 2 * n + 2

    def raw(self, n: int, params: Params) -> Matrix:
        return omega_matrix(
            n,
            params["eps"],
            ONE,
            _doubled(params["R"]),
            params["f"] + params["v"],
            params["r"],
        )

    def normalize(self, n: int, params: Mapping[str, Any]) -> Params:
        r = _square(params, "R", n)
        if not is_orthogonal(r):
            raise ParameterError("Block R is not orthogonal")
        return {
            "eps": _sign(params),
            "R": r,
            "v": _vector(params, "v", n),
            "f": _vector(params, "f", n),
            "r": _scalar(params, "r"),
        }

    def extract(self, n: int, m: Matrix) -> Params:
        last = 2 * n + 1
        return {
            "eps": m[last][last],
            "R": rational.sub_block(m, range(n), range(n)),
            "v": tuple(m[n + i][last] for i in range(n)),
            "f": tuple(m[i][last] for i in range(n)),
            "r": m[2 * n][last],
        }

    def identity_params(self, n: int) -> Params:
        zero = (ZERO,) * n
        return {"eps": 1, "R": rational.identity(n), "v": zero, "f": zero, "r": ZERO}

    def random_params(self, n: int, rng: random.Random) -> Params:
        return {
            "eps": rng.choice((1, -1)),
            "R": random_orthogonal(n, rng),
            "v": tuple(_random_rational(rng) for _ in range(n)),
            "f": tuple(_random_rational(rng) for _ in range(n)),
            "r": _random_rational(rng),
        }

    def _rotation_charts(self, n: int) -> list[Chart]:
        return [
            self._chart(
                n, f"J{i}{j}", "R", lambda s, i=i, j=j: _rotation_direction(n, i, j, s)
            )
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
        ]

    def _vector_charts(
        self, n: int, prefix: str, key: str, scale: int = 1
    ) -> list[Chart]:
        return [
            self._chart(
                n, f"{prefix}{k}", key, lambda s, k=k: _unit_vector(n, k - 1, s), scale
            )
            for k in range(1, n + 1)
        ]

    def charts(self, n: int) -> list[Chart]:
        return (
            self._rotation_charts(n)
            + self._vector_charts(n, "G", "v")
            + self._vector_charts(n, "F", "f", scale=-1)
            + [self._chart(n, "R", "r", lambda s: s, scale=-2)]
        )


class InhomogeneousHamiltonTemplate(HamiltonTemplate):
    """IHa(n) elements: Ha(n) with the translation column.

    Translation entries are named after the generator they produce: q sits
    in the position rows, p in the momentum rows, t in the energy row and
    e in the time row.
    """

    family = GroupFamily.IHA
    keys = ("eps", "R", "v", "f", "r", "q", "p", "e", "t")

    def size(self, n: int) -> int:
        return 2 * n + 3

    def raw(self, n: int, params: Params) -> Matrix:
        linear = super().raw(n, params)
        return affine(linear, params["q"] + params["p"] + (params["t"], params["e"]))

    def normalize(self, n: int, params: Mapping[str, Any]) -> Params:
        base = super().normalize(n, params)
        return {
            **base,
            "q": _vector(params, "q", n),
            "p": _vector(params, "p", n),
            "e": _scalar(params, "e"),
            "t": _scalar(params, "t"),
        }

    def extract(self, n: int, m: Matrix) -> Params:
        linear, column = _split_affine(m)
        return {
            **super().extract(n, linear),
            "q": column[:n],
            "p": column[n : 2 * n],
            "t": column[2 * n],
            "e": column[2 * n + 1],
        }

    def identity_params(self, n: int) -> Params:
        zero = (ZERO,) * n
        return {
            **super().identity_params(n),
            "q": zero,
            "p": zero,
            "e": ZERO,
            "t": ZERO,
        }

    def random_params(self, n: int, rng: random.Random) -> Params:
        return {
            **super().random_params(n, rng),
            "q": tuple(_random_rational(rng) for _ in range(n)),
            "p": tuple(_random_rational(rng) for _ in range(n)),
            "e": _random_rational(rng),
            "t": _random_rational(rng),
        }

    def charts(self, n: int) -> list[Chart]:
        return (
            super().charts(n)
            + self._vector_charts(n, "P", "p")
            + self._vector_charts(n, "Q", "q")
            + [
                self._chart(n, "E", "e", lambda s: s),
                self._chart(n, "T", "t", lambda s: s),
            ]
        )


class InhomogeneousEuclideanTemplate(InhomogeneousHamiltonTemplate):
    """IE(n) elements Phi(eps, R, v, 0, 0, p, 0, e, 0)."""

    family = GroupFamily.IE
    keys = ("eps", "R", "v", "p", "e")
    _fixed = ("f", "r", "q", "t")

    def _full(self, n: int, params: Mapping[str, Any]) -> Params:
        full = InhomogeneousHamiltonTemplate.identity_params(self, n)
        full.update({k: params[k] for k in self.keys})
        return full

    def raw(self, n: int, params: Params) -> Matrix:
        return super().raw(n, self._full(n, params))

    def normalize(self, n: int, params: Mapping[str, Any]) -> Params:
        full = super().normalize(n, self._full(n, params))
        return {k: full[k] for k in self.keys}

    def extract(self, n: int, m: Matrix) -> Params:
        full = super().extract(n, m)
        return {k: full[k] for k in self.keys}

    def identity_params(self, n: int) -> Params:
        full = super().identity_params(n)
        return {k: full[k] for k in self.keys}

    def random_params(self, n: int, rng: random.Random) -> Params:
        full = super().random_params(n, rng)
        return {k: full[k] for k in self.keys}

    def charts(self, n: int) -> list[Chart]:
        return (
            self._rotation_charts(n)
            + self._vector_charts(n, "G", "v")
            + self._vector_charts(n, "P", "p")
            + [self._chart(n, "E", "e", lambda s: s)]
        )


class InhomogeneousGammaTemplate(GammaTemplate):
    """IHSp(2n+2) elements: Gamma with the (z, e, t) translation column."""

    family = GroupFamily.IHSP
    keys = ("eps", "A", "w", "iota", "z", "e", "t")

    def size(self, n: int) -> int:
        return 2 * n + 3

    def raw(self, n: int, params: Params) -> Matrix:
        return affine(super().raw(n, params), params["z"] + (params["e"], params["t"]))

    def normalize(self, n: int, params: Mapping[str, Any]) -> Params:
        return {
            **super().normalize(n, params),
            "z": _vector(params, "z", 2 * n),
            "e": _scalar(params, "e"),
            "t": _scalar(params, "t"),
        }

    def extract(self, n: int, m: Matrix) -> Params:
        linear, column = _split_affine(m)
        return {
            **super().extract(n, linear),
            "z": column[: 2 * n],
            "e": column[2 * n],
            "t": column[2 * n + 1],
        }

    def identity_params(self, n: int) -> Params:
        return {
            **super().identity_params(n),
            "z": (ZERO,) * (2 * n),
            "e": ZERO,
            "t": ZERO,
        }

    def random_params(self, n: int, rng: random.Random) -> Params:
        return {
            **super().random_params(n, rng),
            "z": tuple(_random_rational(rng) for _ in range(2 * n)),
            "e": _random_rational(rng),
            "t": _random_rational(rng),
        }

    def charts(self, n: int) -> list[Chart]:
        raise TemplateError("No generator charts for family ihsp")


class InhomogeneousSymplecticTemplate(GroupTemplate):
    """ISp(2n+2) elements [[A, y], [0, 1]] on the extended metric."""

    family = GroupFamily.ISP
    keys = ("A", "y")

    def size(self, n: int) -> int:
        return 2 * n + 3

    def raw(self, n: int, params: Params) -> Matrix:
        return affine(params["A"], params["y"])

    def normalize(self, n: int, params: Mapping[str, Any]) -> Params:
        a = _square(params, "A", 2 * n + 2)
        if not check_symplectic(a, symplectic_metric(n, extended=True)):
            raise ParameterError("Block A is not symplectic for the extended metric")
        return {"A": a, "y": _vector(params, "y", 2 * n + 2)}

    def extract(self, n: int, m: Matrix) -> Params:
        linear, column = _split_affine(m)
        return {"A": linear, "y": column}

    def identity_params(self, n: int) -> Params:
        return {"A": rational.identity(2 * n + 2), "y": (ZERO,) * (2 * n + 2)}

    def random_params(self, n: int, rng: random.Random) -> Params:
        return {
            "A": random_symplectic(extended_metric(n), rng),
            "y": tuple(_random_rational(rng) for _ in range(2 * n + 2)),
        }

    def charts(self, n: int) -> list[Chart]:
        size = 2 * n + 2
        metric = extended_metric(n)
        charts = [
            self._chart(
                n,
                w_name(a, b),
                "A",
                lambda s, a=a, b=b: _symplectic_direction(metric, a, b, s),
            )
            for a in range(1, size + 1)
            for b in range(a, size + 1)
        ]
        charts += [
            self._chart(n, f"Y{k}", "y", lambda s, k=k: _unit_vector(size, k - 1, s))
            for k in range(1, size + 1)
        ]
        return charts


class TranslationTemplate(GroupTemplate):
    """Abelian translations [[I, x], [0, 1]] in m dimensions."""

    family = GroupFamily.T
    keys = ("x",)

    def size(self, n: int) -> int:
        return n + 1

    def raw(self, n: int, params: Params) -> Matrix:
        return affine(rational.identity(n), params["x"])

    def normalize(self, n: int, params: Mapping[str, Any]) -> Params:
        return {"x": _vector(params, "x", n)}

    def extract(self, n: int, m: Matrix) -> Params:
        return {"x": _split_affine(m)[1]}

    def identity_params(self, n: int) -> Params:
        return {"x": (ZERO,) * n}

    def random_params(self, n: int, rng: random.Random) -> Params:
        return {"x": tuple(_random_rational(rng) for _ in range(n))}

    def charts(self, n: int) -> list[Chart]:
        return [
            self._chart(n, f"X{k}", "x", lambda s, k=k: _unit_vector(n, k - 1, s))
            for k in range(1, n + 1)
        ]


TEMPLATES: dict[GroupFamily, GroupTemplate] = {
    t.family: t
    for t in (
        UpsilonTemplate(),
        HamiltonTemplate(),
        GammaTemplate(),
        InhomogeneousEuclideanTemplate(),
        InhomogeneousHamiltonTemplate(),
        InhomogeneousGammaTemplate(),
        InhomogeneousSymplecticTemplate(),
        OmegaTemplate(),
        TranslationTemplate(),
    )
}

AFFINE_FAMILIES = frozenset(
    {GroupFamily.IE, GroupFamily.IHA, GroupFamily.IHSP, GroupFamily.ISP, GroupFamily.T}
)

ALGEBRA_OF: dict[GroupFamily, AlgebraFamily] = {
    GroupFamily.H: AlgebraFamily.H,
    GroupFamily.HA: AlgebraFamily.HA,
    GroupFamily.HSP: AlgebraFamily.HSP,
    GroupFamily.IE: AlgebraFamily.IE,
    GroupFamily.IHA: AlgebraFamily.IHA,
    GroupFamily.ISP: AlgebraFamily.ISP,
    GroupFamily.T: AlgebraFamily.T,
}


def template(family: GroupFamily | str) -> GroupTemplate:
    try:
        return TEMPLATES[GroupFamily(family)]
    except ValueError:
        raise ParameterError(f"Unknown group family: {family!r}") from None


def build_element(
    family: GroupFamily | str, n: int, params: Mapping[str, Any]
) -> GroupElement:
    """Evaluate a family template.

    Raises:
        ParameterError: On wrong arity, eps outside +-1, a non-orthogonal R
            or a non-symplectic A
    """
    tpl = template(family)
    clean = tpl.validate(n, params)
    return GroupElement(family=tpl.family, n=n, params=clean, matrix=tpl.raw(n, clean))


def identify(family: GroupFamily | str, n: int, matrix: Matrix) -> GroupElement:
    """Recover template parameters of a matrix and confirm the round trip.

    Raises:
        TemplateError: If the matrix is not a member of the family
    """
    tpl = template(family)
    size = tpl.size(n)
    if rational.shape(matrix) != (size, size):
        raise TemplateError(
            f"Family {tpl.family.value} with n={n} needs {size}x{size}, "
            f"got {rational.shape(matrix)}"
        )
    try:
        params = tpl.validate(n, tpl.extract(n, matrix))
    except ParameterError as e:
        raise TemplateError(f"Matrix is not in family {tpl.family.value}: {e}") from e
    if tpl.raw(n, params) != matrix:
        raise TemplateError(f"Matrix does not match the {tpl.family.value} template")
    return GroupElement(family=tpl.family, n=n, params=params, matrix=matrix)


def identity_element(family: GroupFamily | str, n: int) -> GroupElement:
    tpl = template(family)
    return build_element(tpl.family, n, tpl.identity_params(n))


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Matrix product g h re-identified in the common family.

    Raises:
        FamilyMismatchError: If g and h come from different families or sizes
        TemplateError: If the product leaves the family
    """
    if (g.family, g.n) != (h.family, h.n):
        raise FamilyMismatchError(
            f"Cannot compose {g.family.value}({g.n}) with {h.family.value}({h.n})"
        )
    return identify(g.family, g.n, rational.matmul(g.matrix, h.matrix))


def inverse(g: GroupElement) -> GroupElement:
    return identify(g.family, g.n, rational.inverse(g.matrix))


def random_element(
    family: GroupFamily | str, n: int, rng: random.Random
) -> GroupElement:
    """Exact pseudorandom member of a family."""
    tpl = template(family)
    return build_element(tpl.family, n, tpl.random_params(n, rng))


def derive_generators(family: GroupFamily | str, n: int) -> list[GeneratorMatrix]:
    """Linear coefficient of the template along each chart, times its scale.

    Templates are at most quadratic along a single chart coordinate, so the
    central difference (f(1) - f(-1)) / 2 is exact.
    """
    tpl = template(family)
    generators = []
    for chart in tpl.charts(n):
        plus = tpl.raw(n, chart.point(ONE))
        minus = tpl.raw(n, chart.point(-ONE))
        diff = rational.scale(rational.sub(plus, minus), chart.scale / 2)
        generators.append(GeneratorMatrix(name=chart.name, matrix=diff))
    logger.debug(
        "Derived generators",
        extra={"family": tpl.family.value, "n": n, "count": len(generators)},
    )
    return generators


def _flatten(m: Matrix) -> SparseVector:
    size = len(m[0])
    return {i * size + j: x for i, r in enumerate(m) for j, x in enumerate(r) if x}


def structure_constants_from_matrices(family: GroupFamily | str, n: int) -> LieAlgebra:
    """Expand every generator commutator in the generator basis.

    Raises:
        SpanError: If a commutator leaves the span of the generators
    """
    tpl = template(family)
    generators = derive_generators(tpl.family, n)
    basis = EchelonBasis(track=True)
    for k, gen in enumerate(generators):
        if not basis.add(_flatten(gen.matrix), tag=k):
            raise SpanError(f"Generator {gen.name} is linearly dependent")
    constants: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a in range(len(generators)):
        for b in range(a + 1, len(generators)):
            comm = rational.commutator(generators[a].matrix, generators[b].matrix)
            try:
                coeffs = basis.express(_flatten(comm))
            except SpanError as e:
                raise SpanError(
                    f"[{generators[a].name}, {generators[b].name}]"
                    f" is outside the span: {e}"
                ) from e
            if coeffs:
                constants[(a, b)] = {int(k): v for k, v in coeffs.items()}
    algebra_family = ALGEBRA_OF[tpl.family]
    name = FAMILIES[algebra_family].builder(n).name
    return LieAlgebra(name, [g.name for g in generators], constants)


def conjugate_generator(g: GroupElement, x: GeneratorMatrix | Matrix) -> Matrix:
    """g X g^-1."""
    matrix = x.matrix if isinstance(x, GeneratorMatrix) else x
    return rational.matmul(g.matrix, matrix, rational.inverse(g.matrix))


def time_generator(n: int) -> Matrix:
    """T in the (P, Q, E, T) ordering: a single 1 in the E row and T column."""
    size = 2 * n + 2
    return rational.unit(size, size, 2 * n, 2 * n + 1)


def linear_part(g: GroupElement) -> Matrix:
    """Homogeneous block of an element; the whole matrix for linear families."""
    if g.family in AFFINE_FAMILIES:
        return _split_affine(g.matrix)[0]
    return g.matrix


def check_time_invariance(s: Matrix) -> TimeInvarianceResult:
    """Test S T S^-1 = T and recover the Gamma parameters when it holds.

    A symplectic S leaves T invariant exactly when b1 = 0, d21 = 0, c2 = 0 and
    d11 = d22; the blocks then give eps = d11, A = B, w = b2 and iota = d12.
    Parameters are only reported for matrices that pass the HSp round trip;
    a singular S is never invariant.
    """
    n = (len(s) - 2) // 2
    t = time_generator(n)
    try:
        conjugated = rational.matmul(s, t, rational.inverse(s))
    except ValueError:
        return TimeInvarianceResult(invariant=False)
    if conjugated != t:
        return TimeInvarianceResult(invariant=False)
    try:
        element = identify(GroupFamily.HSP, n, s)
    except TemplateError:
        logger.debug(
            "Time-invariant matrix outside the Gamma pattern", extra={"n": n}
        )
        return TimeInvarianceResult(invariant=True)
    return TimeInvarianceResult(invariant=True, params=element.params)


def orthogonal_invariance(n: int, rng: random.Random) -> bool:
    """Conjugating the Q generators by an O(n) element is an orthogonal substitution."""
    tpl = template(GroupFamily.IHA)
    params = tpl.identity_params(n)
    params["R"] = random_orthogonal(n, rng)
    h = build_element(GroupFamily.IHA, n, params)
    qs = [g for g in derive_generators(GroupFamily.IHA, n) if g.name.startswith("Q")]
    basis = EchelonBasis(track=True)
    for k, q in enumerate(qs):
        basis.add(_flatten(q.matrix), tag=k)
    rows = []
    for q in qs:
        try:
            coeffs = basis.express(_flatten(conjugate_generator(h, q)))
        except SpanError:
            return False
        rows.append([coeffs.get(k, ZERO) for k in range(n)])
    c = rational.as_matrix(rows)
    return is_orthogonal(c)

"""Enveloping-algebra arithmetic in PBW normal order and Casimir invariants."""

import random
import time
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Any

from aws_lambda_powertools import Logger
from pydantic import BaseModel, ConfigDict, model_validator

from . import rational
from .algebra import LieAlgebra
from .config import DEFAULT_MONOMIAL_CEILING, SERVICE_NAME
from .exceptions import ResourceLimitError
from .models import AlgebraFamily, CasimirPayload, CasimirReport, MonomialTerm
from .sparse import EchelonBasis, MarkowitzEliminator, SparseVector

logger = Logger(service=SERVICE_NAME, child=True)

Monomial = tuple[int, ...]
Terms = dict[Monomial, Fraction]


def _accumulate(
    target: Terms, source: Mapping[Monomial, Fraction], factor: Fraction
) -> None:
    for mono, value in source.items():
        updated = target.get(mono, Fraction(0)) + factor * value
        if updated:
            target[mono] = updated
        else:
            target.pop(mono, None)


class EnvelopingAlgebra:
    """Universal enveloping algebra of a Lie algebra in PBW normal order.

    Monomials are non-decreasing tuples of basis indices. Right
    multiplication of a monomial by a generator is memoized.
    """

    def __init__(self, alg: LieAlgebra) -> None:
        self.algebra = alg
        self._products: dict[tuple[Monomial, int], Terms] = {}
        self._commutators: dict[tuple[Monomial, int], Terms] = {}
        self._columns: dict[Monomial, int] = {}
        self._monomials: list[Monomial] = []

    def __repr__(self) -> str:
        return f"EnvelopingAlgebra({self.algebra.name!r})"

    def mul_gen(self, mono: Monomial, g: int) -> Terms:
        """Normal-ordered mono * Z_g.

        With mono = rest * Z_x and x > g this is (rest * Z_g) * Z_x plus
        rest * [Z_x, Z_g].
        """
        if not mono or mono[-1] <= g:
            return {mono + (g,): Fraction(1)}
        key = (mono, g)
        cached = self._products.get(key)
        if cached is not None:
            return cached
        x, rest = mono[-1], mono[:-1]
        out: Terms = {}
        for m, v in self.mul_gen(rest, g).items():
            _accumulate(out, self.mul_gen(m, x), v)
        for c, v in self.algebra.structure(x, g).items():
            _accumulate(out, self.mul_gen(rest, c), v)
        self._products[key] = out
        return out

    def mul_terms(
        self, left: Mapping[Monomial, Fraction], word: Iterable[int]
    ) -> Terms:
        """left * Z_w1 * Z_w2 * ... normal-ordered."""
        current: Terms = dict(left)
        for g in word:
            nxt: Terms = {}
            for mono, v in current.items():
                _accumulate(nxt, self.mul_gen(mono, g), v)
            current = nxt
        return current

    def multiply(self, p: "EnvelopingPoly", q: "EnvelopingPoly") -> "EnvelopingPoly":
        out: Terms = {}
        for mono, v in q.terms.items():
            _accumulate(out, self.mul_terms(p.terms, mono), v)
        return EnvelopingPoly(self, out)

    def monomial_commutator(self, mono: Monomial, a: int) -> Terms:
        """[mono, Z_a] by the derivation rule over the factors of mono."""
        key = (mono, a)
        cached = self._commutators.get(key)
        if cached is not None:
            return cached
        out: Terms = {}
        for t, x in enumerate(mono):
            bracket = self.algebra.structure(x, a)
            if not bracket:
                continue
            for c, v in bracket.items():
                left = self.mul_gen(mono[:t], c)
                _accumulate(out, self.mul_terms(left, mono[t + 1 :]), v)
        self._commutators[key] = out
        return out

    def generator(self, gen: str | int) -> "EnvelopingPoly":
        index = gen if isinstance(gen, int) else self.algebra.index(gen)
        return EnvelopingPoly(self, {(index,): Fraction(1)})

    def scalar(self, value: Fraction | int) -> "EnvelopingPoly":
        return EnvelopingPoly(self, {(): Fraction(value)} if value else {})

    def word(self, gens: Sequence[str | int]) -> "EnvelopingPoly":
        """Product of generators as written, normal-ordered."""
        indices = [g if isinstance(g, int) else self.algebra.index(g) for g in gens]
        return EnvelopingPoly(self, self.mul_terms({(): Fraction(1)}, indices))

    def column(self, mono: Monomial) -> int:
        """Stable integer id of a monomial for sparse vectors."""
        col = self._columns.get(mono)
        if col is None:
            col = len(self._monomials)
            self._columns[mono] = col
            self._monomials.append(mono)
        return col

    def monomial(self, col: int) -> Monomial:
        return self._monomials[col]

    def order_key(self, col: int) -> tuple[int, Monomial]:
        """Echelon order: higher degree first, then the index tuple."""
        mono = self._monomials[col]
        return (-len(mono), mono)

    def to_vector(self, p: "EnvelopingPoly") -> SparseVector:
        return {self.column(m): v for m, v in p.terms.items()}

    def from_vector(self, vec: Mapping[int, Fraction]) -> "EnvelopingPoly":
        return EnvelopingPoly(self, {self._monomials[c]: v for c, v in vec.items()})


class EnvelopingPoly:
    """Element of the enveloping algebra with exact coefficients."""

    __slots__ = ("env", "terms")

    def __init__(
        self,
        env: EnvelopingAlgebra,
        terms: Mapping[Monomial, Fraction | int] | None = None,
    ) -> None:
        self.env = env
        self.terms: Terms = {
            tuple(m): Fraction(v) for m, v in (terms or {}).items() if v
        }

    def __repr__(self) -> str:
        return self.render()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EnvelopingPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "EnvelopingPoly") -> "EnvelopingPoly":
        out = dict(self.terms)
        _accumulate(out, other.terms, Fraction(1))
        return EnvelopingPoly(self.env, out)

    def __sub__(self, other: "EnvelopingPoly") -> "EnvelopingPoly":
        out = dict(self.terms)
        _accumulate(out, other.terms, Fraction(-1))
        return EnvelopingPoly(self.env, out)

    def __neg__(self) -> "EnvelopingPoly":
        return self.scaled(-1)

    def __mul__(self, other: "EnvelopingPoly | Fraction | int") -> "EnvelopingPoly":
        if isinstance(other, EnvelopingPoly):
            return self.env.multiply(self, other)
        return self.scaled(other)

    def __rmul__(self, factor: Fraction | int) -> "EnvelopingPoly":
        return self.scaled(factor)

    def scaled(self, factor: Fraction | int) -> "EnvelopingPoly":
        return EnvelopingPoly(self.env, {m: v * factor for m, v in self.terms.items()})

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def monomial_terms(self) -> list[MonomialTerm]:
        """Terms as [[gen, exp], ...] monomials in stored order."""
        basis = self.env.algebra.basis
        out = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            runs: list[tuple[str, int]] = []
            for g in mono:
                if runs and runs[-1][0] == basis[g]:
                    runs[-1] = (basis[g], runs[-1][1] + 1)
                else:
                    runs.append((basis[g], 1))
            out.append(
                MonomialTerm(
                    monomial=runs, coef=rational.format_rational(self.terms[mono])
                )
            )
        return out

    def render(self) -> str:
        if not self.terms:
            return "0"
        basis = self.env.algebra.basis
        parts = []
        for mono in sorted(self.terms, key=lambda m: (-len(m), m)):
            factors = "*".join(basis[g] for g in mono) or "1"
            parts.append(f"{rational.format_rational(self.terms[mono])}*{factors}")
        return " + ".join(parts)


def _env(alg: LieAlgebra | EnvelopingAlgebra) -> EnvelopingAlgebra:
    return alg if isinstance(alg, EnvelopingAlgebra) else EnvelopingAlgebra(alg)


def _reschedule(env: EnvelopingAlgebra, word: Monomial, rng: random.Random) -> Terms:
    """Normal order by swapping a randomly chosen out-of-order adjacent pair."""
    pending: Terms = {word: Fraction(1)}
    done: Terms = {}
    while pending:
        w, coef = pending.popitem()
        positions = [k for k in range(len(w) - 1) if w[k] > w[k + 1]]
        if not positions:
            _accumulate(done, {w: coef}, Fraction(1))
            continue
        k = rng.choice(positions)
        b, a = w[k], w[k + 1]
        _accumulate(pending, {w[:k] + (a, b) + w[k + 2 :]: coef}, Fraction(1))
        for c, v in env.algebra.structure(b, a).items():
            _accumulate(pending, {w[:k] + (c,) + w[k + 2 :]: coef * v}, Fraction(1))
    return done


def pbw_normal_order(
    word: Sequence[int | str],
    alg: LieAlgebra | EnvelopingAlgebra,
    rng: random.Random | None = None,
) -> EnvelopingPoly:
    """Rewrite a product of generators into PBW normal order.

    Z_b Z_a with b > a becomes Z_a Z_b + [Z_b, Z_a]. Without rng the
    memoized right multiplication is used; with rng adjacent swaps follow a
    random schedule.
    """
    env = _env(alg)
    if rng is None:
        return env.word(word)
    indices = tuple(g if isinstance(g, int) else env.algebra.index(g) for g in word)
    return EnvelopingPoly(env, _reschedule(env, indices, rng))


def env_commutator(p: EnvelopingPoly, a: int | str) -> EnvelopingPoly:
    """[p, Z_a] by the derivation rule, normal-ordered."""
    env = p.env
    index = a if isinstance(a, int) else env.algebra.index(a)
    out: Terms = {}
    for mono, v in p.terms.items():
        _accumulate(out, env.monomial_commutator(mono, index), v)
    return EnvelopingPoly(env, out)


class CasimirCheck(BaseModel):
    """Outcome of commuting a polynomial with every generator."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    passed: bool
    generator: str | None = None
    residual: EnvelopingPoly | None = None


def verify_casimir(p: EnvelopingPoly) -> CasimirCheck:
    """Check [p, Z_a] = 0 for every generator, reporting the first failure."""
    for a, gen in enumerate(p.env.algebra.basis):
        residual = env_commutator(p, a)
        if not residual.is_zero():
            logger.debug(
                "Casimir check failed",
                extra={"algebra": p.env.algebra.name, "generator": gen},
            )
            return CasimirCheck(passed=False, generator=gen, residual=residual)
    return CasimirCheck(passed=True)


class Casimir(BaseModel):
    """Labelled invariant polynomial."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    label: str
    poly: EnvelopingPoly

    @property
    def degree(self) -> int:
        return self.poly.degree

    def to_payload(self) -> CasimirPayload:
        return CasimirPayload(
            label=self.label,
            degree=self.degree,
            terms=self.poly.monomial_terms(),
            verified=True,
        )


class CasimirSet(BaseModel):
    """Casimir invariants of an algebra, each verified on construction."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    algebra: LieAlgebra
    elements: list[Casimir]
    max_degree_searched: int = 0

    @model_validator(mode="after")
    def verify_elements(self) -> "CasimirSet":
        for element in self.elements:
            check = verify_casimir(element.poly)
            if not check.passed:
                raise ValueError(
                    f"{element.label} does not commute with {check.generator}"
                )
        return self

    def __len__(self) -> int:
        return len(self.elements)

    def polys(self) -> list[EnvelopingPoly]:
        return [c.poly for c in self.elements]

    def to_payload(self) -> CasimirReport:
        return CasimirReport(
            algebra=self.algebra.name,
            count=len(self.elements),
            searched_degree=max(self.max_degree_searched, 1),
            casimirs=[c.to_payload() for c in self.elements],
        )


def product_span(
    elements: Sequence[EnvelopingPoly], max_degree: int, env: EnvelopingAlgebra
) -> EchelonBasis:
    """Echelon basis of all products (one or more factors) of degree <= max_degree."""
    span = EchelonBasis(order=env.order_key)
    factors = sorted(
        (p for p in elements if 0 < p.degree <= max_degree), key=lambda p: p.degree
    )

    def extend(start: int, current: EnvelopingPoly | None, degree: int) -> None:
        for k in range(start, len(factors)):
            factor = factors[k]
            total = degree + factor.degree
            if total > max_degree:
                break
            product = factor if current is None else current * factor
            span.add(env.to_vector(product))
            extend(k, product, total)

    extend(0, None, 0)
    return span


def span_contains(span: EchelonBasis, p: EnvelopingPoly) -> bool:
    return span.contains(p.env.to_vector(p))


def primitive_reduce(
    found: Sequence[EnvelopingPoly],
    prior: "CasimirSet | Sequence[EnvelopingPoly]" = (),
) -> list[EnvelopingPoly]:
    """Keep the found invariants that are not polynomials in lower ones.

    Processed by ascending degree: each degree group is echelonized against
    the span of products of prior and already kept elements, and only the
    new pivot rows survive.
    """
    if not found:
        return []
    env = found[0].env
    accepted = list(prior.polys() if isinstance(prior, CasimirSet) else prior)
    kept: list[EnvelopingPoly] = []
    for degree in sorted({p.degree for p in found}):
        span = product_span(accepted, degree, env)
        base = set(span.pivots())
        for p in found:
            if p.degree == degree:
                span.add(env.to_vector(p))
        fresh = [
            env.from_vector(row)
            for pivot, row in zip(span.pivots(), span.rows(), strict=True)
            if pivot not in base
        ]
        kept.extend(fresh)
        accepted.extend(fresh)
    return kept


def monomial_count(generators: int, degree: int) -> int:
    """Non-constant PBW monomials of degree at most degree."""
    return comb(generators + degree, degree) - 1


def _monomials_up_to(dim: int, degree: int) -> list[Monomial]:
    return [
        mono
        for d in range(1, degree + 1)
        for mono in combinations_with_replacement(range(dim), d)
    ]


def _invariant_space(env: EnvelopingAlgebra, degree: int) -> list[EnvelopingPoly]:
    """Kernel of p -> ([p, Z_a])_a on monomials of degree <= degree."""
    monomials = _monomials_up_to(env.algebra.dim, degree)
    rows: dict[tuple[int, Monomial], SparseVector] = {}
    for col, mono in enumerate(monomials):
        for a in range(env.algebra.dim):
            for image, v in env.monomial_commutator(mono, a).items():
                rows.setdefault((a, image), {})[col] = v
    kernel = MarkowitzEliminator(rows.values(), len(monomials)).run().nullspace()
    return [
        EnvelopingPoly(env, {monomials[c]: v for c, v in vec.items()})
        for vec in kernel
    ]


def search_casimirs(
    alg: LieAlgebra | EnvelopingAlgebra,
    max_degree: int,
    prior: CasimirSet | None = None,
    ceiling: int = DEFAULT_MONOMIAL_CEILING,
) -> CasimirSet:
    """Primitive Casimirs up to max_degree, searched degree by degree.

    Raises:
        ValueError: If max_degree < 1
        ResourceLimitError: If the monomial count exceeds the ceiling
    """
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    env = _env(alg)
    dim = env.algebra.dim
    monomials = monomial_count(dim, max_degree)
    if monomials > ceiling:
        report = {
            "generators": dim,
            "degree": max_degree,
            "monomials": monomials,
            "ceiling": ceiling,
        }
        raise ResourceLimitError(
            f"Casimir search on {env.algebra.name} needs {monomials} monomials, "
            f"above the ceiling of {ceiling}",
            report,
        )
    started = time.perf_counter()
    elements = list(prior.elements) if prior else []
    accepted = [c.poly for c in elements]
    for degree in range(1, max_degree + 1):
        candidates = [p for p in _invariant_space(env, degree) if p.degree == degree]
        for poly in primitive_reduce(candidates, accepted):
            accepted.append(poly)
            elements.append(Casimir(label=f"C{len(elements) + 1}", poly=poly))
        logger.debug(
            "Searched degree",
            extra={
                "algebra": env.algebra.name,
                "degree": degree,
                "found": len(elements),
            },
        )
    logger.info(
        "Casimir search finished",
        extra={
            "algebra": env.algebra.name,
            "degree": max_degree,
            "monomials": monomials,
            "count": len(elements),
            "elapsed_ms": round((time.perf_counter() - started) * 1000, 2),
        },
    )
    return CasimirSet(
        algebra=env.algebra, elements=elements, max_degree_searched=max_degree
    )


def _wedge(env: EnvelopingAlgebra, u: str, v: str, i: int, j: int) -> EnvelopingPoly:
    """U_i V_j - U_j V_i as written."""
    return env.word([f"{u}{i}", f"{v}{j}"]) - env.word([f"{u}{j}", f"{v}{i}"])


def galilei_casimir_polys(
    env: EnvelopingAlgebra, n: int
) -> list[tuple[str, EnvelopingPoly]]:
    """M, 2ME - P_iP_i and sum_{i<j} (M J_ij - G_j P_i + G_i P_j)^2."""
    m, e = env.generator("M"), env.generator("E")
    c2 = 2 * (m * e)
    for i in range(1, n + 1):
        c2 = c2 - env.word([f"P{i}", f"P{i}"])
    c3 = env.scalar(0)
    for i, j in combinations(range(1, n + 1), 2):
        spin = m * env.generator(f"J{i}{j}") - _wedge(env, "G", "P", j, i)
        c3 = c3 + spin * spin
    return [("C1", m), ("C2", c2), ("C3", c3)]


def hamilton_casimir_polys(
    env: EnvelopingAlgebra, n: int, flip_i_signs: bool = False
) -> list[tuple[str, EnvelopingPoly]]:
    """I, M, A, C4 and the polynomialized C5 = sum_{i<j} (C J_ij + D_ij)^2.

    With [P_i, Q_k] = d_ik I and [E, T] = -I the invariants are
    C4 = TT + IR, C = -AM + TT + IR and
    D_ij = -A (G^P) - M (F^Q) + R (P^Q) - I (F^G) + T (F^P + G^Q),
    where (U^V)_ij = U_i V_j - U_j V_i. flip_i_signs flips the sign of
    every I term.
    """
    gen = env.generator
    i_, m, a, r, t = gen("I"), gen("M"), gen("A"), gen("R"), gen("T")
    sign = -1 if flip_i_signs else 1
    c4 = t * t + sign * (i_ * r)
    c = -(a * m) + c4
    c5 = env.scalar(0)
    for i, j in combinations(range(1, n + 1), 2):
        d = (
            -(a * _wedge(env, "G", "P", i, j))
            - m * _wedge(env, "F", "Q", i, j)
            + r * _wedge(env, "P", "Q", i, j)
            - sign * (i_ * _wedge(env, "F", "G", i, j))
            + t * (_wedge(env, "F", "P", i, j) + _wedge(env, "G", "Q", i, j))
        )
        b = c * gen(f"J{i}{j}") + d
        c5 = c5 + b * b
    return [("C1", i_), ("C2", m), ("C3", a), ("C4", c4), ("C5", c5)]


def closed_form_casimir_polys(
    alg: LieAlgebra | EnvelopingAlgebra,
    family: AlgebraFamily | str,
    n: int,
    flip_i_signs: bool = False,
) -> list[tuple[str, EnvelopingPoly]]:
    """Closed-form invariants of the Galilei and extended Hamilton algebras."""
    env = _env(alg)
    family = AlgebraFamily(family)
    if family == AlgebraFamily.GALILEI:
        return galilei_casimir_polys(env, n)
    if family == AlgebraFamily.QHA:
        return hamilton_casimir_polys(env, n, flip_i_signs)
    raise ValueError(f"No closed-form Casimirs for family {family.value}")


def build_closed_form_casimirs(
    alg: LieAlgebra | EnvelopingAlgebra, family: AlgebraFamily | str, n: int
) -> CasimirSet:
    """Closed-form invariants as a verified CasimirSet; zero polynomials are dropped.

    Raises:
        ValueError: If n > 3 or a closed form fails verification
    """
    if n > 3:
        raise ValueError("Closed-form Casimirs are only established for n <= 3")
    env = _env(alg)
    elements = [
        Casimir(label=label, poly=poly)
        for label, poly in closed_form_casimir_polys(env, family, n)
        if not poly.is_zero()
    ]
    degree = max((c.degree for c in elements), default=0)
    return CasimirSet(
        algebra=env.algebra, elements=elements, max_degree_searched=degree
    )


def casimir_summary(casimirs: CasimirSet) -> dict[str, Any]:
    """Compact label -> degree map for logs and reports."""
    return {c.label: c.degree for c in casimirs.elements}

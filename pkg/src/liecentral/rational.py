"""Exact rational scalars and dense rational matrices."""

import re
from collections.abc import Iterable, Sequence
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse a decimal-integer rational literal such as "3" or "-1/2".

    Raises:
        ValueError: If the literal is malformed or has a zero denominator
    """
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ValueError(f"Malformed rational literal: {text!r}")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise ValueError(f"Zero denominator in rational literal: {text!r}")
    return Fraction(text)


def format_rational(value: Fraction | int) -> str:
    """Render a rational as "p" or "p/q" in lowest terms."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_matrix(rows: Iterable[Iterable[Fraction | int]]) -> Matrix:
    """Freeze nested iterables into an exact Matrix."""
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows))


def unit(rows: int, cols: int, i: int, j: int, value: Fraction | int = 1) -> Matrix:
    """Matrix with a single nonzero entry at (i, j)."""
    return tuple(
        tuple(Fraction(value) if (r, c) == (i, j) else ZERO for c in range(cols))
        for r in range(rows)
    )


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), len(m[0]) if m else 0


def to_domain(m: Matrix) -> DomainMatrix:
    """Convert to a sympy DomainMatrix over QQ."""
    rows, cols = shape(m)
    return DomainMatrix(
        [[QQ(x.numerator, x.denominator) for x in row] for row in m], (rows, cols), QQ
    )


def from_domain(dm: DomainMatrix) -> Matrix:
    """Convert a DomainMatrix over QQ back to a Fraction matrix."""
    return tuple(
        tuple(Fraction(int(x.numerator), int(x.denominator)) for x in row)
        for row in dm.convert_to(QQ).to_list()
    )


def matmul(*factors: Matrix) -> Matrix:
    """Exact product of one or more matrices, left to right."""
    result = to_domain(factors[0])
    for factor in factors[1:]:
        result = result.matmul(to_domain(factor))
    return from_domain(result)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(x + y for x, y in zip(ra, rb, strict=True))
        for ra, rb in zip(a, b, strict=True)
    )


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(x - y for x, y in zip(ra, rb, strict=True))
        for ra, rb in zip(a, b, strict=True)
    )


def scale(m: Matrix, factor: Fraction | int) -> Matrix:
    return tuple(tuple(x * factor for x in row) for row in m)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else m


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return sub(matmul(a, b), matmul(b, a))


def determinant(m: Matrix) -> Fraction:
    d = to_domain(m).det()
    return Fraction(int(d.numerator), int(d.denominator))


def inverse(m: Matrix) -> Matrix:
    """Exact inverse.

    Raises:
        ValueError: If the matrix is singular
    """
    try:
        return from_domain(to_domain(m).inv())
    except DMNonInvertibleMatrixError as e:
        raise ValueError("Matrix is singular") from e


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return int(to_domain(m).rank())


def is_zero(m: Matrix) -> bool:
    return all(x == 0 for row in m for x in row)


def block(
    grid: Sequence[Sequence[Matrix | Fraction | int]], sizes: Sequence[int]
) -> Matrix:
    """Assemble a square block matrix.

    Args:
        grid: Row-major blocks; a scalar 0 stands for a zero block and any
            other scalar fills a 1x1 block
        sizes: Block sizes along both axes

    Returns:
        The assembled matrix
    """
    total = sum(sizes)
    out = [[ZERO] * total for _ in range(total)]
    offsets = [sum(sizes[:k]) for k in range(len(sizes))]
    for bi, row in enumerate(grid):
        for bj, entry in enumerate(row):
            if isinstance(entry, tuple):
                for i, values in enumerate(entry):
                    for j, x in enumerate(values):
                        out[offsets[bi] + i][offsets[bj] + j] = x
            elif entry != 0:
                out[offsets[bi]][offsets[bj]] = Fraction(entry)
    return as_matrix(out)


def sub_block(m: Matrix, rows: range, cols: range) -> Matrix:
    return tuple(tuple(m[i][j] for j in cols) for i in rows)


def column(v: Sequence[Fraction]) -> Matrix:
    return tuple((Fraction(x),) for x in v)


def row(v: Sequence[Fraction]) -> Matrix:
    return (tuple(Fraction(x) for x in v),)


def matvec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(sum((a * b for a, b in zip(r, v, strict=True)), ZERO) for r in m)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), ZERO)


def format_matrix(m: Matrix) -> list[list[str]]:
    return [[format_rational(x) for x in r] for r in m]


def parse_matrix(rows: Sequence[Sequence[str]]) -> Matrix:
    return tuple(tuple(parse_rational(x) for x in r) for r in rows)

"""Tests for exact rational scalars and matrices."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.liecentral import rational


class TestRationalLiterals:
    """Tests for parse_rational and format_rational."""

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("3", Fraction(3)),
            ("-1/2", Fraction(-1, 2)),
            ("4/6", Fraction(2, 3)),
            (" 0 ", Fraction(0)),
        ],
    )
    def test_parse_valid(self, text: str, expected: Fraction) -> None:
        """Test integer and p/q literals parse exactly."""
        assert rational.parse_rational(text) == expected

    @pytest.mark.parametrize("text", ["1.5", "1/0", "a", "", "1/-2", "2e3"])
    def test_parse_invalid(self, text: str) -> None:
        """Test malformed literals are rejected."""
        with pytest.raises(ValueError):
            rational.parse_rational(text)

    def test_format_lowest_terms(self) -> None:
        """Test rendering uses p or p/q in lowest terms."""
        assert rational.format_rational(Fraction(6, 4)) == "3/2"
        assert rational.format_rational(Fraction(-4, 2)) == "-2"
        assert rational.format_rational(0) == "0"

    @settings(max_examples=100, deadline=None)
    @given(st.fractions())
    def test_format_then_parse(self, value: Fraction) -> None:
        """Test formatted values parse back to the same rational."""
        assert rational.parse_rational(rational.format_rational(value)) == value


class TestMatrices:
    """Tests for dense exact matrix helpers."""

    def setup_method(self, method) -> None:
        """Set up a small invertible matrix."""
        self.m = rational.as_matrix([[2, 1], [1, 1]])

    def test_matmul_identity(self) -> None:
        """Test multiplying by the identity is a no-op."""
        assert rational.matmul(self.m, rational.identity(2)) == self.m

    def test_inverse_exact(self) -> None:
        """Test the inverse is exact."""
        inv = rational.inverse(self.m)
        assert inv == rational.as_matrix([[1, -1], [-1, 2]])
        assert rational.matmul(self.m, inv) == rational.identity(2)

    def test_inverse_singular(self) -> None:
        """Test a singular matrix raises ValueError."""
        with pytest.raises(ValueError, match="singular"):
            rational.inverse(rational.as_matrix([[1, 2], [2, 4]]))

    def test_determinant_and_rank(self) -> None:
        """Test determinant and rank over QQ."""
        assert rational.determinant(self.m) == 1
        assert rational.rank(rational.as_matrix([[1, 2], [2, 4]])) == 1
        assert rational.rank(rational.zeros(3, 3)) == 0

    def test_commutator_of_units(self) -> None:
        """Test [E_01, E_10] = E_00 - E_11."""
        e01 = rational.unit(2, 2, 0, 1)
        e10 = rational.unit(2, 2, 1, 0)
        assert rational.commutator(e01, e10) == rational.as_matrix([[1, 0], [0, -1]])

    def test_block_assembly(self) -> None:
        """Test blocks and scalar entries land at their offsets."""
        m = rational.block([[self.m, 0], [0, 5]], [2, 1])
        assert m == rational.as_matrix([[2, 1, 0], [1, 1, 0], [0, 0, 5]])
        assert rational.sub_block(m, range(2), range(2)) == self.m

    def test_vector_helpers(self) -> None:
        """Test matvec and dot."""
        v = (Fraction(1), Fraction(-1))
        assert rational.matvec(self.m, v) == (Fraction(1), Fraction(0))
        assert rational.dot(v, v) == 2

    def test_format_and_parse_matrix(self) -> None:
        """Test string grids keep exact entries."""
        m = rational.as_matrix([[Fraction(1, 3), 0], [-2, 1]])
        assert rational.format_matrix(m) == [["1/3", "0"], ["-2", "1"]]
        assert rational.parse_matrix(rational.format_matrix(m)) == m

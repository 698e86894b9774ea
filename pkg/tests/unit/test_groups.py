"""Tests for the parameterized matrix groups."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.liecentral import rational
from src.liecentral.catalog import Catalog, standard_metric
from src.liecentral.exceptions import FamilyMismatchError, ParameterError, TemplateError
from src.liecentral.groups import (
    ALGEBRA_OF,
    build_element,
    check_symplectic,
    check_time_invariance,
    compose,
    conjugate_generator,
    derive_generators,
    identify,
    identity_element,
    inverse,
    is_orthogonal,
    linear_part,
    orthogonal_invariance,
    random_element,
    random_orthogonal,
    random_symplectic,
    structure_constants_from_matrices,
    symplectic_metric,
    time_generator,
)
from src.liecentral.models import GroupFamily

F = Fraction


class TestRandomMatrices:
    """Tests for exact random orthogonal and symplectic draws."""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_orthogonal(self, n: int) -> None:
        """Test Cayley draws are orthogonal."""
        rng = random.Random(n)
        for _ in range(5):
            assert is_orthogonal(random_orthogonal(n, rng))

    @pytest.mark.parametrize("extended", [False, True])
    def test_symplectic(self, extended: bool) -> None:
        """Test transvection products preserve the metric."""
        rng = random.Random(7)
        metric = symplectic_metric(2, extended=extended)
        for _ in range(5):
            assert check_symplectic(random_symplectic(metric.matrix, rng), metric)


class TestTemplates:
    """Tests for build_element and identify."""

    def test_heisenberg_round_trip(self) -> None:
        """Test identify recovers Upsilon parameters."""
        g = build_element("h", 1, {"w": ["1/2", "-1"], "iota": 3})
        same = identify("h", 1, g.matrix)

        assert same.params == {"w": (F(1, 2), F(-1)), "iota": F(3)}
        assert g.to_payload().params == {"w": ["1/2", "-1"], "iota": "3"}
        assert g.to_payload().matrix[0][3] == "1/2"

    def test_missing_parameter(self) -> None:
        """Test wrong arity raises ParameterError."""
        with pytest.raises(ParameterError, match="missing"):
            build_element("h", 1, {"w": [0, 0]})

    def test_bad_sign(self) -> None:
        """Test eps outside +-1 is rejected."""
        params = identity_element("hsp", 1).params | {"eps": 2}
        with pytest.raises(ParameterError, match="eps"):
            build_element("hsp", 1, params)

    def test_non_orthogonal_rotation(self) -> None:
        """Test a non-orthogonal R is rejected."""
        params = identity_element("ha", 2).params | {"R": [[1, 1], [0, 1]]}
        with pytest.raises(ParameterError, match="orthogonal"):
            build_element("ha", 2, params)

    def test_non_symplectic_block(self) -> None:
        """Test a non-symplectic A is rejected."""
        params = identity_element("hsp", 1).params | {"A": [[2, 0], [0, 1]]}
        with pytest.raises(ParameterError, match="symplectic"):
            build_element("hsp", 1, params)

    def test_unknown_family(self) -> None:
        """Test unknown families raise ParameterError."""
        with pytest.raises(ParameterError, match="Unknown group family"):
            identity_element("xyz", 1)

    def test_identify_wrong_size(self) -> None:
        """Test a matrix of the wrong size is not a member."""
        with pytest.raises(TemplateError, match="needs 4x4"):
            identify("h", 1, rational.identity(3))

    def test_identify_non_member(self) -> None:
        """Test a matrix outside the template is rejected."""
        m = [list(row) for row in rational.identity(4)]
        m[0][1] = F(1)
        with pytest.raises(TemplateError):
            identify("h", 1, rational.as_matrix(m))

    def test_omega_needs_square_middle(self) -> None:
        """Test aut_h identification needs eps times a rational square."""
        g = build_element(
            "aut_h", 1,
            {"eps": 1, "a": 2, "A": rational.identity(2), "w": [0, 0], "r": 0},
        )
        m = [list(row) for row in g.matrix]
        m[2][2] = F(2)
        with pytest.raises(TemplateError):
            identify("aut_h", 1, rational.as_matrix(m))

    def test_ie_is_restricted_iha(self) -> None:
        """Test IE elements are IHa elements with f, r, q, t zero."""
        ie = build_element(
            "ie", 2,
            {"eps": -1, "R": [[0, 1], [1, 0]], "v": [1, 2], "p": [3, 4], "e": 5},
        )
        iha = build_element(
            "iha", 2,
            {
                "eps": -1, "R": [[0, 1], [1, 0]], "v": [1, 2], "f": [0, 0], "r": 0,
                "q": [0, 0], "p": [3, 4], "e": 5, "t": 0,
            },
        )

        assert ie.matrix == iha.matrix


class TestComposition:
    """Tests for compose and inverse."""

    def test_heisenberg_product(self) -> None:
        """Test Upsilon(w', 0) Upsilon(w, 0) picks up w^t zeta w'."""
        g = build_element("h", 1, {"w": [1, 0], "iota": 0})
        h = build_element("h", 1, {"w": [0, 1], "iota": 0})

        product = compose(h, g)

        assert product.params == {"w": (F(1), F(1)), "iota": F(1)}

    def test_heisenberg_inverse(self) -> None:
        """Test Upsilon(w, iota)^-1 = Upsilon(-w, -iota)."""
        g = build_element("h", 2, {"w": [1, 2, 3, 4], "iota": 5})

        assert inverse(g).params == {"w": (F(-1), F(-2), F(-3), F(-4)), "iota": F(-5)}

    def test_family_mismatch(self) -> None:
        """Test elements of different families cannot be composed."""
        with pytest.raises(FamilyMismatchError):
            compose(identity_element("h", 1), identity_element("hsp", 1))

    def test_size_mismatch(self) -> None:
        """Test elements of different n cannot be composed."""
        with pytest.raises(FamilyMismatchError):
            compose(identity_element("h", 1), identity_element("h", 2))

    @pytest.mark.parametrize("family", list(GroupFamily))
    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 2), st.integers(0, 10_000))
    def test_closure_and_inverse(self, family: GroupFamily, n: int, seed: int) -> None:
        """Test products stay in the family and g^-1 g is the identity."""
        rng = random.Random(seed)
        g = random_element(family, n, rng)
        h = random_element(family, n, rng)
        k = random_element(family, n, rng)

        product = compose(g, h)

        assert product.family == family
        assert product.matrix == rational.matmul(g.matrix, h.matrix)
        assert compose(inverse(g), g).matrix == identity_element(family, n).matrix
        assert compose(product, k).matrix == compose(g, compose(h, k)).matrix


class TestGenerators:
    """Tests for derived generators and structure constants."""

    @pytest.mark.parametrize(
        "family,n",
        [
            ("h", 1),
            ("h", 2),
            ("h", 3),
            ("ha", 1),
            ("ha", 2),
            ("ha", 3),
            ("ie", 1),
            ("ie", 2),
            ("ie", 3),
            ("iha", 1),
            ("iha", 2),
            ("hsp", 1),
            ("hsp", 2),
            ("isp", 1),
            ("t", 3),
        ],
    )
    def test_matches_catalog(self, family: str, n: int) -> None:
        """Test matrix commutators reproduce the catalog constant by constant."""
        derived = structure_constants_from_matrices(family, n)
        expected = Catalog().get(ALGEBRA_OF[GroupFamily(family)], n)

        assert derived == expected

    @pytest.mark.slow
    def test_matches_catalog_iha3(self) -> None:
        """Test IHa(3) derived constants equal the catalog."""
        assert structure_constants_from_matrices("iha", 3) == Catalog().get("iha", 3)

    @pytest.mark.parametrize("family", ["aut_h", "ihsp"])
    def test_no_charts(self, family: str) -> None:
        """Test families without generator charts raise TemplateError."""
        with pytest.raises(TemplateError, match="No generator charts"):
            derive_generators(family, 1)

    def test_heisenberg_generators(self) -> None:
        """Test the H(1) generators carry the w^t zeta coupling row."""
        gens = {g.name: g.matrix for g in derive_generators("h", 1)}

        unit = rational.unit
        assert gens["P1"] == rational.sub(unit(4, 4, 0, 3), unit(4, 4, 2, 1))
        assert gens["Q1"] == rational.add(unit(4, 4, 1, 3), unit(4, 4, 2, 0))
        assert gens["I"] == rational.unit(4, 4, 2, 3, -2)

    def test_orthogonal_invariance(self) -> None:
        """Test conjugating Q by an O(n) element is an orthogonal substitution."""
        rng = random.Random(3)

        assert orthogonal_invariance(2, rng)
        assert orthogonal_invariance(3, rng)

    def test_conjugate_by_identity(self) -> None:
        """Test conjugation by the identity is trivial."""
        gen = derive_generators("ha", 2)[0]

        assert conjugate_generator(identity_element("ha", 2), gen) == gen.matrix


class TestTimeInvariance:
    """Tests for check_time_invariance."""

    def test_time_generator(self) -> None:
        """Test T has its single entry in the E row and T column."""
        assert time_generator(1) == rational.unit(4, 4, 2, 3)

    def test_hsp_elements_recovered(self) -> None:
        """Test HSp elements commute with T and their parameters come back."""
        rng = random.Random(11)
        for _ in range(10):
            g = random_element("hsp", 2, rng)
            result = check_time_invariance(g.matrix)
            assert result.invariant
            assert result.params == g.params

    def test_witness_fails(self) -> None:
        """Test a symplectic-looking matrix with b1 != 0 breaks invariance."""
        s = rational.as_matrix([[1, 1, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 1, 1]])

        result = check_time_invariance(s)

        assert not result.invariant
        assert result.params is None

    def test_outside_gamma_pattern_has_no_params(self) -> None:
        """Test an invariant non-symplectic matrix reports no HSp parameters."""
        s = rational.as_matrix(
            [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        )

        result = check_time_invariance(s)

        assert result.invariant
        assert result.params is None

    def test_singular_not_invariant(self) -> None:
        """Test a singular matrix is never reported invariant."""
        result = check_time_invariance(rational.zeros(4, 4))

        assert not result.invariant
        assert result.params is None

    def test_linear_part_of_inhomogeneous(self) -> None:
        """Test IHa linear parts commute with T."""
        rng = random.Random(5)
        g = random_element("iha", 2, rng)

        assert len(linear_part(g)) == 6
        assert check_time_invariance(linear_part(g)).invariant

    def test_metric_is_standard(self) -> None:
        """Test the non-extended metric is the catalog one."""
        assert symplectic_metric(2).matrix == standard_metric(2)

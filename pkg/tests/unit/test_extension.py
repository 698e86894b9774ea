"""Tests for central extension solving."""

from fractions import Fraction

import pytest

from src.liecentral.algebra import LieAlgebra, jacobi_check
from src.liecentral.catalog import Catalog
from src.liecentral.exceptions import SubalgebraError
from src.liecentral.extension import (
    Cocycle,
    ExtensionFreeRegistry,
    build_ansatz,
    coboundary_space,
    extended_algebra,
    is_cocycle,
    jacobi_system,
    pair_columns,
    prune_by_subalgebras,
    solve_central_extension,
    standard_pruning_subsets,
)


def _charges(
    alg: LieAlgebra, named: dict[tuple[str, str], int]
) -> dict[tuple[int, int], Fraction]:
    return {(alg.index(a), alg.index(b)): Fraction(v) for (a, b), v in named.items()}


def _named_brackets(alg: LieAlgebra) -> dict[frozenset[str], dict[str, Fraction]]:
    basis = alg.basis
    out: dict[frozenset[str], dict[str, Fraction]] = {}
    for (a, b), rhs in alg.constants.items():
        sign = 1 if basis[a] < basis[b] else -1
        key = frozenset((basis[a], basis[b]))
        out[key] = {basis[c]: sign * v for c, v in rhs.items()}
    return out


class TestAnsatz:
    """Tests for the unknowns and the Jacobi system."""

    def setup_method(self) -> None:
        self.catalog = Catalog()

    def test_pair_columns(self) -> None:
        """Test pairs are numbered lexicographically."""
        assert pair_columns(3) == {(0, 1): 0, (0, 2): 1, (1, 2): 2}

    def test_build_ansatz(self) -> None:
        """Test one unknown per unordered pair."""
        ansatz = build_ansatz(self.catalog.get("ie", 3))

        assert len(ansatz.unknowns) == 10 * 9 // 2
        assert ansatz.active == ansatz.unknowns
        assert ansatz.label((3, 6)) == "M[G1,P1]"

    def test_abelian_has_no_constraints(self) -> None:
        """Test every Jacobi row of T(3) vanishes."""
        assert jacobi_system(build_ansatz(self.catalog.get("t", 3))) == []

    def test_coboundaries_follow_brackets(self) -> None:
        """Test the coboundary of I in H(1) is the (P1, Q1) charge."""
        alg = self.catalog.get("h", 1)

        assert coboundary_space(alg)[alg.index("I")] == {0: Fraction(1)}

    def test_is_cocycle(self) -> None:
        """Test the mass charge is a cocycle of IE(3) and a lone J charge is not."""
        alg = self.catalog.get("ie", 3)
        mass = _charges(alg, {(f"G{i}", f"P{i}"): 1 for i in range(1, 4)})

        assert is_cocycle(alg, mass)
        assert not is_cocycle(alg, _charges(alg, {("J12", "E"): 1}))


class TestPruning:
    """Tests for subalgebra pruning and the extension-free registry."""

    def setup_method(self) -> None:
        self.catalog = Catalog()

    def test_standard_subsets(self) -> None:
        """Test IE subsets pair rotations with boosts and translations."""
        assert standard_pruning_subsets("ie", 2) == [
            ["J12", "G1", "G2"],
            ["J12", "P1", "P2"],
        ]
        assert len(standard_pruning_subsets("iha", 3)) == 4
        assert standard_pruning_subsets("so", 3) == []

    def test_extension_free_subset_pruned(self) -> None:
        """Test the e(3) subsets of IE(3) fix their internal charges."""
        alg = self.catalog.get("ie", 3)
        registry = ExtensionFreeRegistry()

        ansatz = prune_by_subalgebras(
            build_ansatz(alg), standard_pruning_subsets("ie", 3), registry
        )

        assert len(ansatz.pruned) == 2 * 15 - 3
        assert "is extension-free" in ansatz.pruned[(0, 1)]
        assert len(registry) == 1

    def test_extendable_subset_skipped(self) -> None:
        """Test an e(2) subset admits an extension and prunes nothing."""
        alg = self.catalog.get("ie", 2)

        ansatz = prune_by_subalgebras(build_ansatz(alg), [["J12", "P1", "P2"]])

        assert ansatz.pruned == {}

    def test_open_subset_rejected(self) -> None:
        """Test a subset that is not closed raises SubalgebraError."""
        alg = self.catalog.get("ie", 2)

        with pytest.raises(SubalgebraError):
            prune_by_subalgebras(build_ansatz(alg), [["G1", "E"]])

    def test_registry_caches(self) -> None:
        """Test the registry solves each bracket table once."""
        registry = ExtensionFreeRegistry()
        so3 = self.catalog.get("so", 3)

        assert registry.is_extension_free(so3)
        assert registry.is_extension_free(so3.renamed("rotations"))
        assert len(registry) == 1


class TestSolve:
    """Tests for solve_central_extension on catalog algebras."""

    def setup_method(self) -> None:
        self.catalog = Catalog()

    @pytest.mark.parametrize(
        "family,n",
        [("so", 3), ("sp", 1), ("e", 3), ("sp", 2)],
    )
    def test_extension_free(self, family: str, n: int) -> None:
        """Test semisimple and Euclidean algebras admit no extension."""
        result = solve_central_extension(self.catalog.get(family, n))

        assert result.dimension == 0
        assert result.extended.basis == result.algebra.basis

    def test_euclidean_plane(self) -> None:
        """Test e(2) has the single (P1, P2) class."""
        alg = self.catalog.get("e", 2)

        result = solve_central_extension(alg)

        expected = _charges(alg, {("P1", "P2"): 1})
        assert [c.charges for c in result.cocycles] == [expected]

    def test_heisenberg(self) -> None:
        """Test H(1) classes pair I with P1 and with Q1."""
        alg = self.catalog.get("h", 1)

        result = solve_central_extension(alg)

        assert [c.charges for c in result.cocycles] == [
            _charges(alg, {("P1", "I"): 1}),
            _charges(alg, {("Q1", "I"): 1}),
        ]
        assert [c.central_name for c in result.cocycles] == ["Z1", "Z2"]

    def test_abelian(self) -> None:
        """Test every pair of T(3) is its own class."""
        assert solve_central_extension(self.catalog.get("t", 3)).dimension == 3

    def test_ie3_mass(self) -> None:
        """Test IE(3) has one class, the mass charge on (G_i, P_i)."""
        alg = self.catalog.get("ie", 3)

        result = solve_central_extension(alg, central_names=["M"])

        assert result.dimension == 1
        assert result.cocycles[0].charges == _charges(
            alg, {(f"G{i}", f"P{i}"): 1 for i in range(1, 4)}
        )
        assert result.extended.basis[-1] == "M"
        assert result.extended.structure(alg.index("G2"), alg.index("P2")) == {
            alg.dim: Fraction(1)
        }

    def test_ie3_pruning_agrees(self) -> None:
        """Test pruned and unpruned solves return the same representatives."""
        alg = self.catalog.get("ie", 3)

        plain = solve_central_extension(alg)
        pruned = solve_central_extension(alg, subsets=standard_pruning_subsets("ie", 3))

        assert pruned.pruned > 0
        assert [c.charges for c in pruned.cocycles] == [
            c.charges for c in plain.cocycles
        ]

    def test_isp4(self) -> None:
        """Test ISp(4) has one class proportional to the metric on Y."""
        alg = self.catalog.get("isp", 1)

        subsets = standard_pruning_subsets("isp", 1)

        result = solve_central_extension(alg, subsets=subsets)

        assert result.dimension == 1
        expected = _charges(alg, {("Y1", "Y2"): 1, ("Y3", "Y4"): -1})
        assert result.cocycles[0].charges == expected

    @pytest.mark.slow
    def test_iha3(self) -> None:
        """Test IHa(3) classes are the M, A and I charges."""
        alg = self.catalog.get("iha", 3)

        result = solve_central_extension(
            alg,
            subsets=standard_pruning_subsets("iha", 3),
            central_names=["M", "A", "I"],
        )

        expected = [
            _charges(alg, {(f"G{i}", f"P{i}"): 1 for i in range(1, 4)}),
            _charges(alg, {(f"F{i}", f"Q{i}"): 1 for i in range(1, 4)}),
            _charges(
                alg,
                {**{(f"P{i}", f"Q{i}"): 1 for i in range(1, 4)}, ("E", "T"): -1},
            ),
        ]
        assert [c.charges for c in result.cocycles] == expected
        assert jacobi_check(result.extended).passed


class TestExtendedAlgebra:
    """Tests for extended_algebra."""

    def test_appends_central_generators(self) -> None:
        """Test the extension of e(2) satisfies Jacobi and keeps old brackets."""
        alg = Catalog().get("e", 2)
        cocycle = Cocycle(charges=_charges(alg, {("P1", "P2"): 1}), central_name="C")

        ext = extended_algebra(alg, [cocycle], name="e(2)-ext")

        assert ext.basis == ("J12", "P1", "P2", "C")
        assert ext.structure(1, 2) == {3: Fraction(1)}
        assert ext.structure(0, 2) == alg.structure(0, 2)
        assert jacobi_check(ext).passed

    def test_original_untouched(self) -> None:
        """Test the source algebra is not mutated."""
        alg = Catalog().get("e", 2)
        before = alg.constants

        cocycle = Cocycle(charges={(1, 2): Fraction(1)}, central_name="C")

        extended_algebra(alg, [cocycle])

        assert alg.constants == before


@pytest.mark.slow
class TestGalileiContainment:
    """Tests that the Galilei extension sits inside the Hamilton one."""

    def setup_method(self) -> None:
        catalog = Catalog()
        self.ie = solve_central_extension(
            catalog.get("ie", 3),
            subsets=standard_pruning_subsets("ie", 3),
            central_names=["M"],
        )
        self.iha = solve_central_extension(
            catalog.get("iha", 3),
            subsets=standard_pruning_subsets("iha", 3),
            central_names=["M", "A", "I"],
        )

    def test_extended_ie_embeds(self) -> None:
        """Test extended IE(3) is the J, G, P, E, M part of extended IHa(3)."""
        ie_ext = self.ie.extended

        restricted = self.iha.extended.subalgebra(ie_ext.basis)

        assert set(restricted.basis) == set(ie_ext.basis)
        assert _named_brackets(restricted) == _named_brackets(ie_ext)

    def test_mass_charge_restricts(self) -> None:
        """Test the M class of IHa(3) restricted to IE(3) is the mass class."""
        ie, iha = self.ie.algebra, self.iha.algebra
        mass = next(c for c in self.iha.cocycles if c.central_name == "M")

        restricted = {
            (iha.basis[a], iha.basis[b]): v
            for (a, b), v in mass.charges.items()
            if iha.basis[a] in ie.basis and iha.basis[b] in ie.basis
        }

        expected = {
            (ie.basis[a], ie.basis[b]): v
            for (a, b), v in self.ie.cocycles[0].charges.items()
        }
        assert restricted == expected
        assert self.ie.cocycles[0].central_name == "M"

    def test_matches_catalog_galilei(self) -> None:
        """Test extended IE(3) is the catalog Galilei(3) algebra."""
        galilei = Catalog().get("galilei", 3)

        assert _named_brackets(self.ie.extended) == _named_brackets(galilei)

"""Tests for the liecentral service layer."""

import json
from fractions import Fraction
from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest

from src.liecentral.algebra import LieAlgebra
from src.liecentral.catalog import Catalog
from src.liecentral.exceptions import ParameterError
from src.liecentral.models import (
    AlgebraFamily,
    CheckStatus,
    Command,
    GroupFamily,
    MatrixCheckRecord,
    MatrixCheckReport,
    RunConfig,
)
from src.liecentral.service import LieCentralService, VerificationSuite


def _config(**kwargs: object) -> RunConfig:
    return RunConfig.model_validate(kwargs)


class TestLieCentralService:
    """Tests for LieCentralService dispatch."""

    def setup_method(self, method) -> None:
        """Set up test environment."""
        self.service = LieCentralService()

    def test_catalog_listing_delegates(self) -> None:
        """Test the listing comes from the injected catalog."""
        mock_catalog = MagicMock()
        service = LieCentralService(catalog=mock_catalog)

        result = service.catalog_listing()

        mock_catalog.listing.assert_called_once_with()
        assert result is mock_catalog.listing.return_value

    def test_resolve_catalog(self) -> None:
        """Test --group and --n select a catalog algebra."""
        mock_catalog = MagicMock()
        service = LieCentralService(catalog=mock_catalog)

        alg, family = service.resolve(_config(command="jacobi", group="ie", n=3))

        mock_catalog.get.assert_called_once_with("ie", 3)
        assert alg is mock_catalog.get.return_value
        assert family == "ie"

    def test_resolve_input(self, tmp_path: Path) -> None:
        """Test --input loads a document and has no family."""
        path = tmp_path / "h1.json"
        path.write_text(
            json.dumps(
                {
                    "name": "h(1)",
                    "basis": ["P", "Q", "I"],
                    "brackets": [
                        {"a": "P", "b": "Q", "rhs": [{"gen": "I", "coef": "1"}]}
                    ],
                }
            )
        )

        config = _config(command="jacobi", input_path=str(path))

        alg, family = self.service.resolve(config)

        assert alg.name == "h(1)"
        assert family is None

    def test_resolve_unknown_family(self) -> None:
        """Test unknown families raise ValueError."""
        with pytest.raises(ValueError, match="Unknown algebra family"):
            self.service.resolve(_config(command="jacobi", group="xyz", n=1))

    def test_algebra_summary(self) -> None:
        """Test H(1) has rank 2 and one Casimir."""
        summary = self.service.algebra(_config(command="algebra", group="h", n=1))

        assert summary.dimension == 3
        assert summary.generic_rank == 2
        assert summary.casimir_count == 1
        assert summary.jacobi_passed
        assert summary.algebra.basis == ["P1", "Q1", "I"]

    def test_jacobi(self) -> None:
        """Test catalog algebras pass the Jacobi check."""
        report = self.service.jacobi(_config(command="jacobi", group="iha", n=2))

        assert report.passed
        assert report.algebra == "IHa(2)"

    def test_extend_uses_registry_and_names(self) -> None:
        """Test catalog extensions prune through the injected registry."""
        mock_registry = MagicMock()
        mock_registry.is_extension_free.return_value = True
        service = LieCentralService(registry=mock_registry)

        result = service.extend_config(_config(command="extend", group="ie", n=3))

        assert mock_registry.is_extension_free.call_count == 2
        assert result.dimension == 1
        assert result.cocycles[0].central_name == "M"
        assert result.to_payload().n_e == 1

    def test_extend_input_has_default_names(self) -> None:
        """Test algebras outside the catalog get Z names and no pruning."""
        alg = Catalog().get("e", 2).renamed("plane")

        result = self.service.extend(alg)

        assert result.pruned == 0
        assert [c.central_name for c in result.cocycles] == ["Z1"]

    def test_casimir_config(self) -> None:
        """Test the casimir subcommand searches to --max-degree."""
        casimirs = self.service.casimir_config(
            _config(command="casimir", group="galilei", n=1, max_degree=2)
        )

        assert len(casimirs) == 2
        assert casimirs.max_degree_searched == 2


class TestMatrixCheck:
    """Tests for the matrix-layer checks."""

    def setup_method(self) -> None:
        self.service = LieCentralService()

    def test_heisenberg(self) -> None:
        """Test every H(1) check passes."""
        report = self.service.matrix_check("h", 1, samples=5)

        assert report.passed
        assert [c.check for c in report.checks] == [
            "structure-constants",
            "closure",
            "associativity",
            "heisenberg-law",
            "time-invariance",
        ]

    def test_automorphisms(self) -> None:
        """Test the Omega product and conjugation laws."""
        report = self.service.matrix_check("aut_h", 1, samples=5)

        assert report.passed
        checks = {c.check for c in report.checks}
        assert {"omega-product", "omega-automorphism"} <= checks
        assert "structure-constants" not in checks

    def test_inhomogeneous_hamilton(self) -> None:
        """Test IHa(2) adds the orthogonal invariance check."""
        report = self.service.matrix_check("iha", 2, samples=3)

        assert report.passed
        assert report.checks[-1].check == "orthogonal-invariance"

    def test_structure_mismatch_reported(self) -> None:
        """Test a catalog entry that disagrees with the matrices fails the check."""
        wrong = LieAlgebra("H(1)", ["P1", "Q1", "I"], {(0, 1): {2: Fraction(2)}})
        service = LieCentralService(catalog=Catalog({"H(1)": wrong}))

        report = service.matrix_check("h", 1, samples=2)

        assert not report.passed
        failed = [c for c in report.checks if not c.passed]
        assert [c.check for c in failed] == ["structure-constants"]
        assert "differ from the catalog" in failed[0].detail

    def test_unknown_family(self) -> None:
        """Test unknown families raise ParameterError."""
        with pytest.raises(ParameterError, match="Unknown group family"):
            self.service.matrix_check("xyz", 1)


class TestVerificationSuite:
    """Tests for the reproduction checks."""

    def setup_method(self) -> None:
        self.service = LieCentralService()
        self.suite = VerificationSuite(self.service, seed=1729, trials=3, samples=3)

    def test_extension_ie3(self) -> None:
        """Test the IE(3) mass extension check passes."""
        expected, computed, status = self.suite.extension_ie3()

        assert status == CheckStatus.PASS
        assert computed.startswith("N_e = 1")

    def test_extension_free(self) -> None:
        """Test the extension-free targets pass."""
        assert self.suite.extension_free()[2] == CheckStatus.PASS

    def test_extension_isp4(self) -> None:
        """Test the ISp(4) metric charge check passes."""
        assert self.suite.extension_isp4()[2] == CheckStatus.PASS

    def test_degenerate_n(self) -> None:
        """Test n = 1 closed forms vanish where expected."""
        assert self.suite.degenerate_n()[2] == CheckStatus.PASS

    def test_extension_ie2_never_fails(self) -> None:
        """Test the planar extension count is passed or noted, never failed."""
        status = self.suite.extension_ie2()[2]

        assert status in (CheckStatus.PASS, CheckStatus.DISCREPANCY_NOTED)

    def test_matrix_layer_covers_families(self) -> None:
        """Test the matrix layer runs every checked family at n = 1, 2, 3."""
        passing = MatrixCheckReport(family="h", n=1, passed=True, checks=[])
        with patch.object(
            self.service, "matrix_check", return_value=passing
        ) as mock_check:
            expected, computed, status = self.suite.matrix_layer()

        called = {(c.args[0], c.args[1]) for c in mock_check.call_args_list}
        for family in (GroupFamily.HA, GroupFamily.IHA, GroupFamily.HSP):
            assert {(family, n) for n in (1, 2, 3)} <= called
        assert status == CheckStatus.PASS
        assert computed == expected

    def test_matrix_layer_reports_failed_check(self) -> None:
        """Test a failed orthogonal-invariance check fails the matrix layer."""

        def fake_check(
            family: GroupFamily, n: int, samples: int, seed: int
        ) -> MatrixCheckReport:
            failed = family == GroupFamily.IHA and n == 2
            record = MatrixCheckRecord(
                check="orthogonal-invariance", passed=not failed
            )
            return MatrixCheckReport(
                family=family, n=n, passed=not failed, checks=[record]
            )

        with patch.object(self.service, "matrix_check", side_effect=fake_check):
            _, computed, status = self.suite.matrix_layer()

        assert status == CheckStatus.FAIL
        assert computed == "iha(2): orthogonal-invariance"

    def test_extension_reused_across_checks(self) -> None:
        """Test each catalog extension is solved once per suite."""
        with patch.object(
            self.service, "extend", wraps=self.service.extend
        ) as mock_extend:
            first = self.suite._extension(AlgebraFamily.IE, 2)
            second = self.suite._extension(AlgebraFamily.IE, 2)

        assert mock_extend.call_count == 1
        assert first[1] is second[1]

    @pytest.mark.slow
    def test_prune_consistency(self) -> None:
        """Test pruned and unpruned solves agree on Galilei(3) and IHa(3)."""
        _, computed, status = self.suite.prune_consistency()

        assert status == CheckStatus.PASS
        assert "Galilei(3)" in computed
        assert "IHa(3)" in computed

    @pytest.mark.slow
    def test_flipped_signs_noted(self) -> None:
        """Test the I -> -I variants are marked as a discrepancy."""
        _, computed, status = self.suite.flipped_signs()

        assert status == CheckStatus.DISCREPANCY_NOTED
        assert "C4 fails at E" in computed

    def test_raising_check_recorded(self) -> None:
        """Test a check that raises becomes a FAIL record."""
        checks = (("dimension-table", 1, "dimension table", "dimension_table"),)
        with patch.object(VerificationSuite, "CHECKS", checks), patch(
            "src.liecentral.service.casimir_count", side_effect=ValueError("boom")
        ):
            records = self.suite.run()

        assert len(records) == 1
        assert records[0].status == CheckStatus.FAIL.value
        assert records[0].computed == "ValueError: boom"

    def test_report_passes_with_discrepancy(self) -> None:
        """Test discrepancy-noted records do not fail the report."""
        checks = (("extension-ie2", 11, "IE(2) table entry N_e = 1", "extension_ie2"),)
        with patch.object(VerificationSuite, "CHECKS", checks):
            report = self.service.verify_paper(trials=2, samples=2)

        assert report.passed
        assert report.checks[0].criterion == 11

    @pytest.mark.slow
    def test_full_run(self) -> None:
        """Test the default suite has no failures."""
        report = self.service.verify_paper(trials=3, samples=5)

        failed = [c.check_id for c in report.checks if c.status == CheckStatus.FAIL]
        assert failed == []
        assert len(report.checks) == len(VerificationSuite.CHECKS)


class TestRunConfig:
    """Tests for command validation used by the service."""

    def test_matrix_check_needs_family(self) -> None:
        """Test matrix-check without --group fails validation."""
        with pytest.raises(ValueError, match="matrix-check requires"):
            _config(command=Command.MATRIX_CHECK.value, n=1)

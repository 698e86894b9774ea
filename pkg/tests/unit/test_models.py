"""Tests for liecentral models."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from src.liecentral.config import DEFAULT_SEED
from src.liecentral.models import (
    AlgebraDocument,
    CheckRecord,
    CheckStatus,
    Command,
    ExtensionPayload,
    OutputFormat,
    PaperReport,
    RunConfig,
)


class TestAlgebraDocument:
    """Tests for AlgebraDocument model."""

    def test_valid_document(self) -> None:
        """Test a minimal document validates."""
        doc = AlgebraDocument.model_validate(
            {
                "name": "H(1)",
                "basis": ["P1", "Q1", "I"],
                "brackets": [
                    {"a": "P1", "b": "Q1", "rhs": [{"gen": "I", "coef": "1"}]}
                ],
            }
        )

        assert doc.basis == ["P1", "Q1", "I"]
        assert doc.brackets[0].rhs[0].coef == "1"

    def test_empty_basis(self) -> None:
        """Test an empty basis is rejected."""
        with pytest.raises(ValidationError):
            AlgebraDocument(name="x", basis=[])

    def test_duplicate_generators(self) -> None:
        """Test repeated generator names are rejected."""
        with pytest.raises(ValidationError, match="unique"):
            AlgebraDocument(name="x", basis=["A", "A"])

    def test_blank_generator(self) -> None:
        """Test whitespace-only names are rejected."""
        with pytest.raises(ValidationError, match="empty"):
            AlgebraDocument(name="x", basis=["A", " "])


class TestExtensionPayload:
    """Tests for ExtensionPayload serialization."""

    def test_dimension_alias(self) -> None:
        """Test the dimension serializes as N_e."""
        payload = ExtensionPayload(
            algebra="so(3)",
            n_e=0,
            cocycles=[],
            extended_algebra=AlgebraDocument(name="so(3)-ext", basis=["J12"]),
        )

        assert payload.model_dump(by_alias=True)["N_e"] == 0


class TestPaperReport:
    """Tests for PaperReport aggregation."""

    def _record(self, status: CheckStatus) -> CheckRecord:
        return CheckRecord(
            check_id="x",
            criterion=1,
            anchor="a",
            expected="e",
            computed="c",
            status=status,
        )

    def test_discrepancy_does_not_fail(self) -> None:
        """Test discrepancy-noted records keep the report passing."""
        report = PaperReport(
            checks=[
                self._record(CheckStatus.PASS),
                self._record(CheckStatus.DISCREPANCY_NOTED),
            ]
        )

        assert report.passed
        assert report.model_dump()["checks"][1]["status"] == "discrepancy-noted"

    def test_failure_fails(self) -> None:
        """Test any failed record fails the report."""
        report = PaperReport(checks=[self._record(CheckStatus.FAIL)])

        assert not report.passed

    def test_criterion_must_be_positive(self) -> None:
        """Test criterion numbers start at 1."""
        with pytest.raises(ValidationError):
            CheckRecord(
                check_id="x", criterion=0, anchor="a", expected="e", computed="c",
                status=CheckStatus.PASS,
            )


class TestRunConfig:
    """Tests for RunConfig validation."""

    def test_defaults(self) -> None:
        """Test documented defaults are applied."""
        config = RunConfig(command=Command.CATALOG)

        assert config.seed == DEFAULT_SEED
        assert config.format == OutputFormat.JSON
        assert config.max_degree == 2
        assert config.log_level == "INFO"

    def test_group_normalized(self) -> None:
        """Test group names are lowercased with dashes mapped to underscores."""
        config = RunConfig(command=Command.MATRIX_CHECK, group="AUT-H", n=1)

        assert config.group == "aut_h"

    @pytest.mark.parametrize("n", [0, 10])
    def test_n_out_of_range(self, n: int) -> None:
        """Test n is limited to 1..9."""
        with pytest.raises(ValidationError):
            RunConfig(command=Command.EXTEND, group="ie", n=n)

    def test_algebra_command_needs_target(self) -> None:
        """Test extend without group or input is rejected."""
        with pytest.raises(ValidationError, match="requires --group or --input"):
            RunConfig(command=Command.EXTEND)

    def test_group_needs_n(self) -> None:
        """Test a group without n is rejected."""
        with pytest.raises(ValidationError, match="requires --n"):
            RunConfig(command=Command.CASIMIR, group="galilei")

    def test_input_path_suffices(self) -> None:
        """Test an input document replaces group and n."""
        config = RunConfig(command=Command.JACOBI, input_path="alg.json")

        assert config.input_path == Path("alg.json")

    def test_matrix_check_needs_group(self) -> None:
        """Test matrix-check requires a family and n."""
        with pytest.raises(ValidationError, match="matrix-check requires"):
            RunConfig(command=Command.MATRIX_CHECK, n=2)

    @pytest.mark.parametrize(
        "field,value",
        [("trials", 0), ("ceiling", 0), ("samples", 0), ("max_degree", 0)],
    )
    def test_positive_fields(self, field: str, value: int) -> None:
        """Test counts must be at least 1."""
        with pytest.raises(ValidationError):
            RunConfig(command=Command.CATALOG, **{field: value})

    def test_log_level(self) -> None:
        """Test log levels are normalized and checked."""
        config = RunConfig(command=Command.CATALOG, log_level="debug")

        assert config.log_level == "DEBUG"
        with pytest.raises(ValidationError, match="Unknown log level"):
            RunConfig(command=Command.CATALOG, log_level="loud")

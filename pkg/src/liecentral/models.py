"""Data models for documents, reports and run configuration."""

from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import (
    DEFAULT_LOG_LEVEL,
    DEFAULT_MONOMIAL_CEILING,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    MAX_CATALOG_N,
)


class OutputFormat(str, Enum):
    """Supported output renderings."""

    TEXT = "text"
    JSON = "json"


class CheckStatus(str, Enum):
    """Outcome of a single verification check."""

    PASS = "pass"
    FAIL = "fail"
    DISCREPANCY_NOTED = "discrepancy-noted"


class AlgebraFamily(str, Enum):
    """Catalog Lie algebra families."""

    H = "h"
    HA = "ha"
    HSP = "hsp"
    IE = "ie"
    IHA = "iha"
    ISP = "isp"
    GALILEI = "galilei"
    QHA = "qha"
    SO = "so"
    SP = "sp"
    E = "e"
    T = "t"


class GroupFamily(str, Enum):
    """Parameterized matrix group families."""

    H = "h"
    HA = "ha"
    HSP = "hsp"
    IE = "ie"
    IHA = "iha"
    IHSP = "ihsp"
    ISP = "isp"
    AUT_H = "aut_h"
    T = "t"


class Command(str, Enum):
    """CLI subcommands."""

    CATALOG = "catalog"
    ALGEBRA = "algebra"
    JACOBI = "jacobi"
    EXTEND = "extend"
    CASIMIR = "casimir"
    MATRIX_CHECK = "matrix-check"
    VERIFY_PAPER = "verify-paper"


class RhsTerm(BaseModel):
    """One term of a bracket right-hand side."""

    gen: str = Field(..., min_length=1)
    coef: str = Field(..., min_length=1, description="Rational literal p or p/q")


class BracketEntry(BaseModel):
    """A bracket [a, b] = sum of rhs terms."""

    a: str = Field(..., min_length=1)
    b: str = Field(..., min_length=1)
    rhs: list[RhsTerm] = Field(default_factory=list)


class AlgebraDocument(BaseModel):
    """External algebra document."""

    name: str = Field(..., min_length=1)
    basis: list[str] = Field(..., min_length=1)
    brackets: list[BracketEntry] = Field(default_factory=list)

    @field_validator("basis")
    @classmethod
    def validate_basis(cls, v: list[str]) -> list[str]:
        """Generator names must be non-empty and unique."""
        if any(not name.strip() for name in v):
            raise ValueError("Generator names cannot be empty")
        if len(set(v)) != len(v):
            raise ValueError("Generator names must be unique")
        return v


class AlgebraSummary(BaseModel):
    """Output of the algebra subcommand."""

    algebra: AlgebraDocument
    dimension: int = Field(..., ge=1)
    generic_rank: int = Field(..., ge=0)
    casimir_count: int = Field(..., ge=0)
    jacobi_passed: bool


class ResidualTerm(BaseModel):
    """Coefficient of one generator in a residual element."""

    gen: str
    coef: str


class JacobiViolation(BaseModel):
    """A generator triple whose Jacobi sum is nonzero."""

    triple: tuple[str, str, str]
    residual: list[ResidualTerm]


class JacobiReport(BaseModel):
    """Result of a full Jacobi identity check."""

    algebra: str
    passed: bool
    violations: list[JacobiViolation] = Field(default_factory=list)


class CatalogEntry(BaseModel):
    """Catalog listing row for one algebra family."""

    family: AlgebraFamily
    label: str
    description: str
    n_min: int = Field(..., ge=1)
    n_max: int = Field(..., ge=1)
    dimension_formula: str
    dimensions: dict[str, int]

    model_config = ConfigDict(use_enum_values=True)


class CatalogListing(BaseModel):
    """All catalog families."""

    families: list[CatalogEntry]


class Charge(BaseModel):
    """Central charge coefficient on a generator pair."""

    a: str
    b: str
    coef: str


class CocyclePayload(BaseModel):
    """One nontrivial cocycle and the central generator it introduces."""

    charges: list[Charge]
    central_name: str


class ExtensionPayload(BaseModel):
    """Output of the extend subcommand."""

    algebra: str
    n_e: int = Field(..., ge=0, serialization_alias="N_e")
    cocycles: list[CocyclePayload]
    extended_algebra: AlgebraDocument


class MonomialTerm(BaseModel):
    """PBW monomial with its coefficient."""

    monomial: list[tuple[str, int]]
    coef: str


class CasimirPayload(BaseModel):
    """One Casimir element in serialized form."""

    label: str
    degree: int = Field(..., ge=0)
    terms: list[MonomialTerm]
    verified: bool


class CasimirReport(BaseModel):
    """Output of the casimir subcommand."""

    algebra: str
    count: int = Field(..., ge=0)
    searched_degree: int = Field(..., ge=1)
    casimirs: list[CasimirPayload]


class GroupElementPayload(BaseModel):
    """Serialized group element with rational strings."""

    family: GroupFamily
    n: int = Field(..., ge=1)
    params: dict[str, Any]
    matrix: list[list[str]]

    model_config = ConfigDict(use_enum_values=True)


class MatrixCheckRecord(BaseModel):
    """Single matrix-layer check."""

    check: str
    passed: bool
    detail: str = ""


class MatrixCheckReport(BaseModel):
    """Output of the matrix-check subcommand."""

    family: GroupFamily
    n: int
    passed: bool
    checks: list[MatrixCheckRecord]

    model_config = ConfigDict(use_enum_values=True)


class CheckRecord(BaseModel):
    """One acceptance check of the reproduction report."""

    check_id: str
    criterion: int = Field(..., ge=1)
    anchor: str
    expected: str
    computed: str
    status: CheckStatus

    model_config = ConfigDict(use_enum_values=True)


class PaperReport(BaseModel):
    """Aggregate of every reproduction check."""

    checks: list[CheckRecord] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Discrepancy-noted records do not fail the run."""
        return all(c.status != CheckStatus.FAIL.value for c in self.checks)


class RunConfig(BaseModel):
    """Validated command-line configuration."""

    command: Command
    group: str | None = None
    n: int | None = Field(default=None, ge=1, le=MAX_CATALOG_N)
    input_path: Path | None = None
    max_degree: int = Field(default=2, ge=1)
    seed: int = DEFAULT_SEED
    trials: int = Field(default=DEFAULT_TRIALS, ge=1)
    ceiling: int = Field(default=DEFAULT_MONOMIAL_CEILING, ge=1)
    samples: int = Field(default=DEFAULT_SAMPLES, ge=1)
    format: OutputFormat = OutputFormat.JSON
    log_level: str = DEFAULT_LOG_LEVEL

    @field_validator("group")
    @classmethod
    def validate_group(cls, v: str | None) -> str | None:
        """Normalize family identifiers."""
        return v.strip().lower().replace("-", "_") if v else v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Accept standard logging level names."""
        v = v.strip().upper()
        if v not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return v

    @model_validator(mode="after")
    def validate_target(self) -> "RunConfig":
        """Algebra commands need a catalog group or an input document."""
        needs_algebra = {
            Command.ALGEBRA,
            Command.JACOBI,
            Command.EXTEND,
            Command.CASIMIR,
        }
        if self.command in needs_algebra and self.input_path is None:
            if self.group is None:
                raise ValueError(f"{self.command.value} requires --group or --input")
            if self.n is None:
                raise ValueError(f"{self.command.value} requires --n with --group")
        missing_group = self.group is None or self.n is None
        if self.command == Command.MATRIX_CHECK and missing_group:
            raise ValueError("matrix-check requires --group and --n")
        return self

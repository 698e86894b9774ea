"""Command-line front end for the liecentral engine."""

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from typing import Any, NoReturn

from aws_lambda_powertools import Logger
from pydantic import BaseModel, ValidationError

from .algebra import load_algebra
from .config import (
    DEFAULT_LOG_LEVEL,
    DEFAULT_MONOMIAL_CEILING,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    SERVICE_NAME,
)
from .exceptions import (
    AlgebraDocumentError,
    LieCentralError,
    ParameterError,
    ResourceLimitError,
)
from .models import (
    AlgebraSummary,
    CasimirReport,
    CatalogListing,
    Command,
    ExtensionPayload,
    JacobiReport,
    MatrixCheckReport,
    OutputFormat,
    PaperReport,
    RunConfig,
)
from .service import LieCentralService

logger = Logger(service=SERVICE_NAME, stream=sys.stderr)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Invalid command-line usage."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="liecentral", description="Exact Lie algebra computations")
    common = _Parser(add_help=False)
    common.add_argument("--group", help="catalog or group family, e.g. iha")
    common.add_argument("--n", type=int, help="family size parameter")
    common.add_argument("--input", dest="input_path", help="algebra document (JSON)")
    common.add_argument("--max-degree", type=int, default=2)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    common.add_argument("--ceiling", type=int, default=DEFAULT_MONOMIAL_CEILING)
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.JSON.value,
    )
    common.add_argument("--log-level", default=DEFAULT_LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for command in Command:
        sub.add_parser(command.value, parents=[common])
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    """Parse and validate arguments.

    Raises:
        UsageError: On unknown flags or a missing subcommand
        ValidationError: If the flag values are out of range
    """
    args = build_parser().parse_args(list(argv))
    return RunConfig.model_validate(
        {k: v for k, v in vars(args).items() if v is not None}
    )


def to_json(payload: BaseModel | dict[str, Any]) -> str:
    data = (
        payload.model_dump(mode="json", by_alias=True)
        if isinstance(payload, BaseModel)
        else payload
    )
    return json.dumps(data, indent=2)


def _render_catalog(listing: CatalogListing) -> str:
    lines = [f"{'family':<10}{'label':<12}{'n':<8}{'dim formula':<20}dims (n=1,2,3)"]
    for entry in listing.families:
        dims = ", ".join(f"{n}:{d}" for n, d in entry.dimensions.items())
        lines.append(
            f"{entry.family:<10}{entry.label:<12}{f'{entry.n_min}..{entry.n_max}':<8}"
            f"{entry.dimension_formula:<20}{dims}"
        )
    return "\n".join(lines)


def _render_summary(summary: AlgebraSummary) -> str:
    return "\n".join(
        [
            f"algebra: {summary.algebra.name}",
            f"basis: {' '.join(summary.algebra.basis)}",
            f"dimension: {summary.dimension}",
            f"generic rank: {summary.generic_rank}",
            f"casimir count: {summary.casimir_count}",
            f"jacobi: {'pass' if summary.jacobi_passed else 'fail'}",
        ]
    )


def _render_jacobi(report: JacobiReport) -> str:
    lines = [f"{report.algebra}: {'pass' if report.passed else 'fail'}"]
    for v in report.violations:
        residual = " + ".join(f"{t.coef}*{t.gen}" for t in v.residual)
        lines.append(f"  [{', '.join(v.triple)}] -> {residual}")
    return "\n".join(lines)


def _render_extension(payload: ExtensionPayload) -> str:
    lines = [f"{payload.algebra}: N_e = {payload.n_e}"]
    for cocycle in payload.cocycles:
        charges = ", ".join(f"[{c.a},{c.b}] {c.coef}" for c in cocycle.charges)
        lines.append(f"  {cocycle.central_name}: {charges}")
    lines.append(f"extended: {payload.extended_algebra.name}")
    return "\n".join(lines)


def _render_casimir(report: CasimirReport) -> str:
    lines = [
        f"{report.algebra}: {report.count} primitive Casimirs"
        f" up to degree {report.searched_degree}"
    ]
    for c in report.casimirs:
        terms = " + ".join(
            f"{t.coef}*" + "*".join(f"{g}^{e}" if e > 1 else g for g, e in t.monomial)
            for t in c.terms
        )
        lines.append(f"  {c.label} (degree {c.degree}): {terms}")
    return "\n".join(lines)


def _render_matrix(report: MatrixCheckReport) -> str:
    lines = [f"{report.family}({report.n}): {'pass' if report.passed else 'fail'}"]
    for c in report.checks:
        status = "pass" if c.passed else "fail"
        lines.append(f"  {c.check:<24}{status} {c.detail}".rstrip())
    return "\n".join(lines)


def _render_report(report: PaperReport) -> str:
    lines = [f"{'check':<28}{'criterion':<11}{'status':<19}computed"]
    for c in report.checks:
        lines.append(f"{c.check_id:<28}{c.criterion:<11}{c.status:<19}{c.computed}")
    return "\n".join(lines)


Outcome = tuple[BaseModel, Callable[[Any], str], bool]


def run(config: RunConfig, service: LieCentralService | None = None) -> Outcome:
    """Dispatch one subcommand; returns the payload, its renderer and success."""
    if service is None:
        service = LieCentralService()
    command = config.command
    if command == Command.CATALOG:
        return service.catalog_listing(), _render_catalog, True
    if command == Command.ALGEBRA:
        summary = service.algebra(config)
        return summary, _render_summary, True
    if command == Command.JACOBI:
        report = service.jacobi(config)
        return report, _render_jacobi, report.passed
    if command == Command.EXTEND:
        return service.extend_config(config).to_payload(), _render_extension, True
    if command == Command.CASIMIR:
        return service.casimir_config(config).to_payload(), _render_casimir, True
    if command == Command.MATRIX_CHECK:
        matrix = service.matrix_check(
            config.group or "", config.n or 0, config.samples, config.seed
        )
        return matrix, _render_matrix, matrix.passed
    if config.input_path is not None:
        service.catalog.override(load_algebra(config.input_path))
    report = service.verify_paper(config.seed, config.trials, config.samples)
    return report, _render_report, report.passed


def _emit(text: str) -> None:
    sys.stdout.write(text + "\n")


def _error(kind: str, message: str, details: Any = None) -> str:
    return to_json({"error": {"type": kind, "message": message, "details": details}})


def main(
    argv: Sequence[str] | None = None, service: LieCentralService | None = None
) -> int:
    """Run the CLI; output goes to stdout and logs to stderr."""
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except UsageError as e:
        _emit(_error("UsageError", str(e)))
        return EXIT_USAGE
    except ValidationError as e:
        details = json.loads(e.json(include_url=False))
        _emit(_error("ValidationError", "Invalid arguments", details))
        return EXIT_USAGE

    logger.setLevel(config.log_level)
    logger.info("Command received", extra={"command": config.command.value})
    try:
        payload, render, ok = run(config, service)
    except ResourceLimitError as e:
        logger.warning("Resource ceiling exceeded", extra={"report": e.report})
        _emit(_error(type(e).__name__, str(e), e.report))
        return EXIT_USAGE
    except (AlgebraDocumentError, ParameterError) as e:
        logger.warning("Invalid input", extra={"error": str(e)})
        _emit(_error(type(e).__name__, str(e), getattr(e, "location", None)))
        return EXIT_USAGE
    except ValidationError as e:
        details = json.loads(e.json(include_url=False))
        logger.warning("Invalid input", extra={"errors": details})
        _emit(_error("ValidationError", "Invalid input", details))
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        logger.warning("Invalid input", extra={"error": str(e)})
        _emit(_error(type(e).__name__, str(e)))
        return EXIT_USAGE
    except LieCentralError as e:
        logger.error("Computation failed", extra={"error": str(e)})
        _emit(_error(type(e).__name__, str(e)))
        return EXIT_FAILED

    fmt = OutputFormat(config.format)
    _emit(render(payload) if fmt == OutputFormat.TEXT else to_json(payload))
    logger.info(
        "Command finished", extra={"command": config.command.value, "passed": ok}
    )
    return EXIT_OK if ok else EXIT_FAILED

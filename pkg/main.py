"""
Command-line interface.

Subcommands map onto the pipeline entry points::

    dfm fit --panel panel.csv --metadata metadata.csv --output-dir out
    dfm select --panel panel.csv
    dfm decompose out --d 1 --output-dir out-d1
    dfm report out --no-spectra
    dfm simulate --n 100 --T 200 --q 3 --d 1 --seed 7 --output-dir sim

Run flags carry the :class:`~pipeline.config.RunConfig` field names; a
``--config`` INI file supplies defaults that flags override. The exit code is
0 on success and the failing stage's code otherwise (see
:class:`~utils.constants.ExitCode`).
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from pipeline.config import EMIT_FLAGS, RunConfig
from pipeline.runner import Pipeline, PipelineResult
from pipeline.simulation import DEFAULT_START, truth_summary
from simulate.dgp import DGPConfig
from strategies.factory import SmootherVariant
from utils.constants import ExitCode
from utils.exceptions import FactorModelError
from utils.formatters import summarize_matrix
from utils.logger import get_view, log, setup_logger

COMMANDS = ("fit", "select", "decompose", "simulate", "report")

# (field, type, help) for every scalar RunConfig field
RUN_FLAGS: tuple[tuple[str, Any, str], ...] = (
    ("panel", Path, "CSV panel, first column dates, one column per series"),
    ("metadata", Path, "CSV of per-series metadata"),
    ("q", int, "number of dynamic shocks (selected when omitted)"),
    ("r", int, "number of static factors (selected when omitted)"),
    ("d", int, "cointegration deficit; q - d common trends (selected when omitted)"),
    ("q_max", int, "upper bound of the q search"),
    ("r_max", int, "upper bound of the r search"),
    ("trend_kmax", int, "upper bound of the common-trend count search"),
    ("tol_share", float, "explained-variance matching tolerance, percentage points"),
    ("adf_level", float, "significance level of the idiosyncratic unit-root tests"),
    ("bandwidth", int, "lag window of the spectral estimates"),
    ("detrend_threshold", float, "t-statistic above which a linear trend is kept"),
    ("long_run", str, "long-run variance of the detrend test: bartlett or literal"),
    ("diffuse_scale", float, "prior variance of the nonstationary initial states"),
    ("em_tol", float, "EM stopping threshold on the relative likelihood change"),
    ("em_max_iter", int, "EM iteration budget"),
    ("em_min_iter", int, "minimum number of EM iterations"),
    ("i1_floor_frac", float, "observation-variance floor fraction for I(1) series"),
    ("loglik_slack", float, "relative slack tolerated on likelihood decreases"),
    ("smoother", str, "smoother variant: " + ", ".join(v.value for v in SmootherVariant)),
    ("seed", int, "root seed recorded in the manifest"),
    ("output_dir", Path, "output directory (OUTPUT_DIR in the environment wins)"),
)

DGP_FLAGS: tuple[tuple[str, Any, Any, str], ...] = (
    ("n", int, None, "number of series"),
    ("T", int, None, "number of quarters"),
    ("q", int, None, "number of dynamic shocks"),
    ("d", int, None, "cointegration deficit, 0 < d < q"),
    ("s", int, 1, "loading lags of the dynamic factors; r = q(s+1)"),
    ("loading_scale", float, 1.0, "standard deviation of the loadings"),
    ("idio_ar", float, 0.5, "AR(1) coefficient of stationary idiosyncratic components"),
    ("i1_share", float, 0.0, "share of series with random-walk idiosyncratic components"),
    ("snr", float, 1.0, "var(common growth) / var(idiosyncratic innovation)"),
    ("gamma_radius", float, 0.7, "eigenvalue modulus of the cycle VAR"),
    ("cycle_ar", float, 0.5, "AR(1) coefficient of the dominant cycles"),
    ("cycle_scale", float, 1.0, "innovation scale of the dominant cycles"),
    ("residual_scale", float, 0.5, "scale of the residual stationary block"),
    ("burn_in", int, 100, "discarded periods of the stationary VAR"),
    ("seed", int, 0, "root seed"),
)


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="INI file with run settings")
    for name, kind, text in RUN_FLAGS:
        parser.add_argument(_flag(name), dest=name, type=kind, default=None, help=text)
    emit = parser.add_argument_group("outputs")
    for name in EMIT_FLAGS:
        emit.add_argument(
            _flag(name),
            dest=f"emit_{name}",
            action=argparse.BooleanOptionalAction,
            default=None,
            help=f"write the {name.replace('_', ' ')} output",
        )
    parser.add_argument(
        "--demean",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="remove the residual mean of series kept in mean mode",
    )
    parser.add_argument(
        "--tie",
        action="append",
        default=[],
        metavar="GROUP=ID,ID",
        help="restrict the listed series to equal common components (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfm",
        description="Non-stationary dynamic factor model with trend-cycle decomposition",
    )
    parser.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"),
        help="console and file log level (LOG_LEVEL by default)",
    )
    sub = parser.add_subparsers(
        dest="command", required=True, metavar="{" + ",".join(COMMANDS) + "}"
    )

    fit = sub.add_parser("fit", help="preprocess, select, estimate, decompose and report")
    _add_run_arguments(fit)

    select = sub.add_parser("select", help="run the model-selection criteria only")
    _add_run_arguments(select)

    for name, text in (
        ("decompose", "trend-cycle decomposition of a stored fit"),
        ("report", "write the enabled outputs of a stored fit"),
    ):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("model_dir", type=Path, help="directory of a previous fit")
        _add_run_arguments(cmd)

    simulate = sub.add_parser("simulate", help="write a synthetic panel with its ground truth")
    for name, kind, default, text in DGP_FLAGS:
        simulate.add_argument(
            _flag(name),
            dest=name,
            type=kind,
            default=default,
            required=default is None,
            help=text,
        )
    simulate.add_argument(
        "--random-rotation",
        action="store_true",
        help="rotate the factors by a random orthogonal matrix",
    )
    simulate.add_argument(
        "--dominant-cycle",
        action="store_true",
        help="let d cycles dominate the stationary factor block",
    )
    simulate.add_argument("--start", default=DEFAULT_START, help="first quarter, YYYYQn")
    simulate.add_argument("--output-dir", dest="output_dir", type=Path, default=Path("output"))
    return parser


def parse_ties(entries: Sequence[str]) -> dict[str, list[str]]:
    """
    Parse ``GROUP=ID,ID`` entries.

    :raises ValueError: On an entry without ``=``
    """
    ties: dict[str, list[str]] = {}
    for entry in entries:
        name, sep, members = entry.partition("=")
        if not sep or not name.strip():
            raise ValueError(f"tie {entry!r} is not of the form GROUP=ID,ID")
        ties[name.strip()] = [m.strip() for m in members.split(",") if m.strip()]
    return ties


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Build the run configuration from parsed flags and the optional INI file."""
    overrides: dict[str, Any] = {name: getattr(args, name) for name, _, _ in RUN_FLAGS}
    overrides.update({name: getattr(args, f"emit_{name}") for name in EMIT_FLAGS})
    overrides["demean"] = args.demean
    overrides["ties"] = parse_ties(args.tie) or None
    if args.config is not None:
        return RunConfig.from_ini(args.config, **overrides)
    return RunConfig.from_overrides(**overrides)


def dgp_from_args(args: argparse.Namespace) -> DGPConfig:
    values = {name: getattr(args, name) for name, _, _, _ in DGP_FLAGS}
    return DGPConfig(
        random_rotation=args.random_rotation, dominant_cycle=args.dominant_cycle, **values
    )


def render_result(result: PipelineResult) -> None:
    view = get_view()
    summary = {
        "command": result.command,
        "exit code": result.exit_code,
        "output directory": str(result.output_dir),
        "files written": len(result.outputs),
    }
    summary.update({f"selection.{k}": v for k, v in result.manifest.selection.items()})
    summary.update({f"estimation.{k}": v for k, v in result.manifest.estimation.items()})
    view.table("Run summary", summary, style="green" if result.ok else "red")
    if result.model is not None:
        p = result.model.params
        view.table(
            "Estimated parameters",
            {**summarize_matrix("Lambda", p.Lambda), **summarize_matrix("HH'", p.H @ p.H.T)},
        )
    if result.selection is not None and result.selection.table is not None:
        table = result.selection.table
        rows = [
            [k + 1, f"{dyn:.2f}", f"{sta:.2f}"]
            for k, (dyn, sta) in enumerate(zip(table.dynamic, table.static, strict=False))
        ]
        view.grid("Explained variance (%)", ["k", "dynamic", "static"], rows)
    if result.simulation is not None:
        view.table("Ground truth", truth_summary(result.simulation.truth))
    if result.manifest.warnings:
        view.panel("\n".join(result.manifest.warnings), title="Warnings", style="yellow")


def run_command(args: argparse.Namespace) -> PipelineResult:
    if args.command == "simulate":
        dgp = dgp_from_args(args)
        config = RunConfig.from_overrides(output_dir=args.output_dir, seed=dgp.seed)
        return Pipeline(config).simulate(dgp, start=args.start)

    config = config_from_args(args)
    pipeline = Pipeline(config)
    with get_view().status(f"dfm {args.command}"):
        if args.command == "fit":
            return pipeline.fit()
        if args.command == "select":
            return pipeline.select()
        if args.command == "decompose":
            return pipeline.decompose(args.model_dir)
        return pipeline.report(args.model_dir)


def main(argv: Sequence[str] | None = None) -> int:
    """
    Parse ``argv`` and run one subcommand.

    :return: Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.log_level:
        setup_logger(args.log_level)
    try:
        result = run_command(args)
    except (ValidationError, ValueError, OSError) as e:
        # configuration problems surface before any stage runs
        parser.print_usage(sys.stderr)
        log.error(f"invalid settings: {e}")
        return int(ExitCode.USAGE)
    except FactorModelError as e:
        log.error(e.message)
        code = ExitCode.SIMULATE if args.command == "simulate" else ExitCode.USAGE
        return int(code)

    render_result(result)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

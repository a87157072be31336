"""CLI entry point for metric-graph-ops.

Subcommands:
    info       structure report of a network file
    spectrum   eigenpairs of L for bands 0..K and Dirichlet values 1..K
    verify     run verification suites and report residuals
    wave       propagate a wave and write the trace as CSV
    config     print (or reset) the effective configuration

Exit status: 0 on success, 1 when verification fails, 2 on usage errors and 3 on invalid
input. Reports go to stdout unless --out is given; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from dotenv import load_dotenv

from . import __version__
from .artifacts import render_json, write_json, write_wave_trace_csv
from .checks import CheckContext, CheckStatus, Suite, run_checks
from .config import AppConfig, config_to_toml, load_config, reset_config
from .continuous import spectrum_report
from .dalembert import wave_trace
from .edge_function import (
    SampledEdgeFunction,
    check_grid_size,
    constant_function,
    random_sampled_function,
    sample_trig,
)
from .errors import InitialDataError, MetricGraphError, RunParameterError
from .logging_config import setup_logging
from .network import Network, load_network, structure_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_INPUT = 3

SUITE_CHOICES = [suite.value for suite in Suite] + ["all"]


@dataclass(frozen=True)
class InitialData:
    """Parsed ``--init`` / ``--velocity`` selector."""

    kind: str
    n: int = 0
    index: int = 0


def parse_initial_data(text: str, allow_zero: bool = False) -> InitialData:
    """Parse ``eigen:n:index``, ``constant``, ``random`` (and ``zero`` for velocities).

    Raises:
        argparse.ArgumentTypeError: The selector is malformed.
    """
    if text in ("constant", "random") or (allow_zero and text == "zero"):
        return InitialData(text)
    parts = text.split(":")
    if len(parts) == 3 and parts[0] == "eigen":
        try:
            n, index = int(parts[1]), int(parts[2])
        except ValueError:
            pass
        else:
            if n >= 0 and index >= 0:
                return InitialData("eigen", n, index)
    choices = "eigen:n:index, constant, random" + (", zero" if allow_zero else "")
    raise argparse.ArgumentTypeError(f"invalid selector {text!r} (expected {choices})")


def _velocity_selector(text: str) -> InitialData:
    return parse_initial_data(text, allow_zero=True)


def _grid_size(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid size {text!r}") from None
    if value < 2 or value % 2:
        raise argparse.ArgumentTypeError(f"grid size must be even and >= 2, got {value}")
    return value


def _band_index(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid band index {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"band index must be >= 0, got {value}")
    return value


def _time_bound(text: str) -> float:
    """A finite, non-negative time; rejects nan and inf."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid time {text!r}") from None
    if not math.isfinite(value) or value < 0:
        raise argparse.ArgumentTypeError(f"time must be finite and >= 0, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metric-graph-ops",
        description="Operators on metric graphs: spectra, d'Alembert operators and waves.",
    )
    parser.add_argument("--version", action="version", version=f"metric-graph-ops {__version__}")
    parser.add_argument("--config", help="Config file (default: $METRIC_GRAPH_OPS_CONFIG).")
    parser.add_argument("--log-level", help="Stderr log level (default from config).")
    parser.add_argument(
        "--log-file", action="store_true", help="Also write DEBUG logs to a dated file."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    info = sub.add_parser("info", help="Structure report of a network.")
    info.add_argument("--graph", required=True, help="Network JSON file.")

    spectrum = sub.add_parser("spectrum", help="Eigenpairs of the continuous Laplacian.")
    spectrum.add_argument("--graph", required=True, help="Network JSON file.")
    spectrum.add_argument("--bands", type=_band_index, help="Highest band / Dirichlet index K.")
    spectrum.add_argument("--out", help="Write the JSON report here instead of stdout.")

    verify = sub.add_parser("verify", help="Run verification suites.")
    verify.add_argument("--graph", required=True, help="Network JSON file.")
    verify.add_argument("--suite", choices=SUITE_CHOICES, default="all")
    verify.add_argument("--grid", type=_grid_size, help="Samples per edge N.")
    verify.add_argument("--bands", type=_band_index, help="Highest band / Dirichlet index K.")
    verify.add_argument("--tau-max", type=_time_bound, help="Largest time shift exercised.")
    verify.add_argument("--seed", type=int, help="Seed of the random test functions.")
    verify.add_argument("--out", help="Write the JSON report here instead of stdout.")

    wave = sub.add_parser("wave", help="Propagate a wave and write its trace as CSV.")
    wave.add_argument("--graph", required=True, help="Network JSON file.")
    wave.add_argument(
        "--init",
        type=parse_initial_data,
        required=True,
        help="Initial position: eigen:n:index, constant or random.",
    )
    wave.add_argument(
        "--velocity",
        type=_velocity_selector,
        default=InitialData("zero"),
        help="Initial velocity: eigen:n:index, constant, random or zero (default).",
    )
    wave.add_argument("--tau-max", type=_time_bound, help="Final time.")
    wave.add_argument("--grid", type=_grid_size, help="Samples per edge N.")
    wave.add_argument("--seed", type=int, help="Seed for random initial data.")
    wave.add_argument("--out", required=True, help="Wave trace CSV file.")

    config = sub.add_parser("config", help="Print the effective configuration as TOML.")
    config.add_argument("--reset", action="store_true", help="Rewrite the file with defaults.")
    return parser


def _emit(document: Any, out: str | None) -> None:
    if out:
        path = write_json(out, document)
        logger.info(f"Report written to {path}")
    else:
        sys.stdout.write(render_json(document))


def _initial_function(
    net: Network, selector: InitialData, grid_size: int, rng: np.random.Generator
) -> SampledEdgeFunction:
    if selector.kind == "zero":
        return constant_function(net, grid_size, 0.0)
    if selector.kind == "constant":
        return constant_function(net, grid_size)
    if selector.kind == "random":
        return random_sampled_function(net, grid_size, rng, smooth=True)
    report = spectrum_report(net, selector.n)
    pairs = [p for p in report.eigenpairs if p.n == selector.n]
    if selector.index >= len(pairs):
        raise InitialDataError(
            f"eigen:{selector.n}:{selector.index} out of range: "
            f"{len(pairs)} eigenpairs with n={selector.n}"
        )
    pair = pairs[selector.index]
    logger.info(f"Initial data: eigenpair lambda={pair.lam:.12g} ({pair.kind.value})")
    return sample_trig(pair.eigenfunction, grid_size)


def _frame_times(grid_size: int, tau_max: float, frames_per_unit: int) -> list[float]:
    """Grid-aligned frame times 0, d, 2d, ... up to tau_max, with d close to 1/frames."""
    last = int(np.floor(tau_max * grid_size + 1e-9))
    stride = max(1, round(grid_size / max(1, frames_per_unit)))
    steps = list(range(0, last + 1, stride))
    if steps[-1] != last:
        steps.append(last)
    return [s / grid_size for s in steps]


def cmd_info(args: argparse.Namespace, config: AppConfig) -> int:
    net = load_network(args.graph)
    _emit(structure_report(net).to_dict(), None)
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace, config: AppConfig) -> int:
    net = load_network(args.graph)
    bands = args.bands if args.bands is not None else config.numerics.bands
    _emit(spectrum_report(net, bands).to_dict(), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: AppConfig) -> int:
    numerics = config.numerics
    net = load_network(args.graph)
    ctx = CheckContext(
        network=net,
        grid_size=args.grid if args.grid is not None else numerics.grid_size,
        n_max=args.bands if args.bands is not None else numerics.bands,
        tau_max=args.tau_max if args.tau_max is not None else numerics.tau_max,
        seed=args.seed if args.seed is not None else numerics.seed,
        random_functions=numerics.random_functions,
        tolerances=config.tolerances,
    )
    suite = None if args.suite == "all" else Suite(args.suite)
    report = run_checks(ctx, suite)
    _emit(report.to_dict(), args.out)
    if not report.all_passed:
        failed = [r.name for r in report.records if r.status is CheckStatus.FAIL]
        logger.error(f"Verification failed: {', '.join(failed)}")
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def cmd_wave(args: argparse.Namespace, config: AppConfig) -> int:
    numerics = config.numerics
    net = load_network(args.graph)
    grid_size = args.grid if args.grid is not None else numerics.grid_size
    tau_max = args.tau_max if args.tau_max is not None else numerics.tau_max
    check_grid_size(grid_size)
    if not math.isfinite(tau_max) or tau_max < 0:
        raise RunParameterError(f"tau_max must be finite and >= 0, got {tau_max}")
    rng = np.random.default_rng(args.seed if args.seed is not None else numerics.seed)
    f0 = _initial_function(net, args.init, grid_size, rng)
    f1 = _initial_function(net, args.velocity, grid_size, rng)
    taus = _frame_times(grid_size, tau_max, config.output.wave_frames_per_unit)
    path = write_wave_trace_csv(args.out, wave_trace(net, f0, f1, taus))
    logger.info(f"Wave trace with {len(taus)} frames written to {path}")
    return EXIT_OK


def cmd_config(args: argparse.Namespace, config: AppConfig) -> int:
    if args.reset:
        config = reset_config(args.config)
        logger.info("Configuration reset to defaults")
    sys.stdout.write(config_to_toml(config))
    return EXIT_OK


COMMANDS = {
    "info": cmd_info,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "wave": cmd_wave,
    "config": cmd_config,
}


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    config = load_config(args.config)
    setup_logging(
        level=args.log_level or config.logging.level,
        log_to_file=args.log_file or config.logging.log_to_file,
        log_dir=config.logging.log_dir,
    )
    try:
        return COMMANDS[args.command](args, config)
    except (MetricGraphError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""share-relay command line: the experiment driver.

Subcommands: simulate, verify-demo, analyze, sweep, dimension. It's the
target of:
    share-relay <command> [flags]
    python -m share_relay <command> [flags]

Lifecycle:
    1. Parse flags and configure logging (stderr, optional rotating file)
    2. Merge config file and flags into a validated command config
    3. Run the campaign
    4. Render CSV/JSON with the provenance header and write it out

Exit status: 0 success, 2 configuration error, 1 runtime error.
"""
import argparse
import logging
import logging.handlers
import os
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from share_relay import __version__
from share_relay.campaigns import (
    DIMENSION_COLUMNS,
    SIMULATE_COLUMNS,
    SWEEP_COLUMNS,
    VERIFY_COLUMNS,
    ExperimentRunner,
)
from share_relay.config import (
    AnalyzeConfig,
    CommonConfig,
    DimensionConfig,
    SimulateConfig,
    SweepConfig,
    VerifyDemoConfig,
    effective_config_json,
    load_config,
)
from share_relay.core.analysis import SecurityReport
from share_relay.errors import ConfigError
from share_relay.output import emit, header_lines, render_csv, render_json

logger = logging.getLogger("share_relay")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


# ---------------------------------------------------------------------------
# Logging setup
# ---------------------------------------------------------------------------

def configure_logging(level: Optional[str] = None, log_file: Optional[Path] = None) -> None:
    """Set up logging to stderr with optional file rotation.

    Level: explicit argument, else SHARE_RELAY_LOG_LEVEL, else WARNING.
    """
    level_name = (level or os.getenv("SHARE_RELAY_LOG_LEVEL") or "WARNING").upper()

    fmt = logging.Formatter(
        "[%(asctime)s] [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    root = logging.getLogger("share_relay")
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    root.setLevel(logging.DEBUG)

    # Console handler on stderr so CSV on stdout stays clean
    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(fmt)
    console.setLevel(getattr(logging, level_name, logging.WARNING))
    root.addHandler(console)

    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10 MB
            backupCount=5,
        )
        file_handler.setFormatter(fmt)
        file_handler.setLevel(logging.DEBUG)
        root.addHandler(file_handler)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="Master seed (u64)")
    parser.add_argument("--trials", type=int, help="Number of trials")
    parser.add_argument("--out", type=Path, help="Output file (default: stdout)")
    parser.add_argument("--config", type=Path, help="JSON config document")
    parser.add_argument("--threads", type=int, help="Worker threads")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--log-file", type=Path, help="Rotating debug log file")


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="share-relay",
        description=(
            "Simulate and analyse a secret-sharing relay across a chain of cities "
            "with randomly compromised nodes."
        ),
    )
    parser.add_argument("--version", action="version", version=f"share-relay {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="Seeded relay runs with sampled compromise")
    _common_flags(simulate)
    simulate.add_argument("--m", type=int, help="Number of cities")
    simulate.add_argument("--n", type=int, help="Nodes per city")
    simulate.add_argument("--ell", type=int, help="Share length in bits")
    simulate.add_argument("--t", type=float, help="Per-node honesty probability")
    simulate.add_argument("--model", choices=["bernoulli", "fixed-fraction"])

    verify = commands.add_parser("verify-demo", help="Key verification under attack")
    _common_flags(verify)
    verify.add_argument("--ell-1a", dest="ell_1a", type=int, help="Nonce length")
    verify.add_argument("--ell-1b", dest="ell_1b", type=int, help="Key-hash length")
    verify.add_argument("--ell-2", dest="ell_2", type=int, help="Reply-hash length")
    verify.add_argument("--ell-3", dest="ell_3", type=int, help="Payload length")
    verify.add_argument("--hash-family", choices=["default-nonlinear", "linear-test"])
    verify.add_argument("--hash-seed", type=int)
    verify.add_argument(
        "--attack", choices=["none", "random-e1b", "linear-forge", "impersonate"]
    )

    analyze = commands.add_parser("analyze", help="Bound, exact and Monte Carlo over a grid")
    _common_flags(analyze)
    analyze.add_argument("--n", type=int, nargs="+")
    analyze.add_argument("--m", type=int, nargs="+")
    analyze.add_argument("--t", type=float, nargs="+")
    analyze.add_argument("--model", choices=["bernoulli", "fixed-fraction"])
    analyze.add_argument("--format", choices=["csv", "json"])

    sweep = commands.add_parser("sweep", help="Security and bandwidth over ranges")
    _common_flags(sweep)
    sweep.add_argument("--n-range", dest="n_range", type=int, nargs=3,
                       metavar=("START", "STOP", "STEP"))
    sweep.add_argument("--m-range", dest="m_range", type=int, nargs=3,
                       metavar=("START", "STOP", "STEP"))
    sweep.add_argument("--t", type=float, nargs="+")
    sweep.add_argument("--ell", type=int)
    sweep.add_argument("--model", choices=["bernoulli", "fixed-fraction"])

    dimension = commands.add_parser("dimension", help="Nodes per city for a security target")
    _common_flags(dimension)
    dimension.add_argument("--p-s", dest="p_s", type=float, nargs="+")
    dimension.add_argument("--delta", type=float, nargs="+")
    dimension.add_argument("--m", type=int, nargs="+")
    dimension.add_argument("--t", type=float, nargs="+")
    dimension.add_argument("--ell", type=int)

    return parser


_NON_CONFIG_FLAGS = {"command", "config", "log_level", "log_file"}


def _overrides(args: argparse.Namespace) -> dict:
    return {
        key: value
        for key, value in vars(args).items()
        if key not in _NON_CONFIG_FLAGS and value is not None
    }


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------

def _header(command: str, config: CommonConfig) -> list[str]:
    return header_lines(command, config.seed, effective_config_json(config))


def _handle_simulate(runner: ExperimentRunner, config: SimulateConfig) -> str:
    rows = runner.simulate(config)
    return render_csv(SIMULATE_COLUMNS, rows, _header("simulate", config))


def _handle_verify_demo(runner: ExperimentRunner, config: VerifyDemoConfig) -> str:
    row = runner.verify_demo(config)
    return render_csv(VERIFY_COLUMNS, [row], _header("verify-demo", config))


def _handle_analyze(runner: ExperimentRunner, config: AnalyzeConfig) -> str:
    reports = runner.analyze(config)
    if config.format == "json":
        document = {"reports": [report.to_dict() for report in reports]}
        return render_json(document, "analyze", config.seed, effective_config_json(config))
    rows = [report.to_csv_row() for report in reports]
    return render_csv(SecurityReport.CSV_COLUMNS, rows, _header("analyze", config))


def _handle_sweep(runner: ExperimentRunner, config: SweepConfig) -> str:
    return render_csv(SWEEP_COLUMNS, runner.sweep(config), _header("sweep", config))


def _handle_dimension(runner: ExperimentRunner, config: DimensionConfig) -> str:
    return render_csv(DIMENSION_COLUMNS, runner.dimension(config), _header("dimension", config))


COMMANDS: dict[str, tuple[type[CommonConfig], Callable[..., str]]] = {
    "simulate": (SimulateConfig, _handle_simulate),
    "verify-demo": (VerifyDemoConfig, _handle_verify_demo),
    "analyze": (AnalyzeConfig, _handle_analyze),
    "sweep": (SweepConfig, _handle_sweep),
    "dimension": (DimensionConfig, _handle_dimension),
}


# ---------------------------------------------------------------------------
# Main entry point
# ---------------------------------------------------------------------------

def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit status."""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG

    configure_logging(args.log_level, args.log_file)
    config_model, handler = COMMANDS[args.command]

    try:
        config = load_config(config_model, args.config, _overrides(args))
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    logger.info(f"Running {args.command} with {config.threads} thread(s)")
    try:
        text = handler(ExperimentRunner(threads=config.threads), config)
        emit(text, config.out)
    except Exception as e:
        logger.error(f"Command {args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def run() -> None:
    """Script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()

"""CLI entry point and experiment dispatch using argparse."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from dinilab import __build__, __version__
from dinilab.config import SUITES, parse_config, run_directory
from dinilab.errors import ConfigError, InvalidArgumentError, LabError, StageFailedError
from dinilab.manifest import RunManifest
from dinilab.stages.pipeline import run
from dinilab.ui import Console, configure_logging


def _json_object(text: str) -> dict[str, Any]:
    try:
        value = json.loads(text)
    except json.JSONDecodeError as e:
        raise argparse.ArgumentTypeError(f"not valid JSON: {e}") from e
    if not isinstance(value, dict):
        raise argparse.ArgumentTypeError("expected a JSON object")
    return value


def _grid_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Flag values keyed by config field; unset flags stay ``None`` and do not override the file."""
    witness = getattr(args, "witness", None) or getattr(args, "data", None) or getattr(args, "ic", None)
    return {
        "command": args.command,
        "output_dir": str(args.out) if args.out else None,
        "threads": args.threads,
        "grid": getattr(args, "grid", None),
        "shape": getattr(args, "shape", None),
        "witness": witness,
        "params": getattr(args, "params", None),
        "r_lo": getattr(args, "r_lo", None),
        "rho": getattr(args, "rho", None),
        "grids": getattr(args, "grids", None),
        "t_final": getattr(args, "t_final", None),
        "window": getattr(args, "window", None),
        "tol": getattr(args, "tol", None),
        "forcing": getattr(args, "forcing", None),
        "forcing_params": getattr(args, "forcing_params", None),
        "suite": getattr(args, "suite", None),
        "seed": getattr(args, "seed", None),
    }


def _report(console: Console, manifest: RunManifest, run_dir: Path) -> int:
    summary = manifest.checks
    console.print()
    if manifest.passed:
        console.success(f"{summary.passed}/{summary.total} checks passed ({summary.gating} gating)")
    else:
        console.error(f"Gating checks failed: {', '.join(summary.gating_failed)}")
    if summary.informational_failed:
        console.warning(f"Informational checks failed: {', '.join(summary.informational_failed)}")
    console.info(f"Outputs in {run_dir}")
    return 0 if manifest.passed else 1


def run_command(args: argparse.Namespace) -> int:
    """Shared handler body: build the config, run the pipeline, report the manifest."""
    console = Console(quiet=args.quiet)
    configure_logging(console, verbose=args.verbose)
    try:
        config = parse_config(args.config, _overrides(args))
    except (ConfigError, InvalidArgumentError) as e:
        console.error(str(e))
        return 2

    try:
        manifest = run(config, ui=console)
    except StageFailedError as e:
        console.error(str(e))
        return 1
    except LabError as e:
        console.error(f"Run failed: {e}")
        return 1
    except KeyboardInterrupt:
        console.warning("Run cancelled")
        return 130

    return _report(console, manifest, run_directory(config))


def cmd_seminorm(args: argparse.Namespace) -> int:
    """Semi-norm report for one witness."""
    return run_command(args)


def cmd_poisson(args: argparse.Namespace) -> int:
    """Poisson solve and refinement study."""
    return run_command(args)


def cmd_stokes(args: argparse.Namespace) -> int:
    """Stokes solve and manufactured convergence."""
    return run_command(args)


def cmd_euler(args: argparse.Namespace) -> int:
    """2-D Euler trajectory with its estimate checks."""
    return run_command(args)


def cmd_study(args: argparse.Namespace) -> int:
    """One suite of estimate checks."""
    return run_command(args)


def cmd_version(_args: argparse.Namespace) -> int:
    """Show version information."""
    print(f"dinilab {__version__} (build: {__build__})")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="JSON config file; flags override it")
    parser.add_argument("--out", type=Path, default=None, help="Output base directory")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads for the sine transforms")
    parser.add_argument("--seed", type=int, default=None, help="Seed for random witnesses and pair samples")
    parser.add_argument("-q", "--quiet", action="store_true", help="Errors only")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")


def _add_grids(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", type=str, default=None, help="Witness kind used as data")
    parser.add_argument("--params", type=_json_object, default=None, help="Witness parameters as a JSON object")
    parser.add_argument(
        "--grids",
        type=_grid_list,
        default=None,
        help="Comma-separated refinement series, e.g. 33,65,129",
    )
    parser.add_argument("--tol", type=float, default=None, help="Solver tolerance")


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog="dinilab",
        description="Numerical laboratory for Dini-type function spaces and Euler regularity",
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    seminorm_parser = subparsers.add_parser("seminorm", help="Compute the semi-norm report of a witness")
    _add_common(seminorm_parser)
    seminorm_parser.add_argument("--witness", type=str, default=None, help="Witness kind")
    seminorm_parser.add_argument("--params", type=_json_object, default=None, help="Witness parameters as a JSON object")
    seminorm_parser.add_argument("--grid", type=int, default=None, help="Nodes per side")
    seminorm_parser.add_argument("--shape", choices=("square", "disk"), default=None, help="Domain shape")
    seminorm_parser.add_argument("--r-lo", dest="r_lo", type=float, default=None, help="Lower cutoff (default 2h)")
    seminorm_parser.add_argument("--rho", type=float, default=None, help="Upper cutoff (default half the diameter)")

    poisson_parser = subparsers.add_parser("poisson", help="Solve -Δψ = θ and check convergence")
    _add_common(poisson_parser)
    _add_grids(poisson_parser)

    stokes_parser = subparsers.add_parser("stokes", help="Solve the Stokes system on the MAC grid")
    _add_common(stokes_parser)
    _add_grids(stokes_parser)

    euler_parser = subparsers.add_parser("euler", help="Solve 2-D Euler by windowed Picard iteration")
    _add_common(euler_parser)
    euler_parser.add_argument("--ic", type=str, default=None, help="Initial vorticity witness kind")
    euler_parser.add_argument("--params", type=_json_object, default=None, help="Initial vorticity parameters")
    euler_parser.add_argument("--grid", type=int, default=None, help="Nodes per side")
    euler_parser.add_argument("--t-final", dest="t_final", type=float, default=None, help="Final time T")
    euler_parser.add_argument("--window", type=float, default=None, help="Picard window length")
    euler_parser.add_argument("--tol", type=float, default=None, help="Picard tolerance")
    euler_parser.add_argument("--forcing", type=str, default=None, help="Witness kind of a steady forcing")
    euler_parser.add_argument(
        "--forcing-params", dest="forcing_params", type=_json_object, default=None, help="Forcing parameters"
    )

    study_parser = subparsers.add_parser("study", help="Run one suite of estimate checks")
    _add_common(study_parser)
    study_parser.add_argument("--suite", choices=SUITES, default=None, help="Suite to run")
    study_parser.add_argument(
        "--grids",
        type=_grid_list,
        default=None,
        help="Refinement series for the regularity suite",
    )
    study_parser.add_argument("--grid", type=int, default=None, help="Nodes per side")

    subparsers.add_parser("version", help="Show version information")

    return parser


HANDLERS = {
    "seminorm": cmd_seminorm,
    "poisson": cmd_poisson,
    "stokes": cmd_stokes,
    "euler": cmd_euler,
    "study": cmd_study,
    "version": cmd_version,
}


def main(argv: list[str] | None = None) -> None:
    """Main entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    handler = HANDLERS.get(args.command)
    if handler is None:
        parser.print_help()
        sys.exit(0)
    sys.exit(handler(args))


if __name__ == "__main__":
    main()

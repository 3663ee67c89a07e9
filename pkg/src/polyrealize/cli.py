"""
polyrealize CLI.

Command-line interface for solving polynomial systems and realizing their
difference equations.

Usage:
    polyrealize solve FILE [--degree D] [--max-degree D] [--json]
    polyrealize realize FILE [--x0 V ...] [--json]
    polyrealize simulate FILE --extents K ... [--x0 V ...] [--json]
    polyrealize verify FILE ROOTS_JSON
    polyrealize macaulay FILE [-d D] [--homogeneous]
    polyrealize config [--max-degree D ...] [--write PATH]

Exit codes: 0 ok, 1 input error, 2 no stabilization, 3 realization failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from . import __version__
from .config import S0_ROW_CHOICES, SolveConfig
from .macaulay import build_macaulay, default_degree
from .parser import parse_system
from .poly import PolySystem, evaluate, homogenize
from .realization import TrajectoryGrid, realize, simulate, verify_trajectory
from .report import (
    ComplexValue,
    RootCheck,
    RootsFile,
    SimulationReport,
    VerificationReport,
    build_report,
    render_text,
    render_verification,
)
from .solver import solve
from .types import DimensionMismatchError, GridTooSmallError, PolyRealizeError, VerificationError

logger = logging.getLogger(__name__)


def setup_logging(level: str = "WARNING", log_file: str | None = None) -> None:
    """Configure logging. Records go to stderr, never stdout."""
    numeric_level = getattr(logging, level.upper(), logging.WARNING)
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]

    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=handlers,
    )


def load_config(args: argparse.Namespace) -> SolveConfig:
    """Dataclass defaults < config file < command-line flags."""
    path = Path(args.config) if args.config else None
    config = SolveConfig.load(path)
    return config.merged(
        degree=getattr(args, "degree", None),
        max_degree=getattr(args, "max_degree", None),
        tol=args.tol,
        basis_tol=args.basis_tol,
        residual_tol=args.residual_tol,
        cluster_tol=args.cluster_tol,
        seed=args.seed,
        s0_rows=getattr(args, "s0_rows", None),
        output="json" if args.json else None,
    )


def read_system(path: str) -> PolySystem:
    return parse_system(Path(path).read_text(encoding="utf-8"))


# CLI Commands

def cmd_solve(args: argparse.Namespace) -> int:
    """Solve a system and print its roots."""
    config = load_config(args)
    system = read_system(args.file)
    roots = solve(system, config)
    report = build_report(system, roots, config.residual_tol)
    if config.output == "json":
        print(report.model_dump_json(indent=2))
    else:
        print(render_text(report, config.residual_tol), end="")
    return 0


def cmd_realize(args: argparse.Namespace) -> int:
    """Print the state-space realization of a system."""
    config = load_config(args)
    system = read_system(args.file)
    result = realize(system, config, x0=args.x0)
    report = build_report(system, result.solve.roots, config.residual_tol, result)
    if config.output == "json":
        print(report.model_dump_json(indent=2))
    else:
        print(render_text(report, config.residual_tol), end="")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    """Simulate the realization on a grid and check it against the equations."""
    config = load_config(args)
    system = read_system(args.file)
    result = realize(system, config, x0=args.x0)
    grid: TrajectoryGrid = simulate(result.realization, args.extents)
    try:
        residual = verify_trajectory(system, grid)
    except GridTooSmallError as e:
        logger.info(f"Skipping verification: {e}")
        residual = None

    if config.output == "json":
        report = SimulationReport.from_grid(grid, residual)
        print(report.model_dump_json(indent=2))
        return 0
    print(grid.to_csv(), end="")
    if residual is None:
        print("verification: grid too small for the equations")
    else:
        print(f"verification residual: {residual:.3g}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    """Evaluate supplied roots; exit 4 if any residual exceeds the tolerance."""
    config = load_config(args)
    system = read_system(args.file)
    roots = RootsFile.model_validate_json(Path(args.roots).read_text(encoding="utf-8"))
    lifted = homogenize(system)

    checks = []
    for number, entry in enumerate(roots.roots, start=1):
        coords = entry.as_complex()
        target = lifted if entry.homogeneous else system
        if len(coords) != target.n:
            raise DimensionMismatchError(
                f"Root {number} has {len(coords)} coordinates, expected {target.n}"
            )
        residuals = [abs(evaluate(p, coords)) for p in target.polys]
        checks.append(RootCheck(
            coords=[ComplexValue(re=c.real, im=c.imag) for c in coords],
            homogeneous=entry.homogeneous,
            residuals=residuals,
            ok=all(r <= config.residual_tol for r in residuals),
        ))

    report = VerificationReport(
        residual_tol=config.residual_tol,
        roots=checks,
        ok=all(c.ok for c in checks),
    )
    if config.output == "json":
        print(report.model_dump_json(indent=2))
    else:
        print(render_verification(report), end="")
    if not report.ok:
        logger.warning("Some roots do not satisfy the system")
        return VerificationError.exit_code
    return 0


def cmd_macaulay(args: argparse.Namespace) -> int:
    """Dump the Macaulay matrix as CSV."""
    system = read_system(args.file)
    degree = args.degree if args.degree is not None else default_degree(system)
    if args.homogeneous:
        system = homogenize(system)
    M = build_macaulay(system, degree)
    print(M.to_csv(system.variable_names), end="")
    return 0


def cmd_config(args: argparse.Namespace) -> int:
    """Print the effective configuration, or store it with --write."""
    config = load_config(args)
    if args.write:
        path = Path(args.write)
        config.save(path)
        print(f"Saved configuration to {path}")
        return 0
    print(json.dumps(config.to_dict(), indent=2))
    return 0


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--tol", type=float, help="Relative rank tolerance for the Macaulay matrix")
    common.add_argument("--basis-tol", type=float, help="Relative rank tolerance on blocks of the null-space basis")
    common.add_argument("--residual-tol", type=float, help="Residual above which roots are flagged")
    common.add_argument("--cluster-tol", type=float, help="Merge radius for multiple roots")
    common.add_argument("--seed", type=int, help="Seed of the random shift combination")
    common.add_argument("--json", action="store_true", help="Print the v1 JSON report")
    common.add_argument("--log-level", default="WARNING", help="Log level (default WARNING)")
    common.add_argument("--log-file", help="Also log to this file")
    return common


def _degree_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--degree", "-d", type=int, help="First Macaulay degree")
    parser.add_argument("--max-degree", type=int, help="Last Macaulay degree")
    parser.add_argument("--s0-rows", choices=S0_ROW_CHOICES, help="Rows of the unshifted block")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyrealize",
        description="Solve polynomial systems and realize their difference equations",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    # solve
    solve_parser = subparsers.add_parser("solve", parents=[common], help="Compute the roots")
    solve_parser.add_argument("file", help="System file")
    _degree_options(solve_parser)
    solve_parser.set_defaults(func=cmd_solve)

    # realize
    realize_parser = subparsers.add_parser(
        "realize", parents=[common], help="Compute the state-space realization"
    )
    realize_parser.add_argument("file", help="System file")
    realize_parser.add_argument("--x0", type=float, nargs="+", help="Initial state")
    _degree_options(realize_parser)
    realize_parser.set_defaults(func=cmd_realize)

    # simulate
    simulate_parser = subparsers.add_parser(
        "simulate", parents=[common], help="Simulate a trajectory grid"
    )
    simulate_parser.add_argument("file", help="System file")
    simulate_parser.add_argument(
        "--extents", "-k", type=int, nargs="+", required=True, help="Grid size per axis"
    )
    simulate_parser.add_argument("--x0", type=float, nargs="+", help="Initial state")
    _degree_options(simulate_parser)
    simulate_parser.set_defaults(func=cmd_simulate)

    # verify
    verify_parser = subparsers.add_parser(
        "verify", parents=[common], help="Check roots from a JSON report"
    )
    verify_parser.add_argument("file", help="System file")
    verify_parser.add_argument("roots", help="JSON file with a roots list")
    verify_parser.set_defaults(func=cmd_verify)

    # macaulay
    macaulay_parser = subparsers.add_parser(
        "macaulay", parents=[common], help="Dump the Macaulay matrix as CSV"
    )
    macaulay_parser.add_argument("file", help="System file")
    macaulay_parser.add_argument("--degree", "-d", type=int, help="Degree (default: sum(d_i) - n + 1)")
    macaulay_parser.add_argument(
        "--homogeneous", action="store_true", help="Build from the homogenized system"
    )
    macaulay_parser.set_defaults(func=cmd_macaulay)

    # config
    config_parser = subparsers.add_parser(
        "config", parents=[common], help="Show or store the effective configuration"
    )
    _degree_options(config_parser)
    config_parser.add_argument("--write", metavar="PATH", help="Save the configuration to PATH")
    config_parser.set_defaults(func=cmd_config)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 1

    setup_logging(args.log_level, args.log_file)

    try:
        return args.func(args)
    except PolyRealizeError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""
CLI entry point for gueedge.

Usage:
    python -m gueedge <command> [options]
    gueedge <command> [options]  (if installed via pip)
"""

import argparse
import logging
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from .errors import GueEdgeError, RegimeError
from .models import RunConfig

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

logger = logging.getLogger("gueedge")


def parse_floats(text: str) -> List[float]:
    """Comma-separated values, or start:stop:count for an evenly spaced grid."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
        return [float(x) for x in np.linspace(start, stop, count)]
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_ints(text: str) -> List[int]:
    """Comma-separated integers."""
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def setup_logging(verbosity: int, debug: bool) -> None:
    """One RichHandler on stderr; WARNING by default, -v INFO, -vv DEBUG."""
    from rich.console import Console
    from rich.logging import RichHandler

    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2 or debug:
        level = logging.DEBUG
    handler = RichHandler(console=Console(stderr=True), show_path=debug, rich_tracebacks=debug)
    logging.basicConfig(level=level, format="%(message)s", datefmt="[%X]", handlers=[handler], force=True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", type=float, default=0.0, metavar="C", help="Scaling constant c (default: 0)")
    common.add_argument("-m", type=int, default=100, metavar="M", help="Quadrature nodes (default: 100)")
    common.add_argument("-T", type=float, default=40.0, metavar="T", help="Airy truncation length (default: 40)")
    common.add_argument("--seed", type=int, default=42, help="Master seed (default: 42)")
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")
    common.add_argument("-o", "--output", dest="output_path", metavar="PATH", help="Output file (default: stdout)")
    common.add_argument("--workers", type=int, default=1, metavar="N", help="Worker count (default: 1)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging (-v INFO, -vv DEBUG)")
    common.add_argument("--debug", action="store_true", help="Print tracebacks on error")
    common.add_argument("--quiet", action="store_true", help="No summary table on stderr")

    parser = argparse.ArgumentParser(
        prog="gueedge",
        description="Finite-n edge statistics of GUE: Tracy-Widom, Fredholm and Edgeworth",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    gueedge tw-table --s-grid=-4:4:9          F_2 by both routes on a grid
    gueedge edgeworth --n-list 16,32,64,128 --s-grid 0 -c 1
    gueedge verify --check identity-q1       Run a single check
    gueedge mc --n-list 2,4,8 --num-samples 100000
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    tw = sub.add_parser("tw-table", parents=[common], help="Tabulate F_2, q, u_0, v_0")
    tw.add_argument("--s-grid", type=parse_floats, required=True, metavar="GRID")

    ew = sub.add_parser("edgeworth", parents=[common], help="Exact F_{n,2} against its Edgeworth approximations")
    ew.add_argument("--s-grid", type=parse_floats, required=True, metavar="GRID")
    ew.add_argument("--n-list", type=parse_ints, required=True, metavar="N,N,...")

    vf = sub.add_parser("verify", parents=[common], help="Run the verification suite")
    vf.add_argument("--check", dest="checks", action="append", default=[], metavar="NAME", help="Run only this check (repeatable)")
    vf.add_argument("--list", dest="list_checks", action="store_true", help="List check names and exit")
    vf.add_argument("--tolerance", type=float, default=None, help="Override every check tolerance")

    mc = sub.add_parser("mc", parents=[common], help="Monte Carlo lambda_max against the Fredholm CDF")
    mc.add_argument("--n-list", type=parse_ints, required=True, metavar="N,N,...")
    mc.add_argument("--t-grid", type=parse_floats, default=[], metavar="GRID")
    mc.add_argument("--num-samples", type=int, default=100_000)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        s_grid=getattr(args, "s_grid", []),
        t_grid=getattr(args, "t_grid", []),
        n_list=getattr(args, "n_list", []),
        c=args.c,
        m=args.m,
        T=args.T,
        seed=args.seed,
        num_samples=getattr(args, "num_samples", 100_000),
        output_format=args.output_format,
        output_path=args.output_path,
        checks=getattr(args, "checks", []),
        tolerance=getattr(args, "tolerance", None),
        workers=args.workers,
    )


def run(cfg: RunConfig, quiet: bool = False) -> int:
    """Dispatch one validated command; returns the process exit code."""
    from rich.console import Console

    from .report import checks, commands, output

    unknown = [name for name in cfg.checks if name not in checks.CHECKS]
    if unknown:
        raise RegimeError("check", unknown[0], f"one of {checks.check_names()}")

    exit_code = EXIT_OK
    if cfg.command == "tw-table":
        report = commands.cmd_tw_table(cfg)
    elif cfg.command == "edgeworth":
        report = commands.cmd_edgeworth(cfg)
    elif cfg.command == "verify":
        report, all_passed = commands.cmd_verify(cfg)
        exit_code = EXIT_OK if all_passed else EXIT_FAILED
    else:
        report = commands.cmd_mc(cfg)

    output.write_report(report, cfg.provenance(), cfg.output_format, cfg.output_path)
    if not quiet:
        output.render_table(report, Console(stderr=True))
    return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.debug)

    if args.command == "verify" and args.list_checks:
        from .report import checks

        for name, check in checks.CHECKS.items():
            print(f"{name:28s} {check.tolerance:<8g} {check.description}")
        return EXIT_OK

    try:
        cfg = config_from_args(args).validate()
        return run(cfg, args.quiet)
    except KeyboardInterrupt:
        return EXIT_FAILED
    except RegimeError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        if args.debug:
            logger.exception("regime error")
        return EXIT_USAGE
    except GueEdgeError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        if args.debug:
            logger.exception("numerical error")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())

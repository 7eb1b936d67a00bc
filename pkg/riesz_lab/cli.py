"""
CLI entry point for riesz-lab.

Usage:
    rieszlab fn join --fn identity --fn2 '[[["-1","1"],["1","-1"]]]'
    rieszlab region is_regular_open --region "(0,1]"
    rieszlab ideal band-status --principal tplus.json
    rieszlab urysohn split --fn abs --region "[-1,0)" --region2 "(0,1]"
    rieszlab telescope --space unit --fn one --region "(0,1]" --count 10
    rieszlab check even-sum --out reports/
    rieszlab lattice pseudo --divisors 12 --element 2
    rieszlab recheck reports/check-even-sum.json

Exit status: 0 verdict pass, 1 verdict fail, 2 input or usage error.
"""

from typing import List, Optional
import argparse
import sys

from . import __version__
from .main import (
    CHECKS,
    FN_OPS,
    IDEAL_OPS,
    LATTICE_OPS,
    REGION_COMMAND_OPS,
    URYSOHN_OPS,
    Laboratory,
)
from .schemas import Command, LabConfig
from .utils import (
    DEFAULT_BUMP_PREFIX,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_SEQUENCE_CUTOFF,
    DEFAULT_GRID,
    parse_grid,
)


INPUT_KEYS = (
    "space", "fn", "fn2", "fn3", "region", "region2", "ideal", "principal",
    "region_ideal", "sublattice", "at", "at2", "scalar", "count", "element", "element2",
    "chain", "antichain", "boolean", "divisors", "fence", "named", "poset", "downsets",
    "report",
)


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="Report file or directory (default: stdout)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="Random seed for sampled checks")
    parser.add_argument("--cutoff", type=int, default=DEFAULT_SEQUENCE_CUTOFF,
                        help="Stages searched for sequence-generated ideals")
    parser.add_argument("--grid", type=parse_grid, default=DEFAULT_GRID,
                        help="Bump family (r, s) pairs as r:s,r:s,...")
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                        help="Random samples for property cross-checks")
    parser.add_argument("--prefix", type=int, default=DEFAULT_BUMP_PREFIX,
                        help="Bumps checked exactly per family")
    parser.add_argument("--workers", type=int, default=1,
                        help="Threads for independent checker cases")
    parser.add_argument("--recheck", action="store_true",
                        help="Re-verify every certificate from the serialized report")
    parser.add_argument("--timings", action="store_true",
                        help="Record wall-clock timings in the report")
    parser.add_argument("--verbose", "-v", action="store_true",
                        help="Enable verbose output")


def _add_value_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("values (catalog keyword, inline JSON or JSON file)")
    group.add_argument("--space", help="interval, unit, two-components or [[a, b], ...]")
    group.add_argument("--fn", help="one, zero, identity, tplus, tminus, abs or knot lists")
    group.add_argument("--fn2", help="Second function")
    group.add_argument("--fn3", help="Third function")
    group.add_argument("--region", help='Region, e.g. "[-1,0)|(0,1]", {0}, full, component:1')
    group.add_argument("--region2", help="Second region")
    group.add_argument("--ideal", help="Ideal tree as JSON")
    group.add_argument("--principal", help="Principal ideal of a function")
    group.add_argument("--region-ideal", dest="region_ideal", help="Ideal E(A) of a region")
    group.add_argument("--sublattice", choices=("Full", "EvenNearZero"),
                       help="Ambient sublattice (default Full)")
    group.add_argument("--at", help="Point, e.g. 1/2")
    group.add_argument("--at2", help="Second point")
    group.add_argument("--scalar", help="Rational scalar (scale factor, exhaustion scale)")
    group.add_argument("--count", type=int, help="Number of telescoping pieces")


def _add_lattice_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("finite lattices")
    group.add_argument("--chain", type=int, help="Chain with k elements")
    group.add_argument("--antichain", type=int, help="Antichain with k elements")
    group.add_argument("--boolean", type=int, help="Boolean lattice of subsets of k points")
    group.add_argument("--divisors", type=int, help="Divisors of m under divisibility")
    group.add_argument("--fence", type=int, help="Fence 0 < 1 > 2 < ... on k points")
    group.add_argument("--named", help="N5 or M3")
    group.add_argument("--poset", help='Poset JSON {"n", "leq"} or {"n", "pairs"}')
    group.add_argument("--downsets", action="store_true",
                       help="Use the lattice of downsets of the chosen poset")
    group.add_argument("--element", help="Element label")
    group.add_argument("--element2", help="Second element label (interval top)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rieszlab",
        description="riesz-lab: exact vector-lattice laboratory over piecewise-linear "
                    "functions and finite distributive lattices.",
        epilog="Example: rieszlab ideal band-status --principal tplus",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"rieszlab v{__version__}",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    def add(name: str, help_text: str, ops=None, op_help: str = "Operation",
            lattice: bool = False):
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        if ops:
            sub.add_argument("op", choices=ops, help=op_help)
        _add_value_options(sub)
        if lattice:
            _add_lattice_options(sub)
        _add_run_options(sub)
        return sub

    add("fn", "Evaluate and combine PL functions", FN_OPS)
    add("region", "Region operations and predicates", REGION_COMMAND_OPS)
    add("ideal", "Ideal membership, supports, complements and bands", IDEAL_OPS)
    add("urysohn", "Constructive Urysohn lemmas", URYSOHN_OPS)
    add("telescope", "Disjoint telescoping decomposition along an increasing sequence")
    add("check", "Theorem checkers", CHECKS, op_help="Checker", lattice=True)
    add("lattice", "Finite lattice operations", LATTICE_OPS, lattice=True)
    recheck = subparsers.add_parser("recheck", help="Re-verify a saved report",
                                    description="Re-verify a saved report")
    recheck.add_argument("report", help="Report JSON file")
    _add_run_options(recheck)
    return parser


def parse_command(args: argparse.Namespace) -> Command:
    inputs = {key: getattr(args, key) for key in INPUT_KEYS if getattr(args, key, None)}
    return Command(name=args.command, op=getattr(args, "op", None), inputs=inputs,
                   out=args.out)


def parse_config(args: argparse.Namespace) -> LabConfig:
    return LabConfig(
        seed=args.seed,
        cutoff=args.cutoff,
        grid=args.grid,
        samples=args.samples,
        workers=args.workers,
        recheck=args.recheck,
        timings=args.timings,
        verbose=args.verbose,
        bump_prefix=args.prefix,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    if args.workers < 1 or args.cutoff < 1 or args.samples < 0:
        print("Error: --workers and --cutoff must be positive, --samples non-negative",
              file=sys.stderr)
        return 2

    try:
        laboratory = Laboratory(parse_config(args))
        report = laboratory.run(parse_command(args))
        return 0 if report["passed"] else 1
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        return 2

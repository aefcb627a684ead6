"""This module contains the :code:`seasirs` command line entry point.

Exit codes: 0 on success, 1 for usage and configuration errors, 2 if any
verification verdict is Violated, 3 for numeric failures.
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from seasirs.analysis.sweep import SWEEP_AXES
from seasirs.analysis.verify import CHECKS
from seasirs.api.client import Client
from seasirs.config import ScenarioConfig, load_config
from seasirs.exceptions import NumericalError, ValidationError

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATED = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def _grid(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            "grid must be comma-separated numbers: {!r}".format(text)
        )


def _ids(text: str) -> List[str]:
    ids = [v.strip() for v in text.split(",") if v.strip()]
    unknown = [v for v in ids if v not in CHECKS]
    if unknown:
        raise argparse.ArgumentTypeError(
            "unknown check(s): {}".format(", ".join(unknown))
        )
    return ids


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="seasirs",
        description="Simulate and analyse a seasonal SIRS model.",
    )
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    common = _Parser(add_help=False)
    common.add_argument(
        "--config", required=True, metavar="PATH", help="scenario JSON file"
    )
    common.add_argument("--format", choices=("csv", "text"), help="output format")
    common.add_argument("--output", metavar="PATH", help="output file")
    common.add_argument("--seed", type=int, help="sampling seed")

    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    r0 = sub.add_parser("r0", parents=[common], help="basic reproduction number")
    r0.add_argument("--operator-oracle", action="store_true")
    r0.add_argument("--grid-n", type=int, default=2048)

    simulate = sub.add_parser(
        "simulate", parents=[common], help="integrate a trajectory"
    )
    simulate.add_argument("--t-end", type=float, required=True)
    simulate.add_argument("--stride", type=float)

    sub.add_parser(
        "equilibria", parents=[common], help="equilibria and their stability"
    )

    verify = sub.add_parser("verify", parents=[common], help="run verification checks")
    verify.add_argument(
        "checks",
        nargs="?",
        type=_ids,
        default=None,
        help="comma-separated ids: " + ", ".join(CHECKS),
    )
    verify.add_argument("--samples", type=int)

    sweep = sub.add_parser("sweep", parents=[common], help="threshold sweep")
    sweep.add_argument("--axis", choices=SWEEP_AXES, required=True)
    sweep.add_argument("--grid", type=_grid, default=[])
    return parser


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w") as handle:
        handle.write(text)


def cmd_r0(client: Client, args: argparse.Namespace) -> int:
    report = client.r0(operator_oracle=args.operator_oracle, grid_n=args.grid_n)
    _emit(client, report, args)
    return EXIT_OK


def cmd_simulate(client: Client, args: argparse.Namespace) -> int:
    trajectory = client.simulate(args.t_end, stride=args.stride)
    _emit(client, trajectory, args, default_format="csv")
    return EXIT_OK


def cmd_equilibria(client: Client, args: argparse.Namespace) -> int:
    _emit(client, client.equilibria(), args)
    return EXIT_OK


def cmd_verify(client: Client, args: argparse.Namespace) -> int:
    reports = client.verify(args.checks, sample_count=args.samples, seed=args.seed)
    _emit(client, reports, args)
    return EXIT_VIOLATED if any(r.violated for r in reports) else EXIT_OK


def cmd_sweep(client: Client, args: argparse.Namespace) -> int:
    _emit(client, client.sweep(args.axis, args.grid), args, default_format="csv")
    return EXIT_OK


COMMANDS = {
    "r0": cmd_r0,
    "simulate": cmd_simulate,
    "equilibria": cmd_equilibria,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def _emit(
    client: Client, report, args: argparse.Namespace, default_format: str = "text"
) -> None:
    config: ScenarioConfig = client.config
    fmt = args.format or config.output.format or default_format
    text = client.handler.render(report, fmt, N=config.params.N)
    _write(text, args.output or config.output.path)


def main(argv: Sequence[str] = None) -> int:
    """Run the command line interface.

    :param argv: The arguments without the program name
    :return: The exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
    except UsageError as exc:
        sys.stderr.write("seasirs: error: {}\n".format(exc))
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        client = Client(load_config(args.config), seed=args.seed)
        return COMMANDS[args.command](client, args)
    except (ValidationError, OSError) as exc:
        sys.stderr.write("seasirs: error: {}\n".format(exc))
        return EXIT_USAGE
    except NumericalError as exc:
        sys.stderr.write("seasirs: numerical failure: {}\n".format(exc))
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

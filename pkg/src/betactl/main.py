"""Top-level argparse router for betactl."""

import argparse
import logging
import sys

from betactl import __version__
from betactl.commands.betatype import cmd_betatype
from betactl.commands.betatype import register as register_betatype
from betactl.commands.certify import cmd_certify
from betactl.commands.certify import register as register_certify
from betactl.commands.converge import cmd_converge
from betactl.commands.converge import register as register_converge
from betactl.commands.evaluate import cmd_eval
from betactl.commands.evaluate import register as register_eval
from betactl.commands.ray import cmd_ray
from betactl.commands.ray import register as register_ray
from betactl.commands.scan import cmd_scan
from betactl.commands.scan import register as register_scan
from betactl.config import RunConfig
from betactl.errors import EXIT_OK, BetactlError, exit_code_for
from betactl.util.formatting import die

_GROUPED_HELP = """\
Beta and Gamma from their functional equations.

Commands by category:

  Oracles:      eval
  Solvers:      ray, converge
  Checks:       certify, scan
  Beta-type:    betatype

Run `betactl <command> --help` for details on any command.
"""

_HANDLERS = {
    "eval": cmd_eval,
    "ray": cmd_ray,
    "certify": cmd_certify,
    "betatype": cmd_betatype,
    "scan": cmd_scan,
    "converge": cmd_converge,
}

_LOG_LEVELS = {0: logging.WARNING, 1: logging.INFO}


def run(cfg: RunConfig) -> int:
    """Dispatch one validated invocation and return its exit status."""
    args = argparse.Namespace(**cfg.parameters, output=cfg.output_path)
    try:
        _HANDLERS[cfg.command](args)
    except KeyboardInterrupt:
        print("\nCancelled.", file=sys.stderr)
        return 130
    except BetactlError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betactl",
        description=_GROUPED_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"betactl {__version__}",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More log output (-vv for debug)")
    subparsers = parser.add_subparsers(dest="command")

    register_eval(subparsers)
    register_ray(subparsers)
    register_converge(subparsers)
    register_certify(subparsers)
    register_scan(subparsers)
    register_betatype(subparsers)
    return parser


def main(argv: list[str] | None = None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=_LOG_LEVELS.get(args.verbose, logging.DEBUG),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if args.command is None:
        parser.print_help()
        sys.exit(0)

    parameters = {k: v for k, v in vars(args).items() if k not in ("command", "func", "verbose", "output")}
    try:
        cfg = RunConfig(args.command, parameters, getattr(args, "output", None))
    except BetactlError as exc:
        die(str(exc), exit_code_for(exc))
    sys.exit(run(cfg))

"""
Command-line router.

Builds the argparse tree (one sub-command per module in app.cli.commands),
validates the invocation into a RunConfig and dispatches it. Every failure is
reported as one JSON object on standard error and mapped to an exit code:
1 usage, 2 data/validation, 3 runtime.
"""

import argparse
import logging
from pathlib import Path
from typing import Callable, Dict, List, NoReturn, Optional, Sequence

from app.cli.commands import evaluate, extract, render, train, traverse
from app.cli.dependencies import RunConfig, build_run_config
from app.cli.error_handler import handle_exception
from app.core.logging import setup_logging, track_command
from app.utils.exceptions import UsageError

logger = logging.getLogger(__name__)

COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "train": train.run,
    "extract": extract.run,
    "evaluate": evaluate.run,
    "traverse": traverse.run,
    "render": render.run,
}


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that raises UsageError instead of exiting with status 2."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="JSON file with setting overrides")
    common.add_argument("--schema", default=None, help="Builtin schema name or schema JSON path")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")

    parser = ArgumentParser(prog="spear", description="Qualitative causal knowledge-graph extraction")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    parents: List[argparse.ArgumentParser] = [common]
    for module in (train, extract, evaluate, traverse, render):
        module.register(subparsers, parents)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Process exit code
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return handle_exception(exc)
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)

    setup_logging(args.log_level or "INFO")
    run_id = None
    try:
        with track_command(args.command) as log_data:
            run_id = log_data["run_id"]
            config = build_run_config(args)
            setup_logging(config.settings.LOG_LEVEL)
            exit_code = COMMANDS[config.command](config)
            log_data["exit_code"] = exit_code
        return exit_code
    except Exception as exc:
        return handle_exception(exc, run_id)

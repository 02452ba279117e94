"""
Command-line application.

Builds the argument parser, configures logging once and maps errors to
exit codes: 0 success, 2 bad input, 3 a construction that fails its own
validation.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from src.config import Config, get_config
from src.persistence import ScenarioFileError
from src.services.experiments import ExperimentError
from src.services.scenarios import ScenarioError
from src.worker import PoolInterruptedError
from .commands import register_commands

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_VALIDATION_FAILED = 3
EXIT_INTERRUPTED = 130


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarm",
        description="Simulate and analyse bimodal aggregation controllers for disc robots.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    register_commands(subparsers)
    return parser


def configure_logging(config: Config) -> None:
    """Configure root logging to stderr; stdout carries command output."""
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL, logging.INFO),
        format=config.LOG_FORMAT,
        stream=sys.stderr,
    )


def handle_error(e: Exception) -> int:
    """Map an exception escaping a command to an exit code."""
    if isinstance(e, ScenarioError):
        logger.error(f"{e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION_FAILED
    if isinstance(e, (ScenarioFileError, ExperimentError, ValueError)):
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if isinstance(e, PoolInterruptedError):
        print(f"interrupted: {e}", file=sys.stderr)
        return EXIT_INTERRUPTED
    logger.exception(f"Unhandled exception: {e}")
    return EXIT_FAILURE


def main(argv: Optional[Sequence[str]] = None, config: Optional[Config] = None) -> int:
    """Entry point for the command-line interface."""
    config = config or get_config()
    configure_logging(config)
    parser = create_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, config)
    except Exception as e:
        return handle_error(e)

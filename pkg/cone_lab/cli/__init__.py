"""Command-line interface: argument parsing, run configuration and command handlers."""

import logging
import sys

from ..errors import ConeLabError
from ..utils.tolerances import tolerance_overrides
from .commands import EXIT_ERROR
from .parser import build_parser
from .run_config import RunConfig, build_run_config

logger = logging.getLogger(__name__)


def configure_logging(verbose=False, quiet=False):
    """Send log records to stderr; reports own stdout."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s', stream=sys.stderr,
                        force=True)


def main(argv=None):
    """
    Run one command.

    Args:
        argv (list): Arguments without the program name, default sys.argv[1:]

    Returns:
        int: 0 on success or PASS, 2 on a failed contract, 1 on error
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(getattr(args, "verbose", False), getattr(args, "quiet", False))
    try:
        config = build_run_config(args)
        with tolerance_overrides(**config.tolerances):
            return args.handler(args, config)
    except (ConeLabError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_ERROR


__all__ = ['main', 'build_parser', 'RunConfig', 'build_run_config', 'configure_logging']

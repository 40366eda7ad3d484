"""Logging setup: one RichHandler on stderr for the whole ``src`` package."""
import logging

from rich.console import Console
from rich.logging import RichHandler

PACKAGE_LOGGER = "src"


def setup_logging(verbose: bool = False) -> logging.Logger:
    """WARNING by default, DEBUG with --verbose. Safe to call more than once."""
    logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(logger.handlers):
        if getattr(handler, "_hilbloc", False):
            logger.removeHandler(handler)
    handler = RichHandler(
        console=Console(stderr=True),
        show_time=False,
        show_path=False,
        markup=False,
        rich_tracebacks=verbose,
    )
    handler._hilbloc = True  # type: ignore[attr-defined]
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False
    return logger

"""Shared console and logging setup."""

import logging

from rich.console import Console
from rich.logging import RichHandler

console = Console(stderr=True)

# Global flag to control progress display
_show_progress = True


def set_show_progress(show: bool) -> None:
    """Enable or disable progress bars."""
    global _show_progress
    _show_progress = show


def get_show_progress() -> bool:
    """Get current show_progress setting."""
    return _show_progress


def log_level(quiet: bool = False, verbose: int = 0) -> int:
    """Map --quiet / --verbose to a logging level."""
    if quiet:
        return logging.ERROR
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    return logging.WARNING


def setup_logging(level: int = logging.WARNING) -> None:
    """Route cprsim logging through rich on stderr."""
    logger = logging.getLogger("cprsim")
    logger.handlers.clear()
    logger.addHandler(RichHandler(console=console, show_path=False))
    logger.setLevel(level)

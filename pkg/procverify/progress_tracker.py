"""
Progress tracking for explicit-state searches.

`reach` and `enumerate_traces` report each breadth-first layer or depth
through a ProgressTracker so the CLI (or a test) can follow long searches.
"""

import logging
from enum import Enum
from typing import Callable, Optional

logger = logging.getLogger(__name__)


class SearchStage(Enum):
    """Stages of a state-space search."""
    STARTING = "starting"
    EXPANDING = "expanding"
    FOUND = "found"
    EXHAUSTED = "exhausted"
    ERROR = "error"


class ProgressTracker:
    """
    Tracks and reports progress of a search.

    Examples:
        >>> tracker = ProgressTracker(callback=my_callback)
        >>> tracker.report(SearchStage.EXPANDING, "412 states in frontier", 7)
        >>> with tracker.stage(SearchStage.STARTING, "Searching for done(x)"):
        ...     pass
    """

    def __init__(self, callback: Optional[Callable[[str, str, int], None]] = None):
        """
        Initialize progress tracker.

        Args:
            callback: Optional function called on progress updates.
                     Should accept (stage: str, message: str, depth: int)
        """
        self.callback = callback
        self.current_stage = SearchStage.STARTING
        self.current_depth = 0

    def report(self, stage: SearchStage, message: str, depth: int):
        """
        Report progress update.

        Args:
            stage: Current search stage
            message: Human-readable progress message
            depth: Search depth (number of steps explored so far)
        """
        self.current_stage = stage
        self.current_depth = depth

        logger.info(f"[depth {depth}] {stage.value}: {message}")

        if self.callback:
            try:
                self.callback(stage.value, message, depth)
            except Exception as e:
                logger.error(f"Progress callback error: {e}")

    def stage(self, stage: SearchStage, start_message: Optional[str] = None) -> "StageContext":
        """
        Context manager for tracking a stage; reports ERROR if the body raises.

        Examples:
            >>> with tracker.stage(SearchStage.STARTING, "Searching"):
            ...     run_search()
        """
        return StageContext(self, stage, start_message)

    def found(self, message: str, depth: int):
        self.report(SearchStage.FOUND, message, depth)

    def exhausted(self, message: str, depth: int):
        self.report(SearchStage.EXHAUSTED, message, depth)

    def error(self, message: str):
        """Mark the search as failed."""
        self.report(SearchStage.ERROR, message, self.current_depth)


class StageContext:
    """Context manager for tracking a search stage."""

    def __init__(self, tracker: ProgressTracker, stage: SearchStage, start_message: Optional[str] = None):
        self.tracker = tracker
        self.stage = stage
        self.start_message = start_message

    def __enter__(self):
        if self.start_message:
            self.tracker.report(self.stage, self.start_message, self.tracker.current_depth)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is not None:
            self.tracker.error(f"{self.stage.value} failed: {exc_val}")
        return False


def create_echo_callback(echo: Callable[[str], None]):
    """
    Create a progress callback that prints one line per update.

    Args:
        echo: Line writer, e.g. `functools.partial(click.echo, err=True)`

    Returns:
        Callback function for use with ProgressTracker
    """
    def callback(stage: str, message: str, depth: int):
        echo(f"[depth {depth}] {stage}: {message}")
    return callback

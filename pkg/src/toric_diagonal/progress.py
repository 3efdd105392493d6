"""Progress reporting utilities.

This module provides a thin wrapper for progress feedback, used by
the CLI and the suite runner.  A ``tqdm`` bar is drawn only when
enabled; a plain callback receives every update either way.
"""

import threading
from typing import Callable, Optional

from tqdm import tqdm


class ProgressReporter:
    """Progress reporter with an optional ``tqdm`` bar and callback.

    Safe to call from worker threads.

    Attributes:
        message: Current status message.
        progress: Current progress as a float between 0.0 and 1.0.
    """

    def __init__(
        self,
        callback: Optional[Callable[[str, float], None]] = None,
        enabled: bool = False,
    ) -> None:
        """Initialize the progress reporter.

        Args:
            callback: Optional callable receiving ``(message, progress)``
                on each update.
            enabled: Draw a ``tqdm`` bar on stderr.
        """
        self.message: str = ""
        self.progress: float = 0.0
        self._callback = callback
        self._enabled = enabled
        self._bar: Optional[tqdm] = None
        self._total = 0
        self._done = 0
        self._lock = threading.Lock()

    def start(self, total: int, desc: str) -> None:
        """Begin a phase of *total* steps."""
        with self._lock:
            self.close()
            self._total, self._done = total, 0
            self._bar = tqdm(total=total, desc=desc, disable=not self._enabled,
                             dynamic_ncols=True, leave=False)

    def advance(self, message: str) -> None:
        """Mark one step of the current phase as done."""
        with self._lock:
            self._done += 1
            if self._bar is not None:
                self._bar.set_postfix_str(message, refresh=False)
                self._bar.update(1)
            fraction = self._done / self._total if self._total else 1.0
        self.update(message, fraction)

    def update(self, message: str, progress: float = 0.0) -> None:
        """Update progress status.

        Args:
            message: Status message to display.
            progress: Progress value between 0.0 and 1.0.
        """
        self.message = message
        self.progress = progress
        if self._callback:
            self._callback(message, progress)

    def close(self) -> None:
        if self._bar is not None:
            self._bar.close()
            self._bar = None

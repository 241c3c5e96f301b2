"""
Exception hierarchy for the gaze-guided toolkit.

Every error raised deliberately by the toolkit derives from GazeGuideError.
The CLI maps each family onto a stable exit code:

    UsageError      -> 1
    DataError       -> 2
    NumericalError  -> 3
"""

from typing import Any, Dict, Optional


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class GazeGuideError(Exception):
    """Base class for all toolkit errors."""
    exit_code = EXIT_DATA


class UsageError(GazeGuideError):
    """Bad command line: unknown subcommand, unknown flag, bad flag value."""
    exit_code = EXIT_USAGE


class DataError(GazeGuideError):
    """Input data is missing, malformed or inconsistent."""
    exit_code = EXIT_DATA


class GazeParseError(DataError):
    """A gaze CSV could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, source: str = "gaze.csv"):
        self.line = line
        self.source = source
        if line is not None:
            message = f"{source}:{line}: {message}"
        super().__init__(message)


class ClipLoadError(DataError):
    """A clip directory has missing frames, bad PGM headers or mixed shapes."""


class CheckpointError(DataError):
    """A GZGD checkpoint is truncated, has a bad magic or an unknown version."""


class DatasetError(DataError):
    """Dataset root layout problems (labels.csv, empty roots, single-class splits)."""


class NumericalError(GazeGuideError):
    """Training produced a non-finite loss."""
    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = diagnostics or {}
        if self.diagnostics:
            details = ", ".join(f"{k}={v}" for k, v in self.diagnostics.items())
            message = f"{message} ({details})"
        super().__init__(message)

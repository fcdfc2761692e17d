"""
Exception hierarchy and process exit codes for scalefuture.
"""
from enum import IntEnum
from typing import Optional


class ExitCode(IntEnum):
    """Process exit codes used by the command-line surface"""
    OK = 0
    CLAIM_FAILURE = 1
    USAGE = 2
    PARSE = 3
    SNAPSHOT = 4
    NUMERIC = 5


class ScaleFutureError(Exception):
    """Base class for all domain errors"""
    exit_code: ExitCode = ExitCode.NUMERIC


class GridError(ScaleFutureError, ValueError):
    """Invalid temporal grid parameters or node index"""
    exit_code = ExitCode.USAGE


class StimulusError(ScaleFutureError, KeyError):
    """Stimulus identifier not present in the vocabulary"""
    exit_code = ExitCode.USAGE

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown stimulus: {name!r}")

    def __str__(self) -> str:
        return self.args[0]


class ShapeMismatchError(ScaleFutureError, ValueError):
    """Array shape inconsistent with the grid or vocabulary"""


class InputError(ScaleFutureError, ValueError):
    """Non-finite input to the integrator bank"""


class WindowError(ScaleFutureError, ValueError):
    """Invalid temporal window"""
    exit_code = ExitCode.USAGE


class ScenarioError(ScaleFutureError, ValueError):
    """Scenario document failed to parse or validate"""
    exit_code = ExitCode.PARSE

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")


class GridInteriorError(ScaleFutureError, ValueError):
    """A delay falls outside the grid interior in strict mode"""
    exit_code = ExitCode.USAGE


class SnapshotError(ScaleFutureError, ValueError):
    """Tensor snapshot is corrupt, truncated or of an unsupported version"""
    exit_code = ExitCode.SNAPSHOT


class ConfigMismatchError(SnapshotError):
    """Snapshot grid or vocabulary disagrees with the running configuration"""


class ClaimFailure(ScaleFutureError):
    """A figure-level claim did not hold"""
    exit_code = ExitCode.CLAIM_FAILURE


class NormalizationError(ScaleFutureError, ValueError):
    """Invalid normalization floor or axis"""
    exit_code = ExitCode.USAGE


class UsageError(ScaleFutureError, ValueError):
    """Unknown figure id, missing argument or other command-line misuse"""
    exit_code = ExitCode.USAGE

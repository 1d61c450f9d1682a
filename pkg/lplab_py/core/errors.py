"""
@ai-metadata {
    "domain": "error-handling",
    "description": "Exception taxonomy shared by the engine and the CLI; every class carries the process exit code the CLI reports"
}
"""

from typing import Optional


class LabError(Exception):
    """Base class for all domain errors raised by lplab."""
    exit_code: int = 1


class ConfigError(LabError, ValueError):
    """Invalid configuration, input file or command-line value."""
    exit_code = 2


class GroupSpecSyntaxError(ConfigError):
    """A group-spec, element or vector string could not be parsed."""

    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)


class GroupMismatchError(LabError, ValueError):
    """An element or vector does not belong to the group it is used with."""
    exit_code = 2


class ScalarModeError(LabError, TypeError):
    """Exact and Float scalars were mixed in one expression."""
    exit_code = 2


class FrontierVertexError(LabError, ValueError):
    """A quantity needing every neighbour was asked for at a frontier vertex."""
    exit_code = 2


class IllPosedProblemError(LabError, ValueError):
    """A Dirichlet problem has an interior component without boundary contact."""
    exit_code = 2


class NotInDiffSpanError(LabError, ValueError):
    """A vector is not exactly a finite combination of translation differences."""
    exit_code = 2


class ResourceLimitError(LabError, RuntimeError):
    """A configured size cap (vertices, exact terms, integer range) was exceeded."""
    exit_code = 3


class NonConvergenceError(LabError, RuntimeError):
    """An iterative method stopped before reaching its tolerance."""
    exit_code = 4


class InvariantViolationError(LabError, RuntimeError):
    """An identity that must hold exactly (or a verified property) failed."""
    exit_code = 5

"""
Exception hierarchy for earring-kit.

Every failure raised by the library derives from EarringError so the CLI and
the Flask API can map it to an exit code / HTTP status in one place.
"""

from typing import Any, Optional


class EarringError(Exception):
    """Base class for all library errors"""

    exit_code = 2
    http_status = 422


class InputError(EarringError):
    """The caller handed us something outside an operation's domain"""

    http_status = 400


class WordSyntaxError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.reason = message
        self.position = position


class DepthExceededError(InputError):
    def __init__(self, requested: int, probe_depth: int):
        super().__init__(f"level {requested} exceeds probe depth {probe_depth}")
        self.requested = requested
        self.probe_depth = probe_depth


class NotFiniteStageError(InputError):
    pass


class EmptySetError(InputError):
    pass


class NotLessError(InputError):
    pass


class PreconditionError(InputError):
    pass


class DisjointnessError(InputError):
    pass


class StabilizationError(EarringError):
    def __init__(self, level: int, depth: int):
        super().__init__(f"level-{level} words of sigma did not stabilize within depth {depth}")
        self.level = level
        self.depth = depth


class UndecidedPairError(EarringError):
    def __init__(self, left: Any, right: Any, depth: int):
        super().__init__(f"{left} and {right} agree up to depth {depth}")
        self.left = left
        self.right = right
        self.depth = depth


class BudgetExceededError(EarringError):
    pass


class InvariantViolation(EarringError):
    """Internal invariant broken; existence results guaranteed an answer"""

    exit_code = 3
    http_status = 500


class OrderTrapViolation(InvariantViolation):
    """A covered element is not below the next minimum, so no clearing level exists"""

    def __init__(self, message: str, witness: Optional[Any] = None, target: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness
        self.target = target

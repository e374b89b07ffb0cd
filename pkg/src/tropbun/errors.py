"""Exception hierarchy; the CLI maps each class to an exit code."""


class TropbunError(Exception):
    exit_code = 1


class InvalidInput(TropbunError, ValueError):
    """Malformed data or a violated precondition."""

    exit_code = 2


class SizeLimitExceeded(TropbunError):
    """A unit subdivision would exceed the configured vertex budget."""

    exit_code = 3


class InvariantViolation(TropbunError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 4

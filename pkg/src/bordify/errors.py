"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class BordifyError(Exception):
    exit_code = 1
    code = "error"


class MalformedInput(BordifyError, ValueError):
    exit_code = 2
    code = "malformed_input"


class ResourceLimit(BordifyError):
    """A computation would exceed its element budget or horizon."""

    exit_code = 3
    code = "resource_limit"


class Undecided(BordifyError):
    """A sequence failed to stabilise within the horizon."""

    exit_code = 3
    code = "undecided"

    def __init__(self, message, horizon=None, items=()):
        super().__init__(message)
        self.horizon = horizon
        self.items = list(items)


class WindowEscape(BordifyError):
    exit_code = 4
    code = "window_escape"


class ConsistencyError(BordifyError, AssertionError):
    """An invariant that is a theorem failed; indicates a bug."""

    exit_code = 5
    code = "internal_consistency"

"""Exception hierarchy shared by all modules."""


class StablenetError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(StablenetError, ValueError):
    """A value violates the axioms of the type it claims to be."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(InvalidInputError):
    """Malformed text input; carries a 1-based line and column."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class BudgetExceeded(StablenetError):
    """An enumeration or search hit its configured cap."""

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


class PathCapExceeded(BudgetExceeded):
    """The number of root paths of a network exceeds the unfold cap."""


class NotStableError(StablenetError):
    """A theorem-based decider was called on a network that is not stable."""

"""Exception types raised across the package."""


class QalsError(Exception):
    """Base class for all package errors."""


class ProblemFormatError(QalsError, ValueError):
    """Malformed or inconsistent problem input."""


class FactorizationError(QalsError, ArithmeticError):
    """A direct solver hit a non-positive pivot or a zero Householder column."""


class GuardError(QalsError, ValueError):
    """An exhaustive routine was asked to enumerate more states than allowed."""

"""Exception types shared across the package.

Every error that can escape the public API lives here so callers can catch
one family (`IsomeanError`) or pick specific failures apart.
"""

from __future__ import annotations


class IsomeanError(Exception):
    """Base class for all package-specific errors."""


class ExprSyntaxError(IsomeanError):
    """Raised when an expression string cannot be parsed.

    Attributes
    ----------
    offset : int
        Byte offset into the source string where the problem was detected.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class DomainError(IsomeanError):
    """Evaluation left the mathematical domain (log of a non-positive
    number, division by zero, overflow to infinity, ...)."""


class InversionError(IsomeanError):
    """A requested inverse value does not exist or could not be bracketed."""


class NonMonotoneError(IsomeanError):
    """A map that must be strictly monotone on its interval is not."""


class NotBondedError(IsomeanError):
    """A frame does not cover the data it is asked to average: either the
    evaluation interval escapes the x-axis map's domain or the value hull
    escapes the y-axis map's domain."""


class WeightError(IsomeanError):
    """Weights are unusable: wrong length, non-positive entries, or the sum
    is not 1 within tolerance."""


class DivergentIntegralError(IsomeanError):
    """An improper integral failed to stabilise under endpoint shrinking."""


class ComparisonContradiction(IsomeanError):
    """A structural verdict disagreed with direct numeric evaluation beyond
    tolerance.  This is a hard failure: it means either the rule table or
    the numeric path is wrong, and neither may be silently trusted."""


class PreconditionError(IsomeanError):
    """Inputs fail a documented precondition (empty tuple, k = 0 scale,
    endpoints outside a required domain, ...)."""

"""
Exception hierarchy for sl2lc.

Every error subclasses the builtin exception it refines, so callers that
already catch ``ValueError`` or ``ArithmeticError`` keep working, and
``Sl2lcError`` catches the whole family.
"""


class Sl2lcError(Exception):
    """Base class for every error raised by sl2lc."""


class DivisionByZero(Sl2lcError, ZeroDivisionError):
    """Division by an exact or inexact zero."""


class IncompatibleContext(Sl2lcError, TypeError):
    """Values from different cyclotomic fields or field contexts were mixed."""


class PrecisionExhausted(Sl2lcError, ArithmeticError):
    """A p-adic result or valuation test cannot be decided at the available precision."""


class NotAUnit(Sl2lcError, ValueError):
    """A multiplicative character was evaluated off the unit group."""


class NotInSubgroup(Sl2lcError, ValueError):
    """A group element is outside the subgroup an operation requires."""


class NotInK(NotInSubgroup):
    """A group element is not integral."""


class MismatchWithClosedForm(Sl2lcError, ArithmeticError):
    """A finite-sum computation disagrees with its closed form."""


class UnstablePrincipalValue(Sl2lcError, ArithmeticError):
    """A truncated integral changed when the truncation depth was raised."""


class BasisResolutionFailure(Sl2lcError, ValueError):
    """A computed function is not in the span of the two-element basis."""


class ConfigurationError(Sl2lcError, ValueError):
    """A run configuration is invalid."""

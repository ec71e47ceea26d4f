"""Exception hierarchy.

Everything raised on purpose derives from :class:`FMCError`.  Errors that
describe a property of the mathematical input (a singular model, a torsion
group that lives outside the searchable tower) derive from
:class:`DomainError`; the CLI maps those to exit code 2.
"""


class FMCError(Exception):
    pass


class DomainError(FMCError):
    pass


class NotPrime(DomainError):
    pass


class DegreeTooLarge(DomainError):
    pass


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class ContextMismatch(FMCError, TypeError):
    pass


class SingularModel(DomainError):
    pass


class PointNotOnCurve(DomainError):
    pass


class NotFoundWithinTower(DomainError):
    pass


class UnsupportedMixedOrder(DomainError):
    pass


class TableMismatch(FMCError):
    """An enumerated automorphism group disagrees with the classification
    table.  This always indicates a bug, never a mathematical finding."""


class OrderTooSmall(DomainError):
    pass


class NoEllipticFibration(DomainError):
    pass


class InconsistentDescriptor(DomainError):
    pass

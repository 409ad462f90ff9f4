"""Exception hierarchy.

Every error raised by the package derives from :class:`RoughSetError`, so
callers (and the CLI) can catch data/validation problems in one place.
"""


class RoughSetError(ValueError):
    """Base class for data and validation errors."""


class SchemaError(RoughSetError):
    pass


class MissingDecisionValue(RoughSetError):
    pass


class UnknownColumn(RoughSetError):
    pass


class MissingColumn(RoughSetError):
    pass


class RowArityMismatch(RoughSetError):
    pass


class ValueOutsideDeclaredDomain(RoughSetError):
    pass


class OutOfRange(RoughSetError, IndexError):
    pass


class EmptyDomain(RoughSetError):
    pass


class UnknownAttribute(RoughSetError):
    pass


class AllMissing(RoughSetError):
    pass


class IncompleteColumn(RoughSetError):
    pass


class UnbinnableValue(RoughSetError):
    pass


class NonNumericField(RoughSetError):
    pass


class NothingToMask(RoughSetError):
    pass


class UsageError(RoughSetError):
    """Bad command line; the message names the offending flag."""

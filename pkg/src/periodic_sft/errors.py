"""Exception types shared across the package."""


class SFTError(Exception):
    """Base class for all package errors."""


class InvalidSymbolError(SFTError, ValueError):
    pass


class IndexRangeError(SFTError, IndexError):
    pass


class DimensionMismatchError(SFTError, ValueError):
    pass


class SingularMatrixError(SFTError, ValueError):
    pass


class InvalidHermiteFormError(SFTError, ValueError):
    pass


class NotIrreducibleError(SFTError, ValueError):
    pass


class CapExceededError(SFTError):
    """A size cap (matrix dimension or enumeration budget) would be exceeded."""


class ParseError(SFTError, ValueError):
    pass

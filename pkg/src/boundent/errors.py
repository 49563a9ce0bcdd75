"""Exception hierarchy shared by all modules."""


class BoundentError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(BoundentError, ValueError):
    pass


class NotDensityMatrix(BoundentError, ValueError):
    pass


class BadIndex(BoundentError, IndexError):
    pass


class DimMismatch(BoundentError, ValueError):
    pass


class BadGate(BoundentError, ValueError):
    pass


class NonUnitaryGate(BadGate):
    pass


class BadParams(BoundentError, ValueError):
    pass


class SchmidtFailure(BoundentError, ArithmeticError):
    pass


class IllConditioned(BoundentError, ArithmeticError):
    pass


class TooLarge(BoundentError, ValueError):
    pass


class NegativeProbability(BoundentError, ArithmeticError):
    pass


class MissingSetting(BoundentError, KeyError):
    pass


class ConsistencyError(BoundentError, AssertionError):
    """An internal cross-check between two independent routes disagreed."""

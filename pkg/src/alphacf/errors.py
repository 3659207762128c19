"""Exception types shared across the package."""


class AlphaCFError(Exception):
    """Base class for all package-specific errors."""


class PoleError(AlphaCFError, ZeroDivisionError):
    """A Moebius action hit the pole c*x + d = 0."""


class DomainError(AlphaCFError, ValueError):
    """An argument lies outside the map's domain (x not in [alpha-1, alpha], bad rectangle, ...)."""


class AlphabetError(AlphaCFError, ValueError):
    """A letter or word leaves the allowed alphabet."""


class NotInF(AlphaCFError, ValueError):
    """The word does not label a synchronization interval."""


class MixedFieldError(AlphaCFError, TypeError):
    """Arithmetic between surds of different quadratic fields was attempted."""


class ZeroDigit(AlphaCFError, ValueError):
    """The natural-extension step was asked at x = 0 where the digit is infinite."""


class RuleError(AlphaCFError, ValueError):
    """The rewriting rules hit a pattern they are proven never to produce, e.g. (+1:1)(-1:d)."""


class CycleLimit(AlphaCFError, RuntimeError):
    """Cycle detection in an expansion exceeded its iteration cap."""


class IterationLimit(AlphaCFError, RuntimeError):
    """An iterative computation exceeded its configured cap."""


class BudgetExceeded(AlphaCFError, RuntimeError):
    """An enumeration ran out of budget before reaching the tolerance.

    The best bracket found so far is attached, so callers can degrade gracefully.
    """

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class DegenerateOrbit(AlphaCFError, RuntimeError):
    """Too many Monte-Carlo orbit points collapsed onto 0 and had to be resampled."""


class TruncationWarning(UserWarning):
    """Chains were truncated (alpha outside every synchronization interval); result is not certified."""

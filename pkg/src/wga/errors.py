"""Exception hierarchy shared by every module of :mod:`wga`."""

from __future__ import annotations


class WGAError(Exception):
    """Base class for all library errors."""


class SpecMismatchError(WGAError, ValueError):
    """Operands live on different groups."""


class PreconditionError(WGAError, ValueError):
    """An operation was called outside its documented domain."""


class DomainError(WGAError, ValueError):
    """A weight was evaluated where it is not defined (strict table window)."""


class ResourceLimitError(WGAError):
    """A configured size cap would be exceeded.

    ``details`` carries whatever partial result the raising operation can
    still vouch for (largest achievable exponent, best estimate so far, ...).
    """

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def __getattr__(self, name):
        try:
            return self.__dict__["details"][name]
        except KeyError:
            raise AttributeError(name) from None


class WeightNormalizationError(WGAError, ValueError):
    """A weight dips below 1 where the theory assumes ``w >= 1``."""

    def __init__(self, message: str, element=None, value: float | None = None):
        super().__init__(message)
        self.element = element
        self.value = value


class SubmultiplicativityError(WGAError, ValueError):
    """Classification refused: the weight violates ``w(x+y) <= w(x) w(y)``."""

    def __init__(self, counterexample):
        super().__init__(
            f"weight is not submultiplicative: w(x+y)/(w(x)w(y)) = "
            f"{counterexample.ratio:.6g} at x={counterexample.x}, y={counterexample.y}"
        )
        self.counterexample = counterexample


class UnsupportedError(WGAError):
    """The requested computation is deliberately not implemented for this input."""


class SamplingError(WGAError, ValueError):
    """A sampling grid is too coarse for the requested guarantee."""

    def __init__(self, message: str, required: int):
        super().__init__(message)
        self.required = required


class AliasingError(WGAError, ValueError):
    """Inverse transform found energy outside the declared coefficient window."""

    def __init__(self, message: str, energy: float):
        super().__init__(message)
        self.energy = energy


class ConditioningError(WGAError, ValueError):
    """Interpolation system too ill-conditioned to honour the accuracy contract."""

    def __init__(self, message: str, pair, condition: float):
        super().__init__(message)
        self.pair = pair
        self.condition = condition


class ParseError(WGAError, ValueError):
    """Malformed textual input; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(f"{message} (at position {position} in {text!r})")
        self.text = text
        self.position = position

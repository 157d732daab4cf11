"""Exception hierarchy.

Every error raised by the library derives from :class:`ExchTestError`, which is
itself a :class:`ValueError` so callers validating user input can catch either.
"""


class ExchTestError(ValueError):
    pass


class SymbolError(ExchTestError):
    """A non-binary character was found while parsing a sequence."""

    def __init__(self, position: int, char: str):
        self.position = position
        self.char = char
        super().__init__(f"invalid symbol {char!r} at index {position}")


class LengthError(ExchTestError):
    """Sequence shorter than the minimum horizon of 2."""


class DegenerateTypeError(ExchTestError):
    """The sequence is constant, so the IID maximum-likelihood factor degenerates."""


class ParamError(ExchTestError):
    pass


class ReducibleChainError(ExchTestError):
    """Both switching probabilities are zero; no unique stationary distribution."""


class TauRangeError(ExchTestError):
    pass


class HorizonError(ExchTestError):
    """Horizon outside the range an operation supports (too small or too large)."""


class AlphaRangeError(ExchTestError):
    pass


class ConfigError(ExchTestError):
    pass


class UndefinedEPowerError(ExchTestError):
    """An e-variable vanishes on a sequence of positive probability."""

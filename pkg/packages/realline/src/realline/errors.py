"""Exceptions raised by real-line field operations."""


class NonDecayingInput(ValueError):
    """A transform was asked to act on a field tagged bounded_nondecaying."""


class GridMismatch(ValueError):
    """Fields combined in one call live on different grids."""


class NonIntegrableTail(ValueError):
    """An integral was requested for a field whose tail is not integrable."""


class NonFiniteData(ArithmeticError):
    """A field sample is NaN or infinite."""


class InsufficientPadding(ValueError):
    """A convolution was requested on a grid with pad_factor < 2."""

from vlaforge.exceptions import ForgeError

__all__ = (
    "CorruptCheckpoint",
    "DegenerateDimension",
    "EmptyDataset",
    "NonFiniteActivation",
    "ShapeMismatch",
)


class ShapeMismatch(ForgeError):
    pass


class NonFiniteActivation(ForgeError):
    pass


class EmptyDataset(ForgeError):
    pass


class CorruptCheckpoint(ForgeError):
    pass


class DegenerateDimension(ForgeError, UserWarning):
    """Issued as a warning: the dimension is kept with unit scale."""

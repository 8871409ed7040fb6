from vlaforge.exceptions import ForgeError

__all__ = ("EmptyMask", "InvalidMask", "OutOfBounds")


class EmptyMask(ForgeError):
    pass


class InvalidMask(ForgeError):
    pass


class OutOfBounds(ForgeError):
    pass

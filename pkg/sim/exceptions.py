from vlaforge.exceptions import ForgeError

__all__ = ("InvalidState", "UnknownKind", "UnknownTask")


class UnknownKind(ForgeError):
    pass


class UnknownTask(ForgeError):
    pass


class InvalidState(ForgeError):
    pass

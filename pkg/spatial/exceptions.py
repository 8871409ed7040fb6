from vlaforge.exceptions import ForgeError

__all__ = ("DegenerateGeometry", "InvalidQuestion", "InvalidScene", "ObjectOutsideRoom", "UnknownId")


class ObjectOutsideRoom(ForgeError):
    pass


class InvalidScene(ForgeError):
    pass


class UnknownId(ForgeError):
    pass


class DegenerateGeometry(ForgeError):
    pass


class InvalidQuestion(ForgeError):
    pass

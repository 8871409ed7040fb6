from vlaforge.exceptions import ForgeError

__all__ = ("InvalidMix", "InvalidRecord", "MalformedMarkup")


class MalformedMarkup(ForgeError):
    pass


class InvalidRecord(ForgeError):
    pass


class InvalidMix(ForgeError):
    pass

__all__ = ("ForgeError",)


class ForgeError(Exception):
    """Base class for every domain error raised by the forge apps."""

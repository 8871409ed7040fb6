from typing import Optional

from vlaforge.exceptions import ForgeError

__all__ = ("SchemaViolation", "UnknownSchema")


class SchemaViolation(ForgeError):
    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class UnknownSchema(ForgeError):
    pass

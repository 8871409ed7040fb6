from vlaforge.exceptions import ForgeError

__all__ = ("InconsistentReports", "MissingThresholdCrossing", "UnknownVariant")


class MissingThresholdCrossing(ForgeError):
    pass


class InconsistentReports(ForgeError):
    pass


class UnknownVariant(ForgeError):
    pass

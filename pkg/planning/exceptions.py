from vlaforge.exceptions import ForgeError

__all__ = ("MalformedTrace", "RejectedFailedTrajectory", "UnknownTask", "UnsupportedAction")


class UnsupportedAction(ForgeError):
    pass


class RejectedFailedTrajectory(ForgeError):
    pass


class UnknownTask(ForgeError):
    pass


class MalformedTrace(ForgeError):
    pass

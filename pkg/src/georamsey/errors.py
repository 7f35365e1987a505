"""Exception hierarchy shared by all modules."""


class GeoRamseyError(Exception):
    """Base class for toolkit errors."""


class DegenerateInput(GeoRamseyError):
    """A point set violates distinctness or general position."""

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class NotSeparated(GeoRamseyError):
    pass


class InconsistentOrder(GeoRamseyError):
    pass


class SizeTooSmall(GeoRamseyError):
    """An input is below the size a construction needs.

    ``stage`` names the step of the pipeline that ran out of room; callers
    below the theoretical bound treat this as a reportable outcome.
    """

    def __init__(self, stage, message=""):
        super().__init__(f"{stage}: {message}" if message else stage)
        self.stage = stage


class StageSizeFailure(SizeTooSmall):
    pass


class InternalContradiction(GeoRamseyError):
    """A case analysis fell through. Always a bug."""


class NotOuterplanar(GeoRamseyError):
    pass


class PW2Violation(GeoRamseyError):
    def __init__(self, invariant, message=""):
        super().__init__(f"{invariant}: {message}" if message else invariant)
        self.invariant = invariant


class NotPW2(GeoRamseyError):
    pass


class BudgetExceeded(GeoRamseyError):
    def __init__(self, message, checkpoint=None):
        super().__init__(message)
        self.checkpoint = checkpoint

"""Contains exceptions raised by the survival estimators and metrics."""
from fedsurv.exceptions.FedSurvError import FedSurvError


class SurvivalError(FedSurvError):
    """Exception that is raised, when a survival estimate is undefined."""


class EmptyCohortError(SurvivalError):
    """Exception that is raised for estimators fed with no subjects."""
    def __init__(self, message="empty cohort"):
        super(EmptyCohortError, self).__init__(message)


class DegenerateSplitError(SurvivalError):
    """Exception that is raised, when one side of a split holds no subjects."""
    def __init__(self, message="degenerate split"):
        super(DegenerateSplitError, self).__init__(message)


class NoComparablePairsError(SurvivalError):
    """Exception that is raised, when a concordance index has no pairs to rank."""
    def __init__(self, message="no comparable pairs"):
        super(NoComparablePairsError, self).__init__(message)

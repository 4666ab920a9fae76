"""Contains exceptions appearing while loading and preparing cohorts."""
from fedsurv.exceptions.FedSurvError import FedSurvError


class DatasetError(FedSurvError):
    """Exception that is raised, when a cohort file or partition is invalid."""
    def __init__(self, message=None, rejected_rows=None):
        super(DatasetError, self).__init__(message)
        self.rejected_rows = rejected_rows or []

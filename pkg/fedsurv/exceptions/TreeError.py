"""Contains exceptions raised while fitting or applying survival trees."""
from fedsurv.exceptions.FedSurvError import FedSurvError


class TreeError(FedSurvError):
    """Exception that is raised, when a tree or forest cannot be fitted or used."""


class IncompatibleRowError(TreeError):
    """
    Exception that is raised, when a row lacks a feature a tree splits on.
    After compatibility filtering this signals a federation bug.
    """
    def __init__(self, origin_site=None, feature=None, message=None):
        if message is None:
            message = "incompatible row: tree from site {0} splits on '{1}'".format(
                origin_site, feature)
        super(IncompatibleRowError, self).__init__(message)
        self.origin_site = origin_site
        self.feature = feature

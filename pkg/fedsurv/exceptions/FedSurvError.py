"""Contains the base exception of all fedsurv errors."""


class FedSurvError(Exception):
    """Base class of every error raised by fedsurv."""
    def __init__(self, message=None):
        super(FedSurvError, self).__init__(message)
        self.message = message

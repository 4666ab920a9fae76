"""Contains exceptions appearing while exchanging messages over the wire."""
from fedsurv.exceptions.FedSurvError import FedSurvError


class ProtocolError(FedSurvError):
    """
    Exception that is raised, when a frame or envelope violates the protocol
    or a round cannot be completed.
    """
    def __init__(self, message=None, retriable=False, fatal=False):
        super(ProtocolError, self).__init__(message)
        self.retriable = retriable
        self.fatal = fatal

"""Contains exceptions raised while pooling and redistributing trees."""
from fedsurv.exceptions.FedSurvError import FedSurvError


class FederationError(FedSurvError):
    """Exception that is raised, when local models cannot be federated."""

"""Contains exceptions raised while declaring, merging or applying schemas."""
from fedsurv.exceptions.FedSurvError import FedSurvError


class SchemaError(FedSurvError):
    """Exception that is raised, when a schema is inconsistent or does not fit a table."""

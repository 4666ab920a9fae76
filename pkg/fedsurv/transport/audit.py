"""Contains the privacy audit of payloads crossing the wire."""
import logging

from fedsurv.exceptions.ProtocolError import ProtocolError
from fedsurv.transport import Envelope

logger = logging.getLogger(__name__)

# Field names that would carry subject-level data.
FORBIDDEN_FIELDS = frozenset(["time", "event", "events", "rows", "data", "values", "X", "y"])

# Maps keyed by column names or client ids; their keys are names, not fields.
NAME_MAP_FIELDS = frozenset(["column_map", "per_client_map"])

# Document kinds each message type may carry at the top of its payload.
ALLOWED_PAYLOADS = {
    Envelope.HELLO: frozenset(),
    Envelope.SCHEMA_UPLOAD: frozenset(["schema"]),
    Envelope.FEDERATED_SCHEMA: frozenset(["schema"]),
    Envelope.MODEL_UPLOAD: frozenset(["model"]),
    Envelope.MODEL_DOWNLOAD: frozenset(["received", "selected"]),
    Envelope.ROUND_COMPLETE: frozenset(["summary"]),
    Envelope.ERROR: frozenset(["message"])
}


class PayloadAudit:
    """
    Records the kind of every payload crossing the wire and rejects
    payloads that could carry covariates or outcomes.
    """

    def __init__(self):
        self.entries = []

    def check(self, envelope, direction):
        """
        Audits one envelope.
        :param envelope: Envelope about to be sent or just received.
        :param direction: "up" (client to coordinator) or "down".
        """
        allowed = ALLOWED_PAYLOADS[envelope.msg_type]
        unexpected = sorted(set(envelope.payload) - allowed)
        if unexpected:
            raise ProtocolError("payload audit: unexpected fields {0} in {1}".format(
                unexpected, envelope.msg_type))
        forbidden = sorted(_find_forbidden(envelope.payload))
        if forbidden:
            raise ProtocolError("payload audit: subject-level fields {0} in {1}".format(
                forbidden, envelope.msg_type))
        self.entries.append((direction, envelope.msg_type, envelope.client_id,
                             tuple(sorted(envelope.payload))))
        logger.debug("audited %s %s for %s", direction, envelope.msg_type, envelope.client_id)


def _find_forbidden(document):
    found = set()
    stack = [document]
    while stack:
        current = stack.pop()
        if isinstance(current, dict):
            for key, value in current.items():
                if key in FORBIDDEN_FIELDS:
                    found.add(key)
                if key not in NAME_MAP_FIELDS:
                    stack.append(value)
        elif isinstance(current, list):
            stack.extend(item for item in current if isinstance(item, (dict, list)))
    return found

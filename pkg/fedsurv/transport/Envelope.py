"""Contains the envelope every frame carries."""
from fedsurv.exceptions.ProtocolError import ProtocolError

PROTOCOL_VERSION = 1

HELLO = "hello"
SCHEMA_UPLOAD = "schema_upload"
FEDERATED_SCHEMA = "federated_schema"
MODEL_UPLOAD = "model_upload"
MODEL_DOWNLOAD = "model_download"
ROUND_COMPLETE = "round_complete"
ERROR = "error"

MESSAGE_TYPES = (HELLO, SCHEMA_UPLOAD, FEDERATED_SCHEMA, MODEL_UPLOAD,
                 MODEL_DOWNLOAD, ROUND_COMPLETE, ERROR)


class Envelope:
    """Versioned, typed message from or to one client."""

    def __init__(self, msg_type, client_id, payload=None, protocol_version=PROTOCOL_VERSION):
        self.protocol_version = protocol_version
        self.msg_type = msg_type
        self.client_id = client_id
        self.payload = {} if payload is None else payload

    def to_document(self):
        return {
            "protocol_version": self.protocol_version,
            "msg_type": self.msg_type,
            "client_id": self.client_id,
            "payload": self.payload
        }

    @classmethod
    def from_document(cls, document):
        """
        Validates and wraps a decoded frame.
        :param document: Decoded JSON document.
        :return: Envelope.
        """
        if not isinstance(document, dict):
            raise ProtocolError("malformed frame")
        version = document.get("protocol_version")
        if version != PROTOCOL_VERSION:
            raise ProtocolError("unsupported protocol version {0!r}".format(version), fatal=True)
        msg_type = document.get("msg_type")
        if msg_type not in MESSAGE_TYPES:
            raise ProtocolError("unknown message type {0!r}".format(msg_type))
        client_id = document.get("client_id")
        if not isinstance(client_id, str):
            raise ProtocolError("envelope without client id")
        payload = document.get("payload", {})
        if not isinstance(payload, dict):
            raise ProtocolError("payload must be an object")
        return cls(msg_type, client_id, payload, version)

    def __eq__(self, other):
        if not isinstance(other, Envelope):
            return NotImplemented
        return self.to_document() == other.to_document()

    def __repr__(self):
        return "Envelope({0}, client_id={1!r})".format(self.msg_type, self.client_id)


def error_envelope(client_id, message):
    return Envelope(ERROR, client_id or "", {"message": message})

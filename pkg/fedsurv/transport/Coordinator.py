"""Contains the coordinator process of a networked federation round."""
import logging
import select
import socket
import threading
import time

from fedsurv.exceptions.FedSurvError import FedSurvError
from fedsurv.exceptions.ProtocolError import ProtocolError
from fedsurv.federation.federator import federation_plan
from fedsurv.federation.LocalModel import LocalModel
from fedsurv.schema.DatasetSchema import DatasetSchema
from fedsurv.schema.FederatedSchema import merge_schemas, DEFAULT_EXTRA_COLUMN_PREFIX
from fedsurv.transport import Envelope as envelopes
from fedsurv.transport import framecodec
from fedsurv.transport.audit import PayloadAudit
from fedsurv.transport.Envelope import Envelope, error_envelope
from fedsurv.transport.RoundState import RoundState, AWAITING_MODELS, DONE, ABORTED

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 120.0
ACCEPT_POLL_INTERVAL = 0.2


class Coordinator:
    """
    Runs one synchronous round: collects schemas, broadcasts the merged
    schema, collects local models and sends every client its compatible
    trees together with the positions it activates.
    """

    def __init__(self, listen_address, roster, seed=None, anonymize=False, extra_columns=0,
                 extra_column_prefix=DEFAULT_EXTRA_COLUMN_PREFIX, timeout=DEFAULT_TIMEOUT,
                 max_frame_size=framecodec.DEFAULT_MAX_FRAME_SIZE):
        """
        Creates new Coordinator instance.
        :param listen_address: (host, port) tuple; port 0 picks a free port.
        :param roster: Client ids expected in this round.
        :param seed: Master seed of the constant-sampling streams.
        :param anonymize: Anonymize canonical names at merge time.
        :param extra_columns: Placeholder columns reserved in the merged schema.
        :param extra_column_prefix: Prefix of placeholder columns.
        :param timeout: Seconds to wait for any client before aborting.
        :param max_frame_size: Largest accepted frame body in bytes.
        """
        self.listen_address = listen_address
        self.roster = sorted(roster)
        self.seed = seed
        self.anonymize = anonymize
        self.extra_columns = extra_columns
        self.extra_column_prefix = extra_column_prefix
        self.timeout = timeout
        self.max_frame_size = max_frame_size
        self.state = RoundState(self.roster)
        self.audit = PayloadAudit()
        self.federated_schema = None
        self.models = {}
        self.active_documents = {}
        self.address = None
        self._listener = None
        self._handlers = []

    def start(self):
        """
        Binds the listening socket; address holds the bound (host, port).
        """
        self._listener = socket.create_server(self.listen_address)
        self._listener.settimeout(ACCEPT_POLL_INTERVAL)
        self.address = self._listener.getsockname()[:2]
        logger.info("coordinator listening on %s:%d for %d clients", self.address[0],
                    self.address[1], len(self.roster))
        return self.address

    def serve(self):
        """
        Accepts clients until the round is done or aborted.
        :return: Per-site result log, sorted by site id.
        """
        if self._listener is None:
            self.start()
        deadline = time.monotonic() + self.timeout
        try:
            while not self.state.finished:
                if (time.monotonic() > deadline
                        and self.state.connected_clients != self.state.expected_clients):
                    self.state.abort("timeout waiting for clients to connect")
                    break
                try:
                    connection, peer = self._listener.accept()
                except socket.timeout:
                    continue
                logger.debug("connection from %s:%d", peer[0], peer[1])
                handler = threading.Thread(target=self._serve_client, args=(connection,), daemon=True)
                handler.start()
                self._handlers.append(handler)
            for handler in self._handlers:
                handler.join(self.timeout)
        finally:
            self._listener.close()

        if self.state.phase == ABORTED:
            raise ProtocolError("round aborted: {0}".format(self.state.abort_reason))
        return self.result_log()

    def run(self):
        self.start()
        return self.serve()

    def result_log(self):
        log = []
        plan = self.state.outcome.get(AWAITING_MODELS, {})
        for site_id in self.roster:
            received, selected = plan[site_id]
            log.append({
                "site_id": site_id,
                "local_trees": len(self.models[site_id].forest.trees),
                "received_trees": len(received),
                "active_trees": len(selected)
            })
        return log

    def _serve_client(self, connection):
        client_id = None
        registered = False
        try:
            connection.settimeout(self.timeout)
            hello = self._receive(connection, envelopes.HELLO)
            client_id = hello.client_id
            self.state.register(client_id)
            registered = True

            upload = self._receive(connection, envelopes.SCHEMA_UPLOAD, client_id)
            self.state.submit_schema(client_id, _payload_item(upload, "schema", DatasetSchema),
                                     self._merge)
            federated = self._wait_watching(connection, AWAITING_MODELS)
            self._send(connection, Envelope(envelopes.FEDERATED_SCHEMA, client_id,
                                            {"schema": federated.to_document()}))

            upload = self._receive(connection, envelopes.MODEL_UPLOAD, client_id)
            self.state.submit_model(client_id, _payload_item(upload, "model", LocalModel),
                                    self._federate)
            plan = self._wait_watching(connection, DONE)
            received, selected = plan[client_id]
            self._send(connection, Envelope(envelopes.MODEL_DOWNLOAD, client_id, {
                "received": [tree.to_document() for tree in received],
                "selected": list(selected)
            }))
            self._send(connection, Envelope(envelopes.ROUND_COMPLETE, client_id, {
                "summary": {"received_trees": len(received), "active_trees": len(selected)}
            }))
        except ProtocolError as exception:
            logger.warning("client %s: %s", client_id, exception.message)
            if registered:
                self.state.abort("client {0}: {1}".format(client_id, exception.message))
            self._send_error(connection, client_id, exception.message)
        finally:
            connection.close()

    def _wait_watching(self, connection, phase):
        """
        Waits for the barrier of phase while watching the connection. The
        client may not send anything until the coordinator answers, so any
        frame arriving before then is out of phase.
        :return: Outcome of the completed phase.
        """
        deadline = time.monotonic() + self.timeout
        while True:
            reached = self.state.reached(phase, ACCEPT_POLL_INTERVAL)
            self._reject_early_frame(connection)
            if reached:
                return self.state.result_of(phase)
            if time.monotonic() > deadline:
                return self.state.wait_for(phase, 0)

    def _reject_early_frame(self, connection):
        readable, _, _ = select.select([connection], [], [], 0)
        if not readable:
            return
        document = framecodec.recv_frame(connection, self.max_frame_size)
        if document is None:
            raise ProtocolError("client disconnected")
        envelope = Envelope.from_document(document)
        if envelope.msg_type == envelopes.ERROR:
            raise ProtocolError("client reported: {0}".format(envelope.payload.get("message")))
        raise ProtocolError("out-of-phase message")

    def _merge(self, schemas):
        self.federated_schema = merge_schemas(schemas, self.anonymize, self.extra_columns,
                                              self.extra_column_prefix, self.seed)
        return self.federated_schema

    def _federate(self, models):
        self.models = models
        ordered = [models[site_id] for site_id in sorted(models)]
        plan = federation_plan(ordered, self.seed)
        for model in ordered:
            received, selected = plan[model.site_id]
            combined = list(model.forest.trees) + list(received)
            self.active_documents[model.site_id] = [combined[position].to_document()
                                                    for position in selected]
        return plan

    def _receive(self, connection, expected_type, client_id=None):
        document = framecodec.recv_frame(connection, self.max_frame_size)
        if document is None:
            raise ProtocolError("client disconnected")
        envelope = Envelope.from_document(document)
        if envelope.msg_type == envelopes.ERROR:
            raise ProtocolError("client reported: {0}".format(envelope.payload.get("message")))
        if envelope.msg_type != expected_type:
            raise ProtocolError("out-of-phase message")
        if client_id is not None and envelope.client_id != client_id:
            raise ProtocolError("client id changed within a connection")
        self.audit.check(envelope, "up")
        logger.info("received %s from %s", envelope.msg_type, envelope.client_id)
        return envelope

    def _send(self, connection, envelope):
        self.audit.check(envelope, "down")
        size = framecodec.send_frame(connection, envelope.to_document(), self.max_frame_size)
        logger.info("sent %s to %s (%d bytes)", envelope.msg_type, envelope.client_id, size)

    def _send_error(self, connection, client_id, message):
        try:
            framecodec.send_frame(connection, error_envelope(client_id, message).to_document(),
                                  self.max_frame_size)
        except (OSError, ProtocolError):
            pass


def run_coordinator(listen_address, roster, seed=None, timeout=DEFAULT_TIMEOUT, **options):
    """
    Runs one coordinator round.
    :return: Per-site result log.
    """
    return Coordinator(listen_address, roster, seed, timeout=timeout, **options).run()


def read_roster(roster_file):
    """
    Reads client ids, one per line; blank lines and # comments are skipped.
    :param roster_file: Open text file.
    :return: List of client ids.
    """
    roster = []
    for line in roster_file:
        line = line.split("#", 1)[0].strip()
        if line:
            roster.append(line)
    if len(set(roster)) != len(roster):
        raise ProtocolError("roster lists a client twice", fatal=True)
    return roster


def _payload_item(envelope, key, document_class):
    try:
        return document_class.from_document(envelope.payload[key])
    except KeyError:
        raise ProtocolError("{0} payload lacks '{1}'".format(envelope.msg_type, key))
    except FedSurvError as exception:
        raise ProtocolError("invalid {0}: {1}".format(key, exception.message))

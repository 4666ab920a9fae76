"""Contains the barrier-synchronized state of one coordinator round."""
import threading

from fedsurv.exceptions.ProtocolError import ProtocolError

AWAITING_SCHEMAS = "awaiting_schemas"
AWAITING_MODELS = "awaiting_models"
DONE = "done"
ABORTED = "aborted"

PHASE_ORDER = (AWAITING_SCHEMAS, AWAITING_MODELS, DONE)


class RoundState:
    """
    Shared state of a round. A phase ends only after every expected client
    has reported; all changes happen under one condition variable.
    """

    def __init__(self, expected_clients):
        if not expected_clients:
            raise ProtocolError("roster is empty", fatal=True)
        self.expected_clients = frozenset(expected_clients)
        self.connected_clients = set()
        self.received_schemas = {}
        self.received_models = {}
        self.phase = AWAITING_SCHEMAS
        self.abort_reason = None
        self.outcome = {}
        self._condition = threading.Condition()

    def register(self, client_id):
        """
        Admits a client that said hello.
        :param client_id: Client id from the hello envelope.
        """
        with self._condition:
            if client_id not in self.expected_clients:
                raise ProtocolError("unknown client '{0}'".format(client_id))
            if client_id in self.connected_clients:
                raise ProtocolError("duplicate client_id '{0}'".format(client_id))
            self.connected_clients.add(client_id)

    def submit_schema(self, client_id, schema, on_complete):
        """
        Stores a schema; the last one triggers on_complete(received_schemas).
        """
        self._submit(AWAITING_SCHEMAS, AWAITING_MODELS, self.received_schemas,
                     client_id, schema, on_complete)

    def submit_model(self, client_id, model, on_complete):
        """
        Stores a model; the last one triggers on_complete(received_models).
        """
        self._submit(AWAITING_MODELS, DONE, self.received_models,
                     client_id, model, on_complete)

    def _submit(self, phase, next_phase, store, client_id, item, on_complete):
        with self._condition:
            self._raise_if_aborted()
            if self.phase != phase:
                raise ProtocolError("out-of-phase message")
            if client_id in store:
                raise ProtocolError("client '{0}' already reported in {1}".format(client_id, phase))
            store[client_id] = item
            if set(store) == self.expected_clients:
                try:
                    self.outcome[phase] = on_complete(dict(store))
                except Exception as exception:
                    self._abort_locked("{0} failed: {1}".format(phase, exception))
                    raise ProtocolError("round aborted: {0}".format(self.abort_reason))
                self.phase = next_phase
                self._condition.notify_all()

    def wait_for(self, phase, timeout):
        """
        Blocks until the round reached phase.
        :param phase: Phase from PHASE_ORDER.
        :param timeout: Seconds before the round is aborted.
        :return: The outcome recorded when the previous phase completed.
        """
        with self._condition:
            if not self._wait_locked(phase, timeout):
                self._abort_locked("timeout waiting for clients in {0}".format(self.phase))
            return self.result_of(phase)

    def reached(self, phase, timeout):
        """
        Waits up to timeout seconds for phase without aborting the round.
        :return: True once the round reached phase.
        """
        with self._condition:
            reached = self._wait_locked(phase, timeout)
            self._raise_if_aborted()
            return reached

    def result_of(self, phase):
        """
        The outcome recorded when the phase before the given one completed.
        """
        target = PHASE_ORDER.index(phase)
        with self._condition:
            self._raise_if_aborted()
            return self.outcome.get(PHASE_ORDER[target - 1]) if target > 0 else None

    def _wait_locked(self, phase, timeout):
        target = PHASE_ORDER.index(phase)
        return self._condition.wait_for(
            lambda: self.phase == ABORTED or PHASE_ORDER.index(self.phase) >= target, timeout)

    def abort(self, reason):
        with self._condition:
            self._abort_locked(reason)

    @property
    def finished(self):
        with self._condition:
            return self.phase in (DONE, ABORTED)

    def _abort_locked(self, reason):
        if self.phase not in (DONE, ABORTED):
            self.phase = ABORTED
            self.abort_reason = reason
            self._condition.notify_all()

    def _raise_if_aborted(self):
        if self.phase == ABORTED:
            raise ProtocolError("round aborted: {0}".format(self.abort_reason))

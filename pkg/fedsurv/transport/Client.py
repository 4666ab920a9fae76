"""Contains the client process of a networked federation round."""
import logging
import socket
import time

from fedsurv.exceptions.ProtocolError import ProtocolError
from fedsurv.experiment.datasets import load_survival_csv, one_hot
from fedsurv.experiment.sampling import holdout_split
from fedsurv.federation.LocalModel import LocalModel
from fedsurv.forest.ForestParams import ForestParams
from fedsurv.forest.RandomSurvivalForest import fit_forest, usable_features
from fedsurv.forest.SurvivalTree import SurvivalTree
from fedsurv.schema.alignment import align_table
from fedsurv.schema.DatasetSchema import make_schema
from fedsurv.schema.FederatedSchema import FederatedSchema
from fedsurv.survival.concordance import concordance_counts
from fedsurv.transport import Envelope as envelopes
from fedsurv.transport import framecodec
from fedsurv.transport.audit import PayloadAudit
from fedsurv.transport.Envelope import Envelope, error_envelope
from fedsurv.utils import randomutils

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 120.0
DEFAULT_RETRIES = 3
DEFAULT_BACKOFF = 0.5

# stream keys below the client seed
HOLDOUT_STREAM = 0
FOREST_STREAM = 1


class Client:
    """
    Single-threaded client of one round. Only schema and tree documents
    leave the process; rows and outcomes stay local.
    """

    def __init__(self, address, client_id, dataset, params=None, seed=None, column_map=None,
                 update_method="constant", update_weighting="equal", test_fraction=0.3,
                 timeout=DEFAULT_TIMEOUT, retries=DEFAULT_RETRIES, backoff=DEFAULT_BACKOFF,
                 max_frame_size=framecodec.DEFAULT_MAX_FRAME_SIZE):
        """
        Creates new Client instance.
        :param address: (host, port) of the coordinator.
        :param client_id: Id of this client in the coordinator's roster.
        :param dataset: Local Dataset before one-hot encoding.
        :param params: ForestParams of the local forest.
        :param seed: Seed of the holdout split and the forest.
        :param column_map: Optional map of local column to canonical name.
        :param update_method: "all" or "constant".
        :param update_weighting: "equal" or "site_size".
        :param test_fraction: Share of local rows held out for evaluation.
        :param timeout: Socket timeout in seconds.
        :param retries: Connection attempts after the first one.
        :param backoff: Base delay of the exponential backoff in seconds.
        :param max_frame_size: Largest accepted frame body in bytes.
        """
        self.address = address
        self.client_id = client_id
        self.dataset = one_hot(dataset)
        self.params = params or ForestParams()
        self.entropy = randomutils.master_entropy(seed)
        self.column_map = column_map
        self.update_method = update_method
        self.update_weighting = update_weighting
        self.test_fraction = test_fraction
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.max_frame_size = max_frame_size
        self.audit = PayloadAudit()
        self.federated_schema = None
        self.model = None

    @property
    def schema(self):
        return make_schema(self.dataset.columns, self.column_map)

    def split(self):
        """
        Local train and test rows.
        :return: (train rows, test rows).
        """
        return holdout_split(len(self.dataset), self.test_fraction,
                             randomutils.child_stream(self.entropy, HOLDOUT_STREAM))

    def run(self):
        """
        Takes part in one round and evaluates the federated model on the
        held-out rows.
        :return: Evaluation record dict.
        """
        connection = self.connect()
        try:
            with connection:
                self._send(connection, Envelope(envelopes.HELLO, self.client_id))
                self._send(connection, Envelope(envelopes.SCHEMA_UPLOAD, self.client_id,
                                                {"schema": self.schema.to_document()}))

                envelope = self._receive(connection, envelopes.FEDERATED_SCHEMA)
                self.federated_schema = FederatedSchema.from_document(envelope.payload["schema"])
                aligned = align_table(self.dataset.frame, self.federated_schema, self.client_id)
                train_rows, test_rows = self.split()
                self.model = train_local_model(aligned.iloc[train_rows],
                                               (self.dataset.times[train_rows],
                                                self.dataset.events[train_rows]),
                                               self.client_id, usable_features(aligned),
                                               self.params, randomutils.child_stream(
                                                   self.entropy, FOREST_STREAM).integers(2 ** 63 - 1),
                                               self.update_method, self.update_weighting)
                self._send(connection, Envelope(envelopes.MODEL_UPLOAD, self.client_id,
                                                {"model": self.model.to_document()}))

                envelope = self._receive(connection, envelopes.MODEL_DOWNLOAD)
                received = [SurvivalTree.from_document(document)
                            for document in envelope.payload.get("received", [])]
                self.model.apply_selection(received, envelope.payload.get("selected", []))
                self._receive(connection, envelopes.ROUND_COMPLETE)
        except ProtocolError as exception:
            if exception.fatal or exception.message.startswith("round aborted"):
                raise
            raise ProtocolError("round aborted: {0}".format(exception.message))

        return self.evaluate(aligned.iloc[test_rows], test_rows)

    def evaluate(self, test_table, test_rows):
        """
        C-index of the local and the federated estimator sets on the test rows.
        :return: Evaluation record dict; c-indices are None without comparable pairs.
        """
        times = self.dataset.times[test_rows]
        events = self.dataset.events[test_rows]
        local_score, n_pairs = concordance_counts(
            self.model.use_local_estimators().predict_risk(test_table), times, events)
        federated_score, _ = concordance_counts(
            self.model.use_federated_estimators().predict_risk(test_table), times, events)
        record = {
            "client_id": self.client_id,
            "n_test": int(len(test_rows)),
            "n_comparable_pairs": n_pairs,
            "local_c_index": local_score / n_pairs if n_pairs else None,
            "c_index": federated_score / n_pairs if n_pairs else None,
            "local_trees": len(self.model.forest.trees),
            "received_trees": len(self.model.federated_trees),
            "active_trees": len(self.model.active_set)
        }
        logger.info("client %s: federated C-index %s on %d rows", self.client_id,
                    record["c_index"], record["n_test"])
        return record

    def connect(self):
        """
        Connects to the coordinator, retrying refused or reset connections
        with exponential backoff.
        :return: Connected socket.
        """
        for attempt in range(self.retries + 1):
            try:
                connection = socket.create_connection(self.address, timeout=self.timeout)
                connection.settimeout(self.timeout)
                return connection
            except (ConnectionRefusedError, ConnectionResetError, socket.timeout) as exception:
                if attempt == self.retries:
                    raise ProtocolError("cannot reach coordinator at {0}:{1}: {2}".format(
                        self.address[0], self.address[1], exception), retriable=True)
                delay = self.backoff * 2 ** attempt
                logger.warning("connection attempt %d failed (%s), retrying in %.1fs",
                               attempt + 1, exception, delay)
                time.sleep(delay)

    def _send(self, connection, envelope):
        self.audit.check(envelope, "up")
        framecodec.send_frame(connection, envelope.to_document(), self.max_frame_size)

    def _receive(self, connection, expected_type):
        document = framecodec.recv_frame(connection, self.max_frame_size)
        if document is None:
            raise ProtocolError("round aborted: coordinator closed the connection")
        envelope = Envelope.from_document(document)
        if envelope.msg_type == envelopes.ERROR:
            raise ProtocolError("round aborted: {0}".format(envelope.payload.get("message")))
        if envelope.msg_type != expected_type:
            self._send_error(connection, "out-of-phase message")
            raise ProtocolError("out-of-phase message")
        self.audit.check(envelope, "down")
        return envelope

    def _send_error(self, connection, message):
        try:
            framecodec.send_frame(connection, error_envelope(self.client_id, message).to_document(),
                                  self.max_frame_size)
        except (OSError, ProtocolError):
            pass


def train_local_model(table, outcomes, site_id, site_features, params, seed,
                      update_method="constant", update_weighting="equal"):
    """
    Fits the local forest of a site on its aligned training rows.
    :param table: Aligned training table.
    :param outcomes: (times, events) arrays of the training rows.
    :param site_id: Site id recorded on every tree.
    :param site_features: Canonical names without missing values at the site.
    :param params: ForestParams.
    :param seed: Forest seed.
    :return: LocalModel.
    """
    forest = fit_forest(table, outcomes, params, site_features, int(seed), site_id)
    return LocalModel(forest, site_id, site_features, update_method, update_weighting)


def run_client(address, client_id, data_path, params=None, seed=None, time_column="time",
               event_column="event", **options):
    """
    Loads the local CSV and takes part in one round.
    :return: Evaluation record dict.
    """
    dataset = load_survival_csv(data_path, time_column, event_column)
    return Client(address, client_id, dataset, params, seed, **options).run()

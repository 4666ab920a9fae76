"""Contains the merged schema covering the union of all site features."""
import logging

import numpy as np

from fedsurv.exceptions.SchemaError import SchemaError
from fedsurv.schema.DatasetSchema import DatasetSchema

logger = logging.getLogger(__name__)

DEFAULT_EXTRA_COLUMN_PREFIX = "extra_"
ANONYMOUS_PREFIX = "feature_"


class FederatedSchema:
    """
    Canonical feature space shared by all sites plus every site's map from
    local to canonical names.
    """

    def __init__(self, canonical_columns, per_client_map, anonymized=False,
                 extra_column_prefix=DEFAULT_EXTRA_COLUMN_PREFIX, name_permutation_seed=None,
                 renames=None):
        """
        Creates new FederatedSchema instance.
        :param canonical_columns: Ordered canonical names incl. placeholders.
        :param per_client_map: Client id to map of local to canonical name.
        :param anonymized: Whether canonical names are generic identifiers.
        :param extra_column_prefix: Prefix of placeholder columns.
        :param name_permutation_seed: Seed of the anonymizing permutation.
        :param renames: Plain to generic name map; held by the coordinator only.
        """
        self.canonical_columns = list(canonical_columns)
        self.per_client_map = dict((client_id, dict(mapping))
                                   for client_id, mapping in per_client_map.items())
        self.anonymized = anonymized
        self.extra_column_prefix = extra_column_prefix
        self.name_permutation_seed = name_permutation_seed
        self.renames = dict(renames or {})

        known = set(self.canonical_columns)
        if len(known) != len(self.canonical_columns):
            raise SchemaError("canonical columns are not unique")
        for client_id, mapping in self.per_client_map.items():
            outside = sorted(set(mapping.values()) - known)
            if outside:
                raise SchemaError("client {0} maps to unknown canonical names: {1}".format(
                    client_id, ", ".join(outside)))

    @property
    def clients(self):
        return sorted(self.per_client_map)

    def client_map(self, client_id):
        try:
            return self.per_client_map[client_id]
        except KeyError:
            raise SchemaError("unknown client '{0}'".format(client_id))

    def client_features(self, client_id):
        """
        Canonical names a client maps at least one local column to.
        :param client_id: Client id.
        :return: Set of canonical names.
        """
        return set(self.client_map(client_id).values())

    def stub_columns(self, client_id):
        """
        Canonical columns a client never collected, in canonical order.
        """
        features = self.client_features(client_id)
        return [column for column in self.canonical_columns if column not in features]

    def project(self, client_id):
        """
        The local schema of one client as seen through this federated schema.
        :param client_id: Client id.
        :return: DatasetSchema.
        """
        mapping = self.client_map(client_id)
        return DatasetSchema(list(mapping), mapping)

    def to_document(self):
        return {
            "canonical_columns": list(self.canonical_columns),
            "per_client_map": dict((client_id, dict(mapping))
                                   for client_id, mapping in self.per_client_map.items()),
            "anonymized": self.anonymized,
            "extra_column_prefix": self.extra_column_prefix
        }

    @classmethod
    def from_document(cls, document):
        try:
            return cls(document["canonical_columns"], document["per_client_map"],
                       document.get("anonymized", False),
                       document.get("extra_column_prefix", DEFAULT_EXTRA_COLUMN_PREFIX))
        except (KeyError, TypeError, AttributeError) as exception:
            raise SchemaError("malformed federated schema document: {0}".format(exception))


def merge_schemas(schemas, anonymize=False, extra_columns=0,
                  extra_column_prefix=DEFAULT_EXTRA_COLUMN_PREFIX, random_state=None):
    """
    Merges local schemas into one federated schema.
    :param schemas: Map of client id to DatasetSchema.
    :param anonymize: If set to True, canonical names become feature_0.. under
                      a permutation seeded by random_state.
    :param extra_columns: Number of placeholder columns for late joiners.
    :param extra_column_prefix: Prefix of placeholder column names.
    :param random_state: Seed of the anonymizing permutation.
    :return: FederatedSchema.
    """
    if not schemas:
        raise SchemaError("at least one schema is needed")
    if extra_columns < 0:
        raise SchemaError("extra_columns must not be negative")

    union = sorted(set(name for schema in schemas.values()
                       for name in schema.column_map.values()))
    renames = dict((name, name) for name in union)
    if anonymize:
        permutation = np.random.default_rng(random_state).permutation(len(union))
        renames = dict((name, ANONYMOUS_PREFIX + str(int(position)))
                       for name, position in zip(union, permutation))
        union = [renames[name] for name in union]

    # checked on the final names, anonymized or not
    if extra_columns > 0:
        colliding = [name for name in union if name.startswith(extra_column_prefix)]
        if colliding:
            raise SchemaError("placeholder prefix '{0}' conflicts with {1}".format(
                extra_column_prefix, ", ".join(colliding)))

    placeholders = [extra_column_prefix + str(index) for index in range(extra_columns)]
    per_client_map = dict(
        (client_id, dict((local, renames[canonical])
                         for local, canonical in schema.column_map.items()))
        for client_id, schema in schemas.items())

    logger.info("merged %d schemas into %d canonical columns (%d placeholders)",
                len(schemas), len(union) + len(placeholders), len(placeholders))
    return FederatedSchema(union + placeholders, per_client_map, anonymize,
                           extra_column_prefix, random_state if anonymize else None,
                           renames if anonymize else None)

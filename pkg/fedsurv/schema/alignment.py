"""Contains the reindexing of a local table into the federated feature space."""
from fedsurv.exceptions.SchemaError import SchemaError


def align_table(table, federated, client_id):
    """
    Renames local columns to canonical names and reindexes to the canonical
    order. Columns the client never collected become all-missing stubs.
    :param table: Local pandas DataFrame.
    :param federated: FederatedSchema.
    :param client_id: Client id of the table's owner.
    :return: Aligned pandas DataFrame, rows in original order.
    """
    mapping = federated.client_map(client_id)
    unknown = [column for column in table.columns if column not in mapping]
    if unknown:
        raise SchemaError("column not in schema: {0}".format(", ".join(map(str, unknown))))
    renamed = table.rename(columns=mapping)
    return renamed.reindex(columns=federated.canonical_columns)


def strip_stubs(aligned, federated, client_id):
    """
    Drops the stub columns of a client from an aligned table.
    :param aligned: Table returned by align_table.
    :return: pandas DataFrame with only the client's own canonical columns.
    """
    return aligned.drop(columns=federated.stub_columns(client_id))

"""Contains the local schema a site declares before federation."""
from fedsurv.exceptions.SchemaError import SchemaError


class DatasetSchema:
    """
    Ordered local column names and their map to canonical names. This is
    the only metadata a site uploads.
    """

    def __init__(self, columns, column_map=None, generate_column_map_closure=True):
        """
        Creates new DatasetSchema instance.
        :param columns: Ordered local column names.
        :param column_map: Map of local name to canonical name; None means
                           every local name is already canonical.
        :param generate_column_map_closure: If set to True, unmapped columns
                                            get identity entries.
        """
        columns = list(columns)
        if not columns:
            raise SchemaError("schema needs at least one column")
        duplicates = sorted(set(column for column in columns if columns.count(column) > 1))
        if duplicates:
            raise SchemaError("duplicate local columns: {0}".format(", ".join(duplicates)))

        if column_map is None:
            column_map = dict((column, column) for column in columns)
        else:
            column_map = dict(column_map)
            unknown = sorted(set(column_map) - set(columns))
            if unknown:
                raise SchemaError("column map names unknown columns: {0}".format(", ".join(unknown)))
            if generate_column_map_closure:
                for column in columns:
                    column_map.setdefault(column, column)

        canonical = list(column_map.values())
        clashes = sorted(set(name for name in canonical if canonical.count(name) > 1))
        if clashes:
            raise SchemaError("several local columns map to canonical name(s) {0}".format(
                ", ".join(clashes)))

        self.columns = columns
        self.column_map = column_map
        self.generate_column_map_closure = generate_column_map_closure

    @property
    def canonical_columns(self):
        return [self.column_map[column] for column in self.columns if column in self.column_map]

    def __eq__(self, other):
        if not isinstance(other, DatasetSchema):
            return NotImplemented
        return (self.columns == other.columns and self.column_map == other.column_map
                and self.generate_column_map_closure == other.generate_column_map_closure)

    def __repr__(self):
        return "DatasetSchema(columns={0!r}, column_map={1!r})".format(self.columns, self.column_map)

    def to_document(self):
        return {
            "columns": list(self.columns),
            "column_map": dict(self.column_map),
            "closure": self.generate_column_map_closure
        }

    @classmethod
    def from_document(cls, document):
        try:
            return cls(document["columns"], document.get("column_map"),
                       document.get("closure", True))
        except (KeyError, TypeError) as exception:
            raise SchemaError("malformed schema document: {0}".format(exception))


def make_schema(columns, column_map=None, closure=True):
    """
    Declares the local schema of a site.
    :param columns: Local column names.
    :param column_map: Optional map of local to canonical names.
    :param closure: Extend the map with identity entries.
    :return: DatasetSchema.
    """
    return DatasetSchema(columns, column_map, closure)

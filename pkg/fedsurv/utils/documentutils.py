"""Contains helpers for the canonical JSON form of exchanged documents."""
import json


def dumps(document):
    """
    Serializes a document to canonical JSON. Keys are sorted and floats use
    the shortest round-trip decimal, so equal documents give equal bytes.
    :param document: JSON-compatible document.
    :return: Canonical JSON string.
    """
    return json.dumps(document, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False, allow_nan=False)


def loads(text):
    """
    Parses a JSON document.
    :param text: JSON string or UTF-8 bytes.
    :return: Document.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    return json.loads(text)


def floats(values):
    """
    Converts a numeric sequence to plain floats for serialization.
    :param values: Iterable of numbers, e.g. a numpy array.
    :return: List of float.
    """
    return [float(value) for value in values]

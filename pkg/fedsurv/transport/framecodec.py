"""
Contains the wire framing of envelopes: a 4-byte big-endian unsigned
length N followed by N bytes of UTF-8 JSON.
"""
import json
import socket
import struct

from fedsurv.exceptions.ProtocolError import ProtocolError
from fedsurv.utils.documentutils import dumps

HEADER = struct.Struct(">I")
DEFAULT_MAX_FRAME_SIZE = 256 * 1024 * 1024


def encode_frame(document, max_frame_size=DEFAULT_MAX_FRAME_SIZE):
    """
    Encodes a document as one frame.
    :param document: JSON-compatible document.
    :param max_frame_size: Largest allowed body in bytes.
    :return: Header and body bytes.
    """
    body = dumps(document).encode("utf-8")
    if len(body) > max_frame_size:
        raise ProtocolError("frame of {0} bytes exceeds limit of {1}".format(len(body), max_frame_size))
    return HEADER.pack(len(body)) + body


def decode_frames(data, max_frame_size=DEFAULT_MAX_FRAME_SIZE):
    """
    Decodes concatenated frames.
    :param data: Bytes holding zero or more complete frames.
    :param max_frame_size: Largest allowed body in bytes.
    :return: List of documents in stream order.
    """
    documents = []
    offset = 0
    while offset < len(data):
        if len(data) - offset < HEADER.size:
            raise ProtocolError("short frame")
        (length,) = HEADER.unpack_from(data, offset)
        _check_length(length, max_frame_size)
        offset += HEADER.size
        if len(data) - offset < length:
            raise ProtocolError("short frame")
        documents.append(_parse_body(bytes(data[offset:offset + length])))
        offset += length
    return documents


def send_frame(sock, document, max_frame_size=DEFAULT_MAX_FRAME_SIZE):
    """
    Writes one frame to a connected socket.
    :param sock: Socket.
    :param document: Document to send.
    :return: Number of body bytes written.
    """
    frame = encode_frame(document, max_frame_size)
    sock.sendall(frame)
    return len(frame) - HEADER.size


def recv_frame(sock, max_frame_size=DEFAULT_MAX_FRAME_SIZE):
    """
    Reads one frame from a connected socket. The length is checked against
    the limit before the body is read.
    :param sock: Socket.
    :return: Document, or None if the peer closed before a new frame began.
    """
    header = _recv_exactly(sock, HEADER.size, allow_eof=True)
    if header is None:
        return None
    (length,) = HEADER.unpack(header)
    _check_length(length, max_frame_size)
    return _parse_body(_recv_exactly(sock, length))


def _recv_exactly(sock, count, allow_eof=False):
    buffer = bytearray()
    while len(buffer) < count:
        try:
            chunk = sock.recv(count - len(buffer))
        except socket.timeout:
            raise ProtocolError("timed out waiting for peer", retriable=True)
        except (ConnectionResetError, ConnectionAbortedError) as exception:
            raise ProtocolError("connection lost: {0}".format(exception), retriable=True)
        if not chunk:
            if allow_eof and not buffer:
                return None
            raise ProtocolError("short frame")
        buffer.extend(chunk)
    return bytes(buffer)


def _check_length(length, max_frame_size):
    if length > max_frame_size:
        raise ProtocolError("frame of {0} bytes exceeds limit of {1}".format(length, max_frame_size))


def _parse_body(body):
    try:
        return json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, ValueError):
        raise ProtocolError("malformed frame")

"""Contains tests for frame encoding and envelopes"""
import socket

import pytest

from fedsurv.exceptions.ProtocolError import ProtocolError
from fedsurv.transport import framecodec
from fedsurv.transport.Envelope import Envelope, SCHEMA_UPLOAD, error_envelope


def test_encode_empty_document():
    assert b"\x00\x00\x00\x02{}" == framecodec.encode_frame({})


def test_encoding_is_canonical():
    first = framecodec.encode_frame({"b": 1.5, "a": [1, 2]})
    second = framecodec.encode_frame({"a": [1, 2], "b": 1.5})

    assert first == second
    assert b'{"a":[1,2],"b":1.5}' == first[4:]


def test_concatenated_frames():
    documents = [{}, {"msg": "x"}, {"values": [0.1, 0.2]}]
    data = b"".join(framecodec.encode_frame(document) for document in documents)

    assert documents == framecodec.decode_frames(data)


@pytest.mark.parametrize("data", [
    b"\x00\x00",
    b"\x00\x00\x00\x05{}",
    framecodec.encode_frame({}) + b"\x00"
])
def test_short_frame(data):
    with pytest.raises(ProtocolError) as error:
        framecodec.decode_frames(data)
    assert "short frame" == error.value.message


def test_oversized_frame():
    with pytest.raises(ProtocolError):
        framecodec.encode_frame({"key": "x" * 100}, max_frame_size=50)
    with pytest.raises(ProtocolError):
        framecodec.decode_frames(b"\x00\x01\x00\x00", max_frame_size=1024)


def test_malformed_body():
    with pytest.raises(ProtocolError) as error:
        framecodec.decode_frames(b"\x00\x00\x00\x03{x}")
    assert "malformed frame" == error.value.message


def test_socket_round_trip():
    left, right = socket.socketpair()
    with left, right:
        framecodec.send_frame(left, {"hello": "world"})
        framecodec.send_frame(left, {})
        left.shutdown(socket.SHUT_WR)

        assert {"hello": "world"} == framecodec.recv_frame(right)
        assert {} == framecodec.recv_frame(right)
        assert framecodec.recv_frame(right) is None


def test_oversized_length_is_rejected_before_body():
    left, right = socket.socketpair()
    with left, right:
        left.sendall(b"\x7f\xff\xff\xff")
        with pytest.raises(ProtocolError):
            framecodec.recv_frame(right, max_frame_size=1024)


def test_peer_closing_mid_frame():
    left, right = socket.socketpair()
    with left, right:
        left.sendall(b"\x00\x00\x00\x10{")
        left.shutdown(socket.SHUT_WR)
        with pytest.raises(ProtocolError) as error:
            framecodec.recv_frame(right)
        assert "short frame" == error.value.message


def test_envelope_round_trip():
    envelope = Envelope(SCHEMA_UPLOAD, "client_01", {"schema": {"columns": ["age"]}})

    decoded = framecodec.decode_frames(framecodec.encode_frame(envelope.to_document()))[0]

    assert envelope == Envelope.from_document(decoded)


@pytest.mark.parametrize(["document", "fatal"], [
    ({"protocol_version": 2, "msg_type": "hello", "client_id": "a", "payload": {}}, True),
    ({"protocol_version": 1, "msg_type": "goodbye", "client_id": "a", "payload": {}}, False),
    ({"protocol_version": 1, "msg_type": "hello", "payload": {}}, False),
    ({"protocol_version": 1, "msg_type": "hello", "client_id": "a", "payload": []}, False),
    ([], False)
])
def test_invalid_envelopes(document, fatal):
    with pytest.raises(ProtocolError) as error:
        Envelope.from_document(document)
    assert fatal == error.value.fatal


def test_error_envelope():
    envelope = error_envelope(None, "out-of-phase message")

    assert "" == envelope.client_id
    assert {"message": "out-of-phase message"} == envelope.payload

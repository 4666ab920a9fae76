"""Contains helper methods for network addresses."""
from fedsurv.exceptions.ProtocolError import ProtocolError


def parse_address(text):
    """
    Parses a host:port address; IPv6 hosts may be bracketed.
    :param text: Address such as "127.0.0.1:9000" or "[::1]:9000".
    :return: (host, port) tuple.
    """
    host, separator, port = text.rpartition(":")
    if not separator or not port.isdigit():
        raise ProtocolError("address must look like host:port, got '{0}'".format(text), fatal=True)
    port = int(port)
    if port > 65535:
        raise ProtocolError("port out of range in '{0}'".format(text), fatal=True)
    if host.startswith("[") and host.endswith("]"):
        host = host[1:-1]
    return host or "0.0.0.0", port

"""Contains helper methods for console output."""
import math
import sys

from tabulate import tabulate


def print_progress(message, current, total=None, formatter=None):
    """
    Prints progress of a long-running loop on a single console line.
    :param message: Message with a {0} placeholder for the progress.
    :param current: Units done so far, e.g. bytes or experiment cells.
    :param total: Total units; progress is shown in percent when given.
    :param formatter: Formats current when total is unknown; bytes by default.
    """
    if total:
        progress = float(current) / total * 100
        message = message.format(str(round(progress, 2)) + "%")
    else:
        message = message.format((formatter or format_bytes)(current))

    sys.stdout.write("\r\033[K")
    sys.stdout.write(message)
    sys.stdout.flush()


def finish_progress():
    """
    Ends a progress line so following output starts on a new line.
    """
    sys.stdout.write("\n")
    sys.stdout.flush()


def format_bytes(bytes_count, precision=2):
    """
    Formats number of bytes to string with suitable unit.
    :param bytes_count: Number of bytes.
    :param precision: Precision of size number.
    :return: Formatted string with suitable unit.
    """
    if bytes_count > 0:
        units = ("B", "KB", "MB", "GB", "TB", "PB", "EB", "ZB", "YB")
        exponent = int(math.floor(math.log(bytes_count, 1024)))
        power = math.pow(1024, exponent)
        converted = round(bytes_count / power, precision)
        if converted > 0:
            return "%s %s" % (converted, units[exponent])

    return "0 B"


def format_table(rows, headers, float_format=".3f"):
    """
    Renders rows as a plain console table.
    :param rows: Sequence of row sequences.
    :param headers: Column headers.
    :param float_format: Format of float cells.
    :return: Table string.
    """
    return tabulate(rows, headers=headers, floatfmt=float_format)

"""Contains test for consoleutils package"""
import pytest

from fedsurv.utils import consoleutils


@pytest.mark.parametrize(["message", "current", "total", "expected_output"], [
    (
        "Progress...{0}",
        512,
        None,
        "Progress...512.0 B"
    ),
    (
        "Progress...{0}",
        1024,
        2048,
        "Progress...50.0%"
    ),
    (
        "Running experiment...{0}",
        1,
        3,
        "Running experiment...33.33%"
    ),
    (
        "Progress...",
        1024,
        2048,
        "Progress..."
    )
])
def test_print_progress(message, current, total, expected_output, capsys):
    consoleutils.print_progress(message, current, total)
    out, err = capsys.readouterr()

    assert "\r\x1b[K" + expected_output == str(out)


def test_print_progress_with_formatter(capsys):
    consoleutils.print_progress("Cells...{0}", 7, formatter=lambda count: "{0} cells".format(count))
    out, err = capsys.readouterr()

    assert "\r\x1b[KCells...7 cells" == out


def test_finish_progress(capsys):
    consoleutils.finish_progress()
    out, err = capsys.readouterr()

    assert "\n" == out


@pytest.mark.parametrize(["bytes_count", "precision", "expected_output"], [
    (
        0,
        2,
        "0 B"
    ),
    (
        42,
        2,
        "42.0 B"
    ),
    (
        1248,
        2,
        "1.22 KB"
    ),
    (
        2345000,
        3,
        "2.236 MB"
    ),
    (
        1678500000,
        4,
        "1.5632 GB"
    ),
    (
        1099511627776,
        2,
        "1.0 TB"
    )
])
def test_format_bytes(bytes_count, precision, expected_output):
    actual_output = consoleutils.format_bytes(bytes_count, precision)

    assert expected_output == actual_output


def test_format_table():
    table = consoleutils.format_table([("Local", 0.61934), ("Fed(10)", 0.646)],
                                      ["Configuration", "Mean"])

    lines = table.splitlines()
    assert lines[0].split() == ["Configuration", "Mean"]
    assert lines[2].split() == ["Local", "0.619"]
    assert lines[3].split() == ["Fed(10)", "0.646"]

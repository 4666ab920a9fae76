"""Contains class for writing experiment results to file."""
import csv
import json

from fedsurv.exceptions.FedSurvError import FedSurvError
from fedsurv.experiment.RunRecord import RunRecord, RECORD_COLUMNS

SUMMARY_COLUMNS = ("configuration", "n", "n_excluded", "mean", "sd", "q1", "median", "q3",
                   "whisker_low", "whisker_high")
PAIRED_TEST_COLUMNS = ("baseline", "comparison", "n_pairs", "mean_delta", "median_delta",
                       "wilcoxon_p", "paired_t_p")


class ResultWriter:
    """
    Contains writer for writing run records and report tables to csv files.
    Files are opened by the caller with newline="".
    """

    def __init__(self, records_file, summary_file=None, paired_tests_file=None):
        """
        Creates new ResultWriter instance.
        :param records_file: File for output of run records.
        :param summary_file: File for output of per-configuration statistics.
        :param paired_tests_file: File for output of paired test results.
        """
        self.records_writer = csv.writer(records_file) if records_file is not None else None
        self.summary_writer = csv.writer(summary_file) if summary_file is not None else None
        self.paired_tests_writer = (csv.writer(paired_tests_file)
                                    if paired_tests_file is not None else None)
        self._records_started = False

    def write_record(self, record):
        """
        Writes single run record to file; the header precedes the first one.
        :param record: RunRecord.
        """
        if self.records_writer is None:
            raise FedSurvError("no records file was given")
        if not self._records_started:
            self.records_writer.writerow(RECORD_COLUMNS)
            self._records_started = True
        self.records_writer.writerow(record.to_row())

    def write_records(self, records):
        for record in records:
            self.write_record(record)

    def write_summary(self, report):
        """
        Writes the per-configuration statistics of a report, ascending by mean.
        :param report: Report.
        """
        self.summary_writer.writerow(SUMMARY_COLUMNS)
        for summary in report.summaries:
            row = (
                summary.configuration,
                summary.n,
                summary.n_excluded,
                repr(summary.mean),
                repr(summary.sd),
                repr(summary.q1),
                repr(summary.median),
                repr(summary.q3),
                repr(summary.whisker_low),
                repr(summary.whisker_high)
            )
            self.summary_writer.writerow(row)

    def write_paired_tests(self, report):
        """
        Writes the paired test table of a report.
        :param report: Report.
        """
        self.paired_tests_writer.writerow(PAIRED_TEST_COLUMNS)
        for result in report.paired_tests:
            row = (
                result.baseline,
                result.comparison,
                result.n_pairs,
                repr(result.mean_delta),
                repr(result.median_delta),
                repr(result.wilcoxon_p),
                repr(result.paired_t_p)
            )
            self.paired_tests_writer.writerow(row)


def read_records(records_file):
    """
    Reads run records written by ResultWriter.
    :param records_file: Open text file.
    :return: List of RunRecord.
    """
    reader = csv.DictReader(records_file)
    missing = [column for column in RECORD_COLUMNS if column not in (reader.fieldnames or [])]
    if missing:
        raise FedSurvError("records file lacks column(s): {0}".format(", ".join(missing)))
    try:
        return [RunRecord.from_row(row) for row in reader]
    except ValueError as exception:
        raise FedSurvError("malformed record in line {0}: {1}".format(reader.line_num, exception))


def write_manifest(manifest_file, manifest):
    """
    Writes the run manifest as indented JSON.
    :param manifest_file: Open text file.
    :param manifest: JSON-compatible dict.
    """
    json.dump(manifest, manifest_file, indent=2, sort_keys=True)
    manifest_file.write("\n")

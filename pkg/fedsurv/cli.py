"""Contains the command line interface of fedsurv."""
import argparse
import json
import logging
import os

from fedsurv.exceptions.FedSurvError import FedSurvError
from fedsurv.exceptions.ProtocolError import ProtocolError
from fedsurv.experiment.datasets import load_survival_csv
from fedsurv.experiment.ExperimentConfig import ExperimentConfig
from fedsurv.experiment.ExperimentRunner import ExperimentRunner
from fedsurv.experiment.gbsg2 import fetch_gbsg2
from fedsurv.experiment.reporting import report
from fedsurv.transport import framecodec
from fedsurv.transport.Client import Client, DEFAULT_RETRIES
from fedsurv.transport.Coordinator import Coordinator, DEFAULT_TIMEOUT, read_roster
from fedsurv.utils import consoleutils
from fedsurv.utils.networkutils import parse_address
from fedsurv.writer.BoxplotWriter import BoxplotWriter
from fedsurv.writer.ResultWriter import ResultWriter, read_records, write_manifest

logger = logging.getLogger("fedsurv")

EXIT_FAILURE = 1
EXIT_ROUND_ABORTED = 2


def build_parser():
    parser = argparse.ArgumentParser(prog="fedsurv", description="This program trains random survival forests at sites with partially overlapping features, federates their compatible trees and evaluates the result.")
    parser.add_argument("--quiet", "-q", help="suppress output", action="store_true")
    parser.add_argument("--verbose", "-v", help="log debug messages", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="run the in-process withholding experiment")
    simulate.add_argument("--config", help="TOML experiment configuration; defaults when omitted.")
    simulate.add_argument("--data", help="cohort CSV, e.g. from fetch-data.", required=True)
    simulate.add_argument("--out", help="output directory for records and report.", default="results")
    simulate.add_argument("--seed", help="master seed, overrides the configuration.", type=int)
    simulate.add_argument("--n-jobs", help="parallel tree fits per forest.", type=int)
    simulate.add_argument("--mccv", help="use Monte-Carlo cross-validation rounds.", action="store_true")
    simulate.add_argument("--svg", help="also draw boxplot.svg.", action="store_true")

    report_command = commands.add_parser("report", help="summarize a records CSV")
    report_command.add_argument("--records", help="records CSV written by simulate.", required=True)
    report_command.add_argument("--out", help="output directory; next to the records by default.")
    report_command.add_argument("--svg", help="also draw boxplot.svg.", action="store_true")

    coordinator = commands.add_parser("coordinator", help="run the coordinator of one round")
    coordinator.add_argument("--listen", help="host:port to listen on.", required=True)
    coordinator.add_argument("--roster", help="file with one client id per line.", required=True)
    coordinator.add_argument("--timeout-secs", help="seconds to wait for a client.", type=float, default=DEFAULT_TIMEOUT)
    coordinator.add_argument("--seed", help="seed of the constant update sampling.", type=int)
    coordinator.add_argument("--anonymize", help="anonymize canonical feature names.", action="store_true")
    coordinator.add_argument("--extra-columns", help="placeholder columns in the merged schema.", type=int, default=0)
    coordinator.add_argument("--max-frame-bytes", help="largest accepted frame.", type=int, default=framecodec.DEFAULT_MAX_FRAME_SIZE)

    client = commands.add_parser("client", help="take part in one round")
    client.add_argument("--connect", help="host:port of the coordinator.", required=True)
    client.add_argument("--client-id", help="id of this client in the roster.", required=True)
    client.add_argument("--data", help="local cohort CSV.", required=True)
    client.add_argument("--config", help="TOML configuration with forest parameters and update method.")
    client.add_argument("--column-map", help="JSON file mapping local columns to canonical names.")
    client.add_argument("--seed", help="seed of the holdout split and forest.", type=int)
    client.add_argument("--test-fraction", help="share of rows held out.", type=float, default=0.3)
    client.add_argument("--timeout-secs", help="socket timeout.", type=float, default=DEFAULT_TIMEOUT)
    client.add_argument("--retries", help="connection retries.", type=int, default=DEFAULT_RETRIES)
    client.add_argument("--max-frame-bytes", help="largest accepted frame.", type=int, default=framecodec.DEFAULT_MAX_FRAME_SIZE)

    fetch = commands.add_parser("fetch-data", help="write the GBSG2 cohort as CSV")
    fetch.add_argument("--out", help="output CSV.", default="gbsg2.csv")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    handlers = {
        "simulate": simulate,
        "report": write_report,
        "coordinator": coordinate,
        "client": participate,
        "fetch-data": fetch_data
    }
    try:
        handlers[args.command](args)
    except ProtocolError as exception:
        logger.error(exception.message)
        return EXIT_ROUND_ABORTED if exception.message.startswith("round aborted") else EXIT_FAILURE
    except (FedSurvError, ValueError, OSError) as exception:
        logger.error(getattr(exception, "message", None) or str(exception))
        return EXIT_FAILURE
    return 0


def load_config(args):
    config = ExperimentConfig.from_toml(args.config) if args.config else ExperimentConfig()
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "mccv", False):
        changes["mccv"] = True
    if getattr(args, "n_jobs", None) is not None:
        changes["forest"] = config.forest.replace(n_jobs=args.n_jobs)
    return config.replace(**changes) if changes else config


def simulate(args):
    config = load_config(args)
    dataset = load_survival_csv(args.data, config.time_column, config.event_column,
                                config.categorical_columns)

    runner = ExperimentRunner(config, dataset, args.quiet)
    records = runner.run()

    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "records.csv"), "w", newline="") as records_file:
        ResultWriter(records_file).write_records(records)
    with open(os.path.join(args.out, "manifest.json"), "w") as manifest_file:
        write_manifest(manifest_file, runner.manifest)
    _emit_report(records, args.out, args.svg, args.quiet)


def write_report(args):
    with open(args.records, newline="") as records_file:
        records = read_records(records_file)
    out = args.out or os.path.dirname(os.path.abspath(args.records))
    os.makedirs(out, exist_ok=True)
    _emit_report(records, out, args.svg, args.quiet)


def coordinate(args):
    with open(args.roster) as roster_file:
        roster = read_roster(roster_file)
    coordinator = Coordinator(parse_address(args.listen), roster, args.seed, args.anonymize,
                              args.extra_columns, timeout=args.timeout_secs,
                              max_frame_size=args.max_frame_bytes)
    result_log = coordinator.run()
    if not args.quiet:
        print(consoleutils.format_table(
            [(entry["site_id"], entry["local_trees"], entry["received_trees"], entry["active_trees"])
             for entry in result_log],
            ["Site", "Local trees", "Received trees", "Active trees"]))


def participate(args):
    config = load_config(args)
    column_map = None
    if args.column_map:
        with open(args.column_map) as column_map_file:
            column_map = json.load(column_map_file)
    dataset = load_survival_csv(args.data, config.time_column, config.event_column,
                                config.categorical_columns)

    client = Client(parse_address(args.connect), args.client_id, dataset, config.forest, args.seed,
                    column_map, config.update_method, config.update_weighting, args.test_fraction,
                    args.timeout_secs, args.retries, max_frame_size=args.max_frame_bytes)
    record = client.run()
    if not args.quiet:
        print(consoleutils.format_table(sorted(record.items()), ["Field", "Value"]))


def fetch_data(args):
    fetch_gbsg2(args.out, args.quiet)


def _emit_report(records, out, draw_svg, is_quiet):
    result = report(records)
    with open(os.path.join(out, "summary.csv"), "w", newline="") as summary_file, \
            open(os.path.join(out, "paired_tests.csv"), "w", newline="") as paired_tests_file:
        writer = ResultWriter(None, summary_file, paired_tests_file)
        writer.write_summary(result)
        writer.write_paired_tests(result)
    if draw_svg:
        with open(os.path.join(out, "boxplot.svg"), "wb") as svg_file:
            BoxplotWriter().write(result, svg_file)

    if not is_quiet:
        print(consoleutils.format_table(
            [(summary.configuration, summary.n, summary.n_excluded, summary.mean, summary.sd,
              summary.median) for summary in result.summaries],
            ["Configuration", "N", "Excluded", "Mean", "SD", "Median"]))
        if result.paired_tests:
            print()
            print(consoleutils.format_table(
                [(test.baseline, test.comparison, test.n_pairs, test.mean_delta,
                  test.wilcoxon_p, test.paired_t_p) for test in result.paired_tests],
                ["Baseline", "Comparison", "Pairs", "Mean delta", "Wilcoxon p", "Paired t p"],
                float_format=".3g"))
        for note in result.notes:
            print(note)


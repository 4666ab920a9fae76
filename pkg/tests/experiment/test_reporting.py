"""Contains tests for summaries and paired comparisons of run records"""
import pytest

from fedsurv.exceptions.FedSurvError import FedSurvError
from fedsurv.experiment.reporting import (report, summarize, comparison_pairs, paired_values,
                                          PARTICIPATION_NOTE, SRF_IMPUTATION_NOTE, CHANCE_LEVEL)
from fedsurv.experiment.RunRecord import (RunRecord, LOCAL, CENTRALIZED, CENTRALIZED_SRF,
                                          federated_configuration, federated_size)


def records_of(configuration, values, site_split=0):
    return [RunRecord(configuration, site_split, fold, 0, value, 10,
                      0 if value is None else 20, 1)
            for fold, value in enumerate(values)]


def test_constant_configuration():
    result = report(records_of(LOCAL, [0.6] * 5))

    summary = result.summary_of(LOCAL)
    assert 0.6 == pytest.approx(summary.mean)
    assert 0.0 == summary.sd
    assert 5 == summary.n
    assert CHANCE_LEVEL == result.chance_level
    assert [] == result.paired_tests


def test_summaries_ascend_by_mean():
    records = (records_of(CENTRALIZED, [0.7, 0.72, 0.68]) + records_of(LOCAL, [0.6, 0.62, 0.58])
               + records_of(federated_configuration(2), [0.64, 0.66, 0.65]))

    result = report(records)

    assert [LOCAL, "Fed(2)", CENTRALIZED] == [summary.configuration for summary in result.summaries]
    assert PARTICIPATION_NOTE in result.notes


def test_hand_computed_pairs():
    local = [0.60, 0.55, 0.70, 0.65]
    federated = [0.62, 0.58, 0.69, 0.70]
    srf = [0.63, 0.57, 0.71, 0.66]
    records = (records_of(LOCAL, local) + records_of("Fed(3)", federated)
               + records_of(CENTRALIZED_SRF, srf) + records_of("Fed(2)", local))

    result = report(records)

    assert [(LOCAL, "Fed(3)"), ("Fed(3)", CENTRALIZED_SRF), (LOCAL, CENTRALIZED_SRF)] == \
        [(test.baseline, test.comparison) for test in result.paired_tests]
    first = result.paired_tests[0]
    assert 4 == first.n_pairs
    assert pytest.approx(0.0225) == first.mean_delta
    assert pytest.approx(0.025) == first.median_delta
    assert pytest.approx(-0.005) == result.paired_tests[1].mean_delta


def test_excluded_records_are_counted():
    records = records_of(LOCAL, [0.6, None, 0.7]) + records_of(CENTRALIZED_SRF, [0.65, 0.5, 0.75])

    result = report(records)

    assert (2, 1) == (result.summary_of(LOCAL).n, result.summary_of(LOCAL).n_excluded)
    assert any(note.startswith(LOCAL + ": 1 record") for note in result.notes)
    assert 2 == result.paired_tests[0].n_pairs


def test_paired_values_match_cells():
    records = records_of(LOCAL, [0.5, 0.6]) + records_of(LOCAL, [0.7], site_split=1) \
        + records_of(CENTRALIZED_SRF, [0.55], site_split=1) + records_of(CENTRALIZED_SRF, [0.65, 0.66])

    assert ([0.5, 0.6, 0.7], [0.65, 0.66, 0.55]) == paired_values(records, LOCAL, CENTRALIZED_SRF)


def test_box_statistics():
    summary = summarize(LOCAL, [0.5, 0.52, 0.54, 0.56, 0.58, 0.95])

    assert (0.95,) == summary.outliers
    assert 0.58 == summary.whisker_high
    assert 0.5 == summary.whisker_low
    assert summary.q1 <= summary.median <= summary.q3


def test_comparison_pairs_without_federation():
    assert [(LOCAL, CENTRALIZED_SRF)] == comparison_pairs([LOCAL, CENTRALIZED_SRF, CENTRALIZED])


def test_federated_names():
    assert "Fed(10)" == federated_configuration(10)
    assert 10 == federated_size("Fed(10)")
    assert federated_size(LOCAL) is None


def test_empty_record_set():
    with pytest.raises(FedSurvError) as error:
        report([])
    assert "empty record set" == error.value.message


def test_imputation_note_accompanies_centralized_srf():
    with_srf = report(records_of(LOCAL, [0.6, 0.7]) + records_of(CENTRALIZED_SRF, [0.65, 0.7]))
    without_srf = report(records_of(LOCAL, [0.6, 0.7]) + records_of(CENTRALIZED, [0.7, 0.75]))

    assert SRF_IMPUTATION_NOTE in with_srf.notes
    assert SRF_IMPUTATION_NOTE not in without_srf.notes

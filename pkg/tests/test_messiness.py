"""Export-time noise: duplicates and irrelevant comments, always ledgered."""

import copy
from dataclasses import replace
from datetime import timedelta

from rpmsim import (
    AlertRuleParams,
    LedgerKind,
    MessinessParams,
    cohorts_equal,
    inject_messiness,
    scan,
    simulate,
)
from rpmsim.sim import IRRELEVANT_COMMENTS

from oracles import word_count


def _clean(small_config, **messiness):
    config = replace(small_config,
                     messiness=MessinessParams(**messiness))
    return simulate(config)


def test_zero_probabilities_change_nothing(small_config):
    cohort = _clean(small_config, p_duplicate=0.0, p_irrelevant_comment=0.0,
                    p_situated_comment=0.12)
    before = copy.deepcopy(cohort)
    after = inject_messiness(cohort)
    assert after is cohort
    assert cohorts_equal(after, before)
    assert after.truth_ledger == []


def test_certain_duplication_copies_every_row_once(small_config):
    cohort = _clean(small_config, p_duplicate=1.0, p_irrelevant_comment=0.0,
                    p_situated_comment=0.12)
    n_truth = len(cohort.measurements)
    inject_messiness(cohort)
    dups = [m for m in cohort.measurements if m.id.startswith("m-dup-")]
    assert len(dups) == n_truth
    assert len(cohort.measurements) == 2 * n_truth

    by_id = {m.id: m for m in cohort.measurements}
    entries = [e for e in cohort.truth_ledger
               if e.kind is LedgerKind.INJECTED_DUPLICATE]
    assert len(entries) == n_truth
    for entry in entries:
        dup = by_id[entry.injected_id]
        orig = by_id[entry.original_id]
        assert dup.vital is orig.vital
        assert dup.value == orig.value
        assert dup.patient_id == orig.patient_id
        assert dup.comment == orig.comment
        delta = dup.timestamp - orig.timestamp
        assert timedelta(seconds=1) <= delta <= timedelta(seconds=120)


def test_injection_is_idempotent(small_config):
    cohort = _clean(small_config, p_duplicate=0.5, p_irrelevant_comment=0.5,
                    p_situated_comment=0.12)
    inject_messiness(cohort)
    once = copy.deepcopy(cohort)
    inject_messiness(cohort)
    assert cohorts_equal(cohort, once)


def test_truth_measurements_strips_exactly_the_duplicates(small_config):
    cohort = _clean(small_config, p_duplicate=1.0, p_irrelevant_comment=0.0,
                    p_situated_comment=0.12)
    truth_before = [m.id for m in cohort.measurements]
    inject_messiness(cohort)
    assert [m.id for m in cohort.truth_measurements()] == truth_before


def test_ledger_filtered_rescan_matches_recorded_alerts(cohort_for_seed):
    cohort = cohort_for_seed(4)
    assert cohort.truth_ledger, "fixture cohort should be messy"
    params = AlertRuleParams.from_config(cohort.config)
    rescanned = scan(cohort.measurements, cohort.patients, params,
                     exclude=cohort.injected_duplicate_ids())
    recorded = {(a.patient_id, a.measurement_id) for a in cohort.alerts}
    assert {(a.patient_id, a.measurement_id) for a in rescanned} == recorded


def test_duplicates_only_add_alerts_on_duplicate_rows(cohort_for_seed):
    # dup rows copy the original value, so medians per day are unchanged and
    # a naive rescan differs from truth only by alerts on dup ids themselves
    cohort = cohort_for_seed(4)
    params = AlertRuleParams.from_config(cohort.config)
    naive = scan(cohort.measurements, cohort.patients, params)
    truth = scan(cohort.measurements, cohort.patients, params,
                 exclude=cohort.injected_duplicate_ids())
    naive_pairs = {(a.patient_id, a.measurement_id) for a in naive}
    truth_pairs = {(a.patient_id, a.measurement_id) for a in truth}
    dup_ids = cohort.injected_duplicate_ids()
    assert truth_pairs <= naive_pairs
    assert all(mid in dup_ids for _, mid in naive_pairs - truth_pairs)


def test_irrelevant_comments_fill_only_blank_rows(small_config):
    config = replace(small_config, seed=31)
    cohort = _clean(config, p_duplicate=0.0, p_irrelevant_comment=1.0,
                    p_situated_comment=0.12)
    had_comment = {m.id for m in cohort.measurements if m.comment}
    inject_messiness(cohort)
    injected = {e.injected_id for e in cohort.truth_ledger
                if e.kind is LedgerKind.INJECTED_IRRELEVANT_COMMENT}
    for m in cohort.measurements:
        assert m.comment, "p=1 should leave no row blank"
        if m.id in injected:
            assert m.id not in had_comment
            assert m.comment in IRRELEVANT_COMMENTS
        else:
            assert m.id in had_comment


def test_irrelevant_pool_is_short_smalltalk():
    assert len(set(IRRELEVANT_COMMENTS)) == len(IRRELEVANT_COMMENTS) >= 6
    for text in IRRELEVANT_COMMENTS:
        assert word_count(text) <= 12

"""Alert rules: thresholds, abrupt changes, severity, and the rescan route."""

from datetime import datetime, timedelta
from random import Random

from rpmsim import AlertRule, AlertRuleParams, Severity, Vital, evaluate, scan
from rpmsim.alerts import alert_key, alert_keys, window_values

from helpers import make_measurement, make_patient
from oracles import trailing_window_median

PARAMS = AlertRuleParams(
    abrupt_delta={v: 2.0 for v in Vital},
    abrupt_window_days=3,
    escalation_margin={v: 1.2 for v in Vital},
)

PATIENT = make_patient()  # weight thresholds (75, 85)


def _weight(mid, day, hour, value):
    return make_measurement(
        mid, timestamp=datetime(2024, 1, day, hour, 0, 0), value=value)


def test_value_above_high_threshold_alerts():
    alert = evaluate(_weight("m-0000001", 10, 8, 86.0), PATIENT, [], PARAMS)
    assert alert is not None
    assert alert.rules == frozenset({AlertRule.THRESHOLD_HIGH})
    assert alert.measurement_id == "m-0000001"
    assert alert.created_at == datetime(2024, 1, 10, 8, 0, 0)


def test_value_exactly_on_the_threshold_does_not_alert():
    assert evaluate(_weight("m-0000001", 10, 8, 85.0), PATIENT, [], PARAMS) is None
    assert evaluate(_weight("m-0000002", 10, 9, 75.0), PATIENT, [], PARAMS) is None


def test_value_below_low_threshold_alerts():
    alert = evaluate(_weight("m-0000001", 10, 8, 74.9), PATIENT, [], PARAMS)
    assert alert.rules == frozenset({AlertRule.THRESHOLD_LOW})


def test_abrupt_change_against_trailing_median():
    history = [
        _weight("m-0000001", 7, 8, 80.0),
        _weight("m-0000002", 8, 8, 80.5),
        _weight("m-0000003", 9, 8, 79.5),
    ]
    # median 80.0, today 82.5: deviation 2.5 > delta 2.0, inside thresholds
    alert = evaluate(_weight("m-0000004", 10, 8, 82.5), PATIENT, history, PARAMS)
    assert alert.rules == frozenset({AlertRule.ABRUPT_CHANGE})
    # deviation exactly at delta stays quiet
    assert evaluate(_weight("m-0000005", 10, 9, 82.0), PATIENT, history, PARAMS) is None


def test_first_measurement_has_no_abrupt_window():
    assert evaluate(_weight("m-0000001", 10, 8, 80.0), PATIENT, [], PARAMS) is None


def test_same_day_rows_do_not_feed_the_window():
    history = [_weight("m-0000001", 10, 7, 80.0)]
    # only row is from today; no window, no abrupt rule
    assert evaluate(_weight("m-0000002", 10, 8, 83.0), PATIENT, history, PARAMS) is None


def test_severity_escalates_on_margin_exceedance():
    mild = evaluate(_weight("m-0000001", 10, 8, 86.1), PATIENT, [], PARAMS)
    high = evaluate(_weight("m-0000002", 10, 9, 86.2), PATIENT, [], PARAMS)
    assert mild.severity is Severity.MILD
    assert high.severity is Severity.HIGH  # exceedance 1.2 >= margin 1.2


def test_severity_escalates_on_double_abrupt_deviation():
    history = [_weight("m-0000001", 9, 8, 80.0)]
    mild = evaluate(_weight("m-0000002", 10, 8, 83.9), PATIENT, history, PARAMS)
    high = evaluate(_weight("m-0000003", 10, 9, 84.0), PATIENT, history, PARAMS)
    assert mild.severity is Severity.MILD  # deviation 3.9 < 2 * delta
    assert high.severity is Severity.HIGH  # deviation 4.0 >= 2 * delta


def test_window_keeps_only_the_latest_row_per_day():
    history = [
        _weight("m-0000001", 9, 7, 70.0),
        _weight("m-0000002", 9, 9, 80.0),  # later same day, wins
        _weight("m-0000003", 6, 8, 99.0),  # older than the 3-day window
    ]
    today = _weight("m-0000004", 10, 8, 81.0)
    assert window_values(today, history, 3) == [80.0]


def test_window_matches_the_naive_oracle():
    rng = Random(20240110)
    base = datetime(2024, 1, 1, 6, 0, 0)
    history = []
    for i in range(60):
        ts = base + timedelta(days=rng.randrange(12), hours=rng.randrange(12),
                              seconds=rng.randrange(3600))
        history.append(make_measurement(f"m-{i + 1:07d}", timestamp=ts,
                                        value=round(rng.uniform(70, 90), 1)))
    today = make_measurement("m-0009999",
                             timestamp=base + timedelta(days=12, hours=3),
                             value=80.0)
    for window_days in (1, 2, 3, 5):
        values = window_values(today, history, window_days)
        oracle = trailing_window_median(
            [(m.timestamp, m.id, m.value) for m in history],
            today.timestamp.date(), window_days)
        if oracle is None:
            assert values == []
        else:
            import statistics
            assert statistics.median(values) == oracle


def test_scan_empty_stream():
    assert scan([], [PATIENT], PARAMS) == []


def test_scan_replays_evaluate_measurement_by_measurement():
    rng = Random(7)
    rows = []
    for i in range(120):
        rows.append(make_measurement(
            f"m-{i + 1:07d}",
            timestamp=datetime(2024, 1, 1, 8, 0, 0)
            + timedelta(days=i // 4, minutes=i % 4),
            value=round(rng.uniform(72, 88), 1)))
    found = scan(rows, [PATIENT], PARAMS)

    history = []
    expected = []
    for m in sorted(rows, key=lambda m: (m.timestamp, m.id)):
        alert = evaluate(m, PATIENT, history, PARAMS)
        if alert is not None:
            expected.append(alert)
        history.append(m)
    assert alert_keys(found) == alert_keys(expected)
    assert len(found) == len(expected)


def test_scan_excluded_ids_leave_no_trace():
    quiet = [
        _weight("m-0000001", 7, 8, 80.0),
        _weight("m-0000002", 8, 8, 80.0),
    ]
    # an outlier row that would drag the median and suppress the abrupt rule
    outlier = _weight("m-0000003", 9, 8, 95.0)
    today = _weight("m-0000004", 10, 8, 83.0)

    with_outlier = scan(quiet + [outlier, today], [PATIENT], PARAMS)
    without = scan(quiet + [outlier, today], [PATIENT], PARAMS,
                   exclude=["m-0000003"])
    # kept in: the outlier itself alerts and shifts today's median
    assert ("pt-001", "m-0000003") in {k[:2] for k in alert_keys(with_outlier)}
    # excluded: today alerts against the quiet median instead
    keys = alert_keys(without)
    assert {k[:2] for k in keys} == {("pt-001", "m-0000004")}
    assert ("abrupt_change",) in {k[2] for k in keys}


def test_scan_ignores_unknown_patients():
    stray = make_measurement("m-0000001", patient_id="pt-404", value=120.0)
    assert scan([stray], [PATIENT], PARAMS) == []


def test_raising_the_high_threshold_never_adds_alerts(cohort_for_seed):
    """Monotonicity, checked against a real cohort's stream."""
    cohort = cohort_for_seed(2)
    params = AlertRuleParams.from_config(cohort.config)
    exclude = cohort.injected_duplicate_ids()
    baseline = alert_keys(scan(cohort.measurements, cohort.patients, params,
                               exclude=exclude))

    import copy
    relaxed_patients = copy.deepcopy(cohort.patients)
    for p in relaxed_patients:
        low, high = p.thresholds[Vital.SYSTOLIC_BP]
        p.thresholds[Vital.SYSTOLIC_BP] = (low, high + 10.0)
    relaxed = alert_keys(scan(cohort.measurements, relaxed_patients, params,
                              exclude=exclude))

    def pairs(keys, rule=None):
        return {k[:2] for k in keys if rule is None or rule in k[2]}

    # no new alerting measurements, and no new threshold_high rules anywhere
    assert pairs(relaxed) <= pairs(baseline)
    assert pairs(relaxed, "threshold_high") <= pairs(baseline, "threshold_high")
    # and the relaxation genuinely removed something on this seed
    assert pairs(relaxed, "threshold_high") < pairs(baseline, "threshold_high")


def test_window_locality(cohort_for_seed):
    """History older than the window never changes the outcome."""
    cohort = cohort_for_seed(2)
    params = AlertRuleParams.from_config(cohort.config)
    patient = cohort.patients[0]
    rows = sorted(
        (m for m in cohort.truth_measurements()
         if m.patient_id == patient.id and m.vital is Vital.WEIGHT),
        key=lambda m: (m.timestamp, m.id))
    window = params.abrupt_window_days
    for idx in range(20, 60):
        m = rows[idx]
        full = evaluate(m, patient, rows[:idx], params)
        cutoff = m.timestamp.date() - timedelta(days=window)
        local_history = [h for h in rows[:idx] if h.timestamp.date() >= cutoff]
        local = evaluate(m, patient, local_history, params)
        if full is None:
            assert local is None
        else:
            assert local is not None
            assert alert_key(full) == alert_key(local)
            assert full.severity == local.severity

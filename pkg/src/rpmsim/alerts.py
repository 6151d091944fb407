"""Threshold and abrupt-change alerting over measurement streams.

Two routes produce alerts: the simulation calls `evaluate` as each measurement
lands, and `scan` replays the same rule over a finished stream.  Keeping both
routes independent lets one verify the other.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .domain import (
    Alert,
    AlertRule,
    AlertStatus,
    Measurement,
    PatientProfile,
    Severity,
    Vital,
)
from .config import DEFAULT_ABRUPT_DELTA, DEFAULT_ESCALATION_MARGIN, SimulationConfig


@dataclass
class AlertRuleParams:
    """Tuning knobs shared by live evaluation and batch rescans."""

    abrupt_delta: dict[Vital, float] = field(
        default_factory=lambda: dict(DEFAULT_ABRUPT_DELTA))
    abrupt_window_days: int = 3
    escalation_margin: dict[Vital, float] = field(
        default_factory=lambda: dict(DEFAULT_ESCALATION_MARGIN))

    @classmethod
    def from_config(cls, config: SimulationConfig) -> "AlertRuleParams":
        return cls(
            abrupt_delta=dict(config.abrupt_delta),
            abrupt_window_days=config.abrupt_window_days,
            escalation_margin=dict(config.escalation_margin),
        )


def window_values(measurement: Measurement, history: Sequence[Measurement],
                  window_days: int) -> list[float]:
    """Trailing-window values: one per prior calendar day, latest row wins.

    Collapsing each day to its last reading keeps re-submitted rows (same
    value, seconds apart) from double-weighting the median.
    """
    mdate = measurement.timestamp.date()
    last_per_day: dict[object, Measurement] = {}
    for h in history:
        hdate = h.timestamp.date()
        age = (mdate - hdate).days
        if 1 <= age <= window_days:
            cur = last_per_day.get(hdate)
            if cur is None or (h.timestamp, h.id) > (cur.timestamp, cur.id):
                last_per_day[hdate] = h
    return [last_per_day[d].value for d in sorted(last_per_day)]


def evaluate(measurement: Measurement, profile: PatientProfile,
             history: Sequence[Measurement], params: AlertRuleParams,
             alert_id: str = "") -> Optional[Alert]:
    """Apply every rule to one measurement; None when nothing triggers.

    `history` must hold only strictly earlier measurements of the same
    patient and vital.  Threshold comparisons are strict: a value sitting
    exactly on a limit is at the limit, not beyond it.
    """
    vital = measurement.vital
    low, high = profile.thresholds[vital]
    value = measurement.value

    rules: set[AlertRule] = set()
    if value > high:
        rules.add(AlertRule.THRESHOLD_HIGH)
    if value < low:
        rules.add(AlertRule.THRESHOLD_LOW)

    deviation: Optional[float] = None
    window = window_values(measurement, history, params.abrupt_window_days)
    if window:
        deviation = abs(value - statistics.median(window))
        if deviation > params.abrupt_delta[vital]:
            rules.add(AlertRule.ABRUPT_CHANGE)

    if not rules:
        return None

    margin = params.escalation_margin[vital]
    exceedance = max(value - high, low - value)
    severity = Severity.MILD
    if exceedance >= margin:
        severity = Severity.HIGH
    elif deviation is not None and deviation >= 2 * params.abrupt_delta[vital]:
        severity = Severity.HIGH

    return Alert(
        id=alert_id,
        patient_id=measurement.patient_id,
        measurement_id=measurement.id,
        rules=frozenset(rules),
        severity=severity,
        created_at=measurement.timestamp,
        status=AlertStatus.OPEN,
    )


def scan(measurements: Iterable[Measurement],
         profiles: Iterable[PatientProfile],
         params: AlertRuleParams,
         exclude: Iterable[str] = ()) -> list[Alert]:
    """Replay `evaluate` over a whole stream in chronological order.

    Ids in `exclude` (injected rows from a truth ledger) are dropped
    entirely: never evaluated, never part of any window.  The result is a
    pure function of the inputs; alert ids are left blank.
    """
    excluded = set(exclude)
    by_patient = {p.id: p for p in profiles}
    ordered = sorted(
        (m for m in measurements if m.id not in excluded),
        key=lambda m: (m.timestamp, m.id),
    )
    history: dict[tuple[str, Vital], list[Measurement]] = {}
    found: list[Alert] = []
    for m in ordered:
        profile = by_patient.get(m.patient_id)
        if profile is None:
            continue
        key = (m.patient_id, m.vital)
        prior = history.setdefault(key, [])
        alert = evaluate(m, profile, prior, params)
        if alert is not None:
            found.append(alert)
        prior.append(m)
    return found


def alert_key(alert: Alert) -> tuple[str, str, tuple[str, ...]]:
    """Canonical identity of an alert for cross-route set comparison."""
    return (alert.patient_id, alert.measurement_id,
            tuple(sorted(r.value for r in alert.rules)))


def alert_keys(alerts: Iterable[Alert]) -> set[tuple[str, str, tuple[str, ...]]]:
    return {alert_key(a) for a in alerts}

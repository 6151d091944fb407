"""Aggregate numbers over a cohort, always computed from the truth stream.

Injected duplicate rows never count as measurements here, so the alert rate
reported for a messy export matches the rate of the clean simulation that
produced it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import timedelta
from typing import Optional

from .domain import (
    AlertStatus,
    Channel,
    Cohort,
    LedgerKind,
    Vital,
    VITAL_ORDER,
    VITAL_UNITS,
)

# Smallest change that counts as a trend rather than display jitter.
TREND_EPSILON: dict[Vital, float] = {
    Vital.WEIGHT: 0.05,
    Vital.SYSTOLIC_BP: 0.5,
    Vital.DIASTOLIC_BP: 0.5,
    Vital.HEART_RATE: 0.5,
}


@dataclass
class CohortStats:
    measurement_count: int = 0
    alert_count: int = 0
    alert_rate: float = 0.0
    open_alert_count: int = 0
    response_count: int = 0
    consultation_count: int = 0
    medication_change_count: int = 0
    admission_count: int = 0
    admitted_patient_days: int = 0
    injected_duplicate_count: int = 0
    injected_comment_count: int = 0
    per_hcp_responses: dict[str, int] = field(default_factory=dict)
    per_patient_alerts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "measurement_count": self.measurement_count,
            "alert_count": self.alert_count,
            "alert_rate": self.alert_rate,
            "open_alert_count": self.open_alert_count,
            "response_count": self.response_count,
            "consultation_count": self.consultation_count,
            "medication_change_count": self.medication_change_count,
            "admission_count": self.admission_count,
            "admitted_patient_days": self.admitted_patient_days,
            "injected_duplicate_count": self.injected_duplicate_count,
            "injected_comment_count": self.injected_comment_count,
            "per_hcp_responses": dict(sorted(self.per_hcp_responses.items())),
            "per_patient_alerts": dict(sorted(self.per_patient_alerts.items())),
        }


def cohort_stats(cohort: Cohort) -> CohortStats:
    truth = cohort.truth_measurements()
    stats = CohortStats(
        measurement_count=len(truth),
        alert_count=len(cohort.alerts),
        open_alert_count=sum(1 for a in cohort.alerts
                             if a.status is AlertStatus.OPEN),
        response_count=len(cohort.responses),
        consultation_count=len(cohort.consultations),
        medication_change_count=len(cohort.medication_changes),
        admission_count=len(cohort.admissions),
    )
    if truth:
        stats.alert_rate = stats.alert_count / stats.measurement_count

    if cohort.clock is not None:
        horizon = cohort.clock + timedelta(days=1)
        for adm in cohort.admissions:
            elapsed = (min(adm.end, horizon) - adm.start).days
            stats.admitted_patient_days += max(elapsed, 0)

    stats.per_hcp_responses = {h.id: 0 for h in cohort.hcps}
    for r in cohort.responses:
        stats.per_hcp_responses[r.hcp_id] = \
            stats.per_hcp_responses.get(r.hcp_id, 0) + 1
    stats.per_patient_alerts = {p.id: 0 for p in cohort.patients}
    for a in cohort.alerts:
        stats.per_patient_alerts[a.patient_id] = \
            stats.per_patient_alerts.get(a.patient_id, 0) + 1

    for entry in cohort.truth_ledger:
        if entry.kind is LedgerKind.INJECTED_DUPLICATE:
            stats.injected_duplicate_count += 1
        else:
            stats.injected_comment_count += 1
    return stats


def patient_summary(cohort: Cohort, patient_id: str) -> dict:
    """Latest values, 7-day trends, and contact info for one patient."""
    profile = cohort.patient_by_id(patient_id)
    rows = sorted(
        (m for m in cohort.truth_measurements() if m.patient_id == patient_id),
        key=lambda m: (m.timestamp, m.id),
    )
    vitals: dict[str, dict] = {}
    for vital in VITAL_ORDER:
        series = [m for m in rows if m.vital is vital]
        if not series:
            vitals[vital.value] = {
                "latest": None, "latest_at": None,
                "trend": None, "unit": VITAL_UNITS[vital],
            }
            continue
        latest = series[-1]
        anchor = cohort.clock if cohort.clock is not None \
            else latest.timestamp.date()
        window = [m for m in series
                  if 0 <= (anchor - m.timestamp.date()).days < 7]
        trend: Optional[str] = None
        if len(window) >= 2:
            delta = window[-1].value - window[0].value
            eps = TREND_EPSILON[vital]
            trend = "up" if delta > eps else "down" if delta < -eps else "flat"
        vitals[vital.value] = {
            "latest": latest.value,
            "latest_at": latest.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "trend": trend,
            "unit": VITAL_UNITS[vital],
        }

    last_contact: Optional[dict] = None
    consults = sorted(
        (c for c in cohort.consultations if c.patient_id == patient_id),
        key=lambda c: (c.timestamp, c.id),
    )
    if consults:
        last = consults[-1]
        last_contact = {
            "date": last.timestamp.date().isoformat(),
            "channel": last.channel.value,
        }

    return {
        "patient_id": profile.id,
        "display_name": profile.display_name,
        "stability_class": profile.stability_class.value,
        "vitals": vitals,
        "open_alert_count": sum(
            1 for a in cohort.alerts
            if a.patient_id == patient_id and a.status is AlertStatus.OPEN),
        "admission_count": sum(
            1 for a in cohort.admissions if a.patient_id == patient_id),
        "medication_change_count": sum(
            1 for mc in cohort.medication_changes
            if mc.patient_id == patient_id),
        "consultation_count": len(consults),
        "last_contact": last_contact,
    }

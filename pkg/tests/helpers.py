"""Small hand-built cohorts and records for unit tests."""

from __future__ import annotations

from datetime import date, datetime

from rpmsim import (
    Alert,
    AlertRule,
    AlertStatus,
    Cohort,
    DocStyle,
    Experience,
    HcpProfile,
    HcpRole,
    HomeSupport,
    Measurement,
    PatientProfile,
    Severity,
    SimulationConfig,
    StabilityClass,
    Vital,
)

DAY0 = date(2024, 1, 1)  # a Monday


def make_patient(pid: str = "pt-001", **overrides) -> PatientProfile:
    fields = dict(
        id=pid,
        display_name="Jan de Vries",
        age=71,
        comorbidities=("type 2 diabetes",),
        stability_class=StabilityClass.STABLE,
        adherence=0.9,
        home_support=HomeSupport.HIGH,
        enrollment_date=date(2023, 11, 15),
        baselines={
            Vital.WEIGHT: 80.0,
            Vital.SYSTOLIC_BP: 130.0,
            Vital.DIASTOLIC_BP: 80.0,
            Vital.HEART_RATE: 72.0,
        },
        thresholds={
            Vital.WEIGHT: (75.0, 85.0),
            Vital.SYSTOLIC_BP: (115.0, 145.0),
            Vital.DIASTOLIC_BP: (70.0, 90.0),
            Vital.HEART_RATE: (58.0, 86.0),
        },
    )
    fields.update(overrides)
    return PatientProfile(**fields)


def make_hcp(hid: str = "hcp-01", **overrides) -> HcpProfile:
    fields = dict(
        id=hid,
        display_name="Nurse Anke",
        role=HcpRole.NURSE,
        experience=Experience.EXPERIENCED,
        confidence=0.8,
        doc_style=DocStyle.TERSE,
        duty_days=(0, 1, 2, 3, 4),
    )
    fields.update(overrides)
    return HcpProfile(**fields)


def make_measurement(mid: str = "m-0000001", *, patient_id: str = "pt-001",
                     timestamp: datetime | None = None,
                     vital: Vital = Vital.WEIGHT,
                     value: float = 80.0,
                     comment: str | None = None) -> Measurement:
    if timestamp is None:
        timestamp = datetime(2024, 1, 10, 8, 0, 0)
    return Measurement(id=mid, patient_id=patient_id, timestamp=timestamp,
                       vital=vital, value=value, comment=comment)


def make_alert(aid: str = "al-00001", *, measurement: Measurement,
               rules=frozenset({AlertRule.THRESHOLD_HIGH}),
               severity: Severity = Severity.MILD,
               status: AlertStatus = AlertStatus.OPEN,
               assigned_hcp_id: str | None = None) -> Alert:
    return Alert(
        id=aid,
        patient_id=measurement.patient_id,
        measurement_id=measurement.id,
        rules=frozenset(rules),
        severity=severity,
        created_at=measurement.timestamp,
        status=status,
        assigned_hcp_id=assigned_hcp_id,
    )


def make_cohort(patients=None, hcps=None, **overrides) -> Cohort:
    """Cohort shell with a valid default config and empty event streams."""
    config = overrides.pop("config", SimulationConfig(n_patients=0, n_hcps=0,
                                                      duration_days=0))
    cohort = Cohort(config=config, **overrides)
    cohort.patients = list(patients) if patients is not None else []
    cohort.hcps = list(hcps) if hcps is not None else []
    return cohort

"""Entity types, integrity rules, and timeline assembly for the RPM cohort model.

The cohort is a closed world of six interacting record kinds (patients, HCPs,
measurements, alerts + responses, medication changes, admissions) plus the
consultations they generate.  Everything here is plain data: validation never
raises on bad records, it reports them, so that deliberately messy exports can
still be inspected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from enum import Enum
from typing import Optional


class NotFoundError(KeyError):
    """Raised when a referenced entity id does not exist in a cohort."""


class ConflictError(RuntimeError):
    """Raised when a mutation races a state it cannot be applied to."""


class Vital(str, Enum):
    WEIGHT = "weight"
    SYSTOLIC_BP = "systolic_bp"
    DIASTOLIC_BP = "diastolic_bp"
    HEART_RATE = "heart_rate"


# Fixed evaluation and export order for the four tracked vitals.
VITAL_ORDER: tuple[Vital, ...] = (
    Vital.WEIGHT,
    Vital.SYSTOLIC_BP,
    Vital.DIASTOLIC_BP,
    Vital.HEART_RATE,
)

VITAL_UNITS: dict[Vital, str] = {
    Vital.WEIGHT: "kg",
    Vital.SYSTOLIC_BP: "mmHg",
    Vital.DIASTOLIC_BP: "mmHg",
    Vital.HEART_RATE: "bpm",
}

VITAL_LABELS: dict[Vital, str] = {
    Vital.WEIGHT: "weight",
    Vital.SYSTOLIC_BP: "systolic pressure",
    Vital.DIASTOLIC_BP: "diastolic pressure",
    Vital.HEART_RATE: "heart rate",
}

# Decimal places used both in-memory and on disk; weight is device-reported
# to 0.1 kg, pressures and heart rate as integers.
VITAL_DECIMALS: dict[Vital, int] = {
    Vital.WEIGHT: 1,
    Vital.SYSTOLIC_BP: 0,
    Vital.DIASTOLIC_BP: 0,
    Vital.HEART_RATE: 0,
}

# Hard floors keeping generated values physiologically positive.
VITAL_FLOORS: dict[Vital, float] = {
    Vital.WEIGHT: 20.0,
    Vital.SYSTOLIC_BP: 50.0,
    Vital.DIASTOLIC_BP: 30.0,
    Vital.HEART_RATE: 25.0,
}


def quantize_vital(vital: Vital, value: float) -> float:
    """Snap a raw value to the precision the vital is recorded at."""
    return float(f"{value:.{VITAL_DECIMALS[vital]}f}")


def format_vital(vital: Vital, value: float) -> str:
    if VITAL_DECIMALS[vital] == 0:
        return str(int(round(value)))
    return f"{value:.{VITAL_DECIMALS[vital]}f}"


class StabilityClass(str, Enum):
    STABLE = "stable"
    FLUCTUATING = "fluctuating"
    SPIKY = "spiky"


class HomeSupport(str, Enum):
    HIGH = "high"
    LOW = "low"


class HcpRole(str, Enum):
    NURSE = "nurse"
    PHYSICIAN = "physician"


class Experience(str, Enum):
    NOVICE = "novice"
    EXPERIENCED = "experienced"


class DocStyle(str, Enum):
    TERSE = "terse"
    VERBOSE = "verbose"


class AlertRule(str, Enum):
    THRESHOLD_LOW = "threshold_low"
    THRESHOLD_HIGH = "threshold_high"
    ABRUPT_CHANGE = "abrupt_change"


class Severity(str, Enum):
    MILD = "mild"
    HIGH = "high"


class AlertStatus(str, Enum):
    OPEN = "open"
    RESOLVED = "resolved"


class ResponseAction(str, Enum):
    CALL_PATIENT = "call_patient"
    ADJUST_MEDICATION = "adjust_medication"
    CONTACT_COLLEAGUE = "contact_colleague"
    DISMISS = "dismiss"


class MedChange(str, Enum):
    START = "start"
    STOP = "stop"
    INCREASE = "increase"
    DECREASE = "decrease"


class EffectDirection(str, Enum):
    UP = "up"
    DOWN = "down"


class Channel(str, Enum):
    PHONE = "phone"
    IN_PERSON = "in_person"


class LedgerKind(str, Enum):
    INJECTED_DUPLICATE = "injected_duplicate"
    INJECTED_IRRELEVANT_COMMENT = "injected_irrelevant_comment"


WEEKDAY_NAMES = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")
FRIDAY = 4


@dataclass
class PatientProfile:
    """Persona parameters driving one patient's synthetic trajectory."""

    id: str
    display_name: str
    age: int
    comorbidities: tuple[str, ...]
    stability_class: StabilityClass
    adherence: float  # daily submission probability, [0, 1]
    home_support: HomeSupport
    enrollment_date: date
    baselines: dict[Vital, float]
    thresholds: dict[Vital, tuple[float, float]]  # vital -> (low, high)


@dataclass
class HcpProfile:
    """Persona parameters driving one HCP's triage behavior."""

    id: str
    display_name: str
    role: HcpRole
    experience: Experience
    confidence: float  # [0, 1]
    doc_style: DocStyle
    duty_days: tuple[int, ...]  # weekday numbers, 0=Monday .. 6=Sunday


@dataclass
class Measurement:
    id: str
    patient_id: str
    timestamp: datetime  # naive UTC
    vital: Vital
    value: float
    comment: Optional[str] = None


@dataclass
class Alert:
    id: str
    patient_id: str
    measurement_id: str
    rules: frozenset[AlertRule]
    severity: Severity
    created_at: datetime
    status: AlertStatus = AlertStatus.OPEN
    assigned_hcp_id: Optional[str] = None


@dataclass
class AlertResponse:
    id: str
    alert_id: str
    hcp_id: str
    action: ResponseAction
    note: str
    timestamp: datetime


@dataclass
class MedicationEffect:
    vital: Vital
    direction: EffectDirection
    magnitude: float  # same unit as the vital, > 0
    onset_days: int  # linear ramp length, >= 1


@dataclass
class MedicationChange:
    id: str
    patient_id: str
    drug: str
    change: MedChange
    timestamp: datetime
    effect: MedicationEffect


@dataclass
class Admission:
    id: str
    patient_id: str
    start: date
    end: date  # discharge day; the patient counts as admitted on [start, end)
    reason: str


@dataclass
class Consultation:
    id: str
    patient_id: str
    hcp_id: str
    timestamp: datetime
    channel: Channel
    text: str


@dataclass
class TruthLedgerEntry:
    """Provenance record for one injected messiness artifact."""

    kind: LedgerKind
    injected_id: str
    original_id: Optional[str] = None


@dataclass
class Cohort:
    """One complete simulated world: profiles, event streams, and provenance."""

    config: "SimulationConfig"  # noqa: F821 - defined in rpmsim.config
    patients: list[PatientProfile] = field(default_factory=list)
    hcps: list[HcpProfile] = field(default_factory=list)
    measurements: list[Measurement] = field(default_factory=list)
    alerts: list[Alert] = field(default_factory=list)
    responses: list[AlertResponse] = field(default_factory=list)
    medication_changes: list[MedicationChange] = field(default_factory=list)
    admissions: list[Admission] = field(default_factory=list)
    consultations: list[Consultation] = field(default_factory=list)
    truth_ledger: list[TruthLedgerEntry] = field(default_factory=list)
    clock: Optional[date] = None  # last simulated date, None before day one

    def patient_by_id(self, patient_id: str) -> PatientProfile:
        for p in self.patients:
            if p.id == patient_id:
                return p
        raise NotFoundError(f"unknown patient id {patient_id!r}")

    def hcp_by_id(self, hcp_id: str) -> HcpProfile:
        for h in self.hcps:
            if h.id == hcp_id:
                return h
        raise NotFoundError(f"unknown hcp id {hcp_id!r}")

    def measurement_by_id(self, measurement_id: str) -> Measurement:
        for m in self.measurements:
            if m.id == measurement_id:
                return m
        raise NotFoundError(f"unknown measurement id {measurement_id!r}")

    def alert_by_id(self, alert_id: str) -> Alert:
        for a in self.alerts:
            if a.id == alert_id:
                return a
        raise NotFoundError(f"unknown alert id {alert_id!r}")

    def injected_duplicate_ids(self) -> set[str]:
        """Measurement ids that exist only as injected duplicate rows."""
        return {
            e.injected_id
            for e in self.truth_ledger
            if e.kind is LedgerKind.INJECTED_DUPLICATE
        }

    def truth_measurements(self) -> list[Measurement]:
        """Measurements with injected duplicate rows filtered out."""
        dup = self.injected_duplicate_ids()
        return [m for m in self.measurements if m.id not in dup]

    def is_admitted(self, patient_id: str, on: date) -> bool:
        return any(
            a.patient_id == patient_id and a.start <= on < a.end
            for a in self.admissions
        )


@dataclass(frozen=True)
class Violation:
    kind: str  # rule family, e.g. "dangling_reference" or "causal_order"
    entity: str  # entity kind the violation is attached to
    entity_id: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "ok: no violations"
        lines = [f"{len(self.violations)} violation(s):"]
        lines += [
            f"  [{v.kind}] {v.entity} {v.entity_id}: {v.message}"
            for v in self.violations
        ]
        return "\n".join(lines)


def _check_profiles(cohort: Cohort, out: list[Violation]) -> None:
    for p in cohort.patients:
        if not 0.0 <= p.adherence <= 1.0:
            out.append(Violation("invalid_field", "patient", p.id,
                                 f"adherence {p.adherence} outside [0, 1]"))
        if not 18 <= p.age <= 110:
            out.append(Violation("invalid_field", "patient", p.id,
                                 f"age {p.age} outside [18, 110]"))
        for vital in VITAL_ORDER:
            if vital not in p.baselines or vital not in p.thresholds:
                out.append(Violation("invalid_field", "patient", p.id,
                                     f"missing baseline or thresholds for {vital.value}"))
                continue
            low, high = p.thresholds[vital]
            if not low < high:
                out.append(Violation("invalid_field", "patient", p.id,
                                     f"{vital.value} thresholds not ordered: {low} >= {high}"))
            elif not low < p.baselines[vital] < high:
                out.append(Violation("invalid_field", "patient", p.id,
                                     f"{vital.value} baseline {p.baselines[vital]} "
                                     f"not strictly inside ({low}, {high})"))
    for h in cohort.hcps:
        if not 0.0 <= h.confidence <= 1.0:
            out.append(Violation("invalid_field", "hcp", h.id,
                                 f"confidence {h.confidence} outside [0, 1]"))
        if not h.duty_days:
            out.append(Violation("invalid_field", "hcp", h.id, "empty duty_days"))


def _check_measurements(cohort: Cohort, patients: dict[str, PatientProfile],
                        out: list[Violation]) -> None:
    for m in cohort.measurements:
        if m.value <= 0:
            out.append(Violation("invalid_field", "measurement", m.id,
                                 f"non-positive value {m.value}"))
        patient = patients.get(m.patient_id)
        if patient is None:
            out.append(Violation("dangling_reference", "measurement", m.id,
                                 f"patient {m.patient_id} does not exist"))
            continue
        if m.timestamp.date() < patient.enrollment_date:
            out.append(Violation("causal_order", "measurement", m.id,
                                 f"timestamp {m.timestamp.isoformat()} precedes "
                                 f"enrollment {patient.enrollment_date.isoformat()}"))


def _check_alerts(cohort: Cohort, patients: dict[str, PatientProfile],
                  measurements: dict[str, Measurement],
                  hcps: dict[str, HcpProfile], out: list[Violation]) -> None:
    for a in cohort.alerts:
        if not a.rules:
            out.append(Violation("invalid_field", "alert", a.id, "empty rule set"))
        if a.patient_id not in patients:
            out.append(Violation("dangling_reference", "alert", a.id,
                                 f"patient {a.patient_id} does not exist"))
        if a.assigned_hcp_id is not None and a.assigned_hcp_id not in hcps:
            out.append(Violation("dangling_reference", "alert", a.id,
                                 f"assigned hcp {a.assigned_hcp_id} does not exist"))
        m = measurements.get(a.measurement_id)
        if m is None:
            out.append(Violation("dangling_reference", "alert", a.id,
                                 f"measurement {a.measurement_id} does not exist"))
            continue
        if m.patient_id != a.patient_id:
            out.append(Violation("dangling_reference", "alert", a.id,
                                 f"measurement {m.id} belongs to patient {m.patient_id}, "
                                 f"not {a.patient_id}"))
        if a.created_at < m.timestamp:
            out.append(Violation("causal_order", "alert", a.id,
                                 f"created_at {a.created_at.isoformat()} precedes "
                                 f"measurement timestamp {m.timestamp.isoformat()}"))


def _check_responses(cohort: Cohort, alerts: dict[str, Alert],
                     hcps: dict[str, HcpProfile], out: list[Violation]) -> None:
    terminal_count: dict[str, int] = {}
    for r in cohort.responses:
        if r.hcp_id not in hcps:
            out.append(Violation("dangling_reference", "response", r.id,
                                 f"hcp {r.hcp_id} does not exist"))
        a = alerts.get(r.alert_id)
        if a is None:
            out.append(Violation("dangling_reference", "response", r.id,
                                 f"alert {r.alert_id} does not exist"))
            continue
        if r.timestamp < a.created_at:
            out.append(Violation("causal_order", "response", r.id,
                                 f"timestamp {r.timestamp.isoformat()} precedes alert "
                                 f"created_at {a.created_at.isoformat()}"))
        if r.action is not ResponseAction.CONTACT_COLLEAGUE:
            terminal_count[r.alert_id] = terminal_count.get(r.alert_id, 0) + 1

    # A terminal response resolves its alert; colleague hand-offs leave it open.
    for a in cohort.alerts:
        n = terminal_count.get(a.id, 0)
        if a.status is AlertStatus.RESOLVED and n != 1:
            out.append(Violation("response_cardinality", "alert", a.id,
                                 f"resolved alert has {n} terminal responses, expected 1"))
        elif a.status is AlertStatus.OPEN and n != 0:
            out.append(Violation("response_cardinality", "alert", a.id,
                                 f"open alert has {n} terminal responses, expected 0"))


def _check_secondary_records(cohort: Cohort, patients: dict[str, PatientProfile],
                             hcps: dict[str, HcpProfile],
                             out: list[Violation]) -> None:
    for mc in cohort.medication_changes:
        if mc.patient_id not in patients:
            out.append(Violation("dangling_reference", "medication_change", mc.id,
                                 f"patient {mc.patient_id} does not exist"))
        if mc.effect.magnitude <= 0:
            out.append(Violation("invalid_field", "medication_change", mc.id,
                                 f"non-positive effect magnitude {mc.effect.magnitude}"))
        if mc.effect.onset_days < 1:
            out.append(Violation("invalid_field", "medication_change", mc.id,
                                 f"onset_days {mc.effect.onset_days} below 1"))

    per_patient: dict[str, list[Admission]] = {}
    for adm in cohort.admissions:
        if adm.patient_id not in patients:
            out.append(Violation("dangling_reference", "admission", adm.id,
                                 f"patient {adm.patient_id} does not exist"))
        if not adm.start < adm.end:
            out.append(Violation("invalid_field", "admission", adm.id,
                                 f"start {adm.start.isoformat()} not before end "
                                 f"{adm.end.isoformat()}"))
        per_patient.setdefault(adm.patient_id, []).append(adm)
    for stays in per_patient.values():
        stays.sort(key=lambda a: (a.start, a.id))
        for prev, cur in zip(stays, stays[1:]):
            if cur.start < prev.end:
                out.append(Violation("admission_overlap", "admission", cur.id,
                                     f"overlaps admission {prev.id} "
                                     f"({prev.start.isoformat()}..{prev.end.isoformat()})"))

    for c in cohort.consultations:
        if c.patient_id not in patients:
            out.append(Violation("dangling_reference", "consultation", c.id,
                                 f"patient {c.patient_id} does not exist"))
            continue
        if c.hcp_id not in hcps:
            out.append(Violation("dangling_reference", "consultation", c.id,
                                 f"hcp {c.hcp_id} does not exist"))
        admitted = cohort.is_admitted(c.patient_id, c.timestamp.date())
        if c.channel is Channel.IN_PERSON and not admitted:
            out.append(Violation("consultation_channel", "consultation", c.id,
                                 "in_person consultation outside any admission interval"))
        elif c.channel is Channel.PHONE and admitted:
            out.append(Violation("consultation_channel", "consultation", c.id,
                                 "phone consultation during an admission interval"))


def _check_ledger(cohort: Cohort, measurements: dict[str, Measurement],
                  out: list[Violation]) -> None:
    for i, entry in enumerate(cohort.truth_ledger):
        tag = f"ledger[{i}]"
        if entry.injected_id not in measurements:
            out.append(Violation("ledger_integrity", "truth_ledger", tag,
                                 f"injected_id {entry.injected_id} not in measurements"))
        if entry.original_id is not None:
            if entry.original_id not in measurements:
                out.append(Violation("ledger_integrity", "truth_ledger", tag,
                                     f"original_id {entry.original_id} not in measurements"))
            elif entry.original_id == entry.injected_id:
                out.append(Violation("ledger_integrity", "truth_ledger", tag,
                                     "original_id equals injected_id"))


def validate_cohort(cohort: Cohort) -> ValidationReport:
    """Check every type invariant and cross-entity rule.

    Violations are data, not failures: the report is empty iff the cohort is
    fully consistent, and its order is deterministic (entity kind, then id).
    """
    out: list[Violation] = []
    patients = {p.id: p for p in cohort.patients}
    hcps = {h.id: h for h in cohort.hcps}
    measurements = {m.id: m for m in cohort.measurements}
    alerts = {a.id: a for a in cohort.alerts}

    _check_profiles(cohort, out)
    _check_measurements(cohort, patients, out)
    _check_alerts(cohort, patients, measurements, hcps, out)
    _check_responses(cohort, alerts, hcps, out)
    _check_secondary_records(cohort, patients, hcps, out)
    _check_ledger(cohort, measurements, out)

    out.sort(key=lambda v: (v.entity, v.entity_id, v.kind, v.message))
    return ValidationReport(out)


# Tie-break order for events sharing a timestamp.
TIMELINE_KIND_ORDER = (
    "measurement",
    "alert",
    "response",
    "medication_change",
    "consultation",
    "admission",
)
_KIND_RANK = {k: i for i, k in enumerate(TIMELINE_KIND_ORDER)}


@dataclass(frozen=True)
class TimelineEvent:
    kind: str
    timestamp: datetime
    entity_id: str
    payload: object
    measurement_id: Optional[str] = None  # set on alert events
    response_ids: tuple[str, ...] = ()  # set on alert events


def patient_timeline(cohort: Cohort, patient_id: str) -> list[TimelineEvent]:
    """All events of one patient in a deterministic total order.

    Events sort by timestamp, ties by kind (measurement < alert < response <
    medication_change < consultation < admission), then by id.  Alert events
    carry links to their source measurement and any responses.
    """
    cohort.patient_by_id(patient_id)  # raises NotFoundError

    responses_by_alert: dict[str, list[str]] = {}
    for r in cohort.responses:
        responses_by_alert.setdefault(r.alert_id, []).append(r.id)
    for ids in responses_by_alert.values():
        ids.sort()

    alert_ids = {a.id for a in cohort.alerts if a.patient_id == patient_id}
    events: list[TimelineEvent] = []
    for m in cohort.measurements:
        if m.patient_id == patient_id:
            events.append(TimelineEvent("measurement", m.timestamp, m.id, m))
    for a in cohort.alerts:
        if a.patient_id == patient_id:
            events.append(TimelineEvent(
                "alert", a.created_at, a.id, a,
                measurement_id=a.measurement_id,
                response_ids=tuple(responses_by_alert.get(a.id, ())),
            ))
    for r in cohort.responses:
        if r.alert_id in alert_ids:
            events.append(TimelineEvent("response", r.timestamp, r.id, r))
    for mc in cohort.medication_changes:
        if mc.patient_id == patient_id:
            events.append(TimelineEvent("medication_change", mc.timestamp, mc.id, mc))
    for c in cohort.consultations:
        if c.patient_id == patient_id:
            events.append(TimelineEvent("consultation", c.timestamp, c.id, c))
    for adm in cohort.admissions:
        if adm.patient_id == patient_id:
            start = datetime.combine(adm.start, datetime.min.time())
            events.append(TimelineEvent("admission", start, adm.id, adm))

    events.sort(key=lambda e: (e.timestamp, _KIND_RANK[e.kind], e.entity_id))
    return events


def parse_id_seq(entity_id: str) -> int:
    """Trailing integer of an entity id, used for round-robin arithmetic."""
    digits = ""
    for ch in reversed(entity_id):
        if ch.isdigit():
            digits = ch + digits
        else:
            break
    if not digits:
        raise ValueError(f"id {entity_id!r} has no trailing sequence number")
    return int(digits)


def days_until_duty(duty_days: tuple[int, ...], on: date) -> int:
    """Days from `on` until the next duty day strictly after it (1..7)."""
    weekday = on.weekday()
    for k in range(1, 8):
        if (weekday + k) % 7 in duty_days:
            return k
    raise ValueError("empty duty_days")


def admitted_interval(cohort: Cohort, patient_id: str, on: date) -> Optional[Admission]:
    for a in cohort.admissions:
        if a.patient_id == patient_id and a.start <= on < a.end:
            return a
    return None

"""Scripted HCP behavior: assignment, the decision table, and documentation.

The decision table is a fixed priority list so the same context always
produces the same action.  Notes and consultation texts come from per-style
templates; the terse persona stays under a dozen words, the verbose one
writes full prose.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, time, timedelta
from typing import Iterable, Optional, Sequence

from .domain import (
    Alert,
    AlertResponse,
    AlertRule,
    AlertStatus,
    Channel,
    Cohort,
    ConflictError,
    Consultation,
    DocStyle,
    EffectDirection,
    Experience,
    FRIDAY,
    HcpProfile,
    MedChange,
    MedicationChange,
    MedicationEffect,
    ResponseAction,
    Severity,
    StabilityClass,
    Vital,
    VITAL_LABELS,
    format_vital,
    parse_id_seq,
)

# Drug and effect per (vital, breach direction).  The effect always pushes
# the vital back toward baseline; magnitudes are in the vital's own unit.
# Columns: drug, dose change, effect direction, magnitude, onset days.
MED_TABLE: dict[tuple[Vital, EffectDirection],
                tuple[str, MedChange, EffectDirection, float, int]] = {
    (Vital.WEIGHT, EffectDirection.UP):
        ("furosemide", MedChange.INCREASE, EffectDirection.DOWN, 1.2, 5),
    (Vital.WEIGHT, EffectDirection.DOWN):
        ("furosemide", MedChange.DECREASE, EffectDirection.UP, 1.0, 5),
    (Vital.SYSTOLIC_BP, EffectDirection.UP):
        ("amlodipine", MedChange.INCREASE, EffectDirection.DOWN, 9.0, 4),
    (Vital.SYSTOLIC_BP, EffectDirection.DOWN):
        ("amlodipine", MedChange.DECREASE, EffectDirection.UP, 7.0, 4),
    (Vital.DIASTOLIC_BP, EffectDirection.UP):
        ("lisinopril", MedChange.INCREASE, EffectDirection.DOWN, 6.0, 4),
    (Vital.DIASTOLIC_BP, EffectDirection.DOWN):
        ("lisinopril", MedChange.DECREASE, EffectDirection.UP, 5.0, 4),
    (Vital.HEART_RATE, EffectDirection.UP):
        ("metoprolol", MedChange.INCREASE, EffectDirection.DOWN, 8.0, 3),
    (Vital.HEART_RATE, EffectDirection.DOWN):
        ("metoprolol", MedChange.DECREASE, EffectDirection.UP, 6.0, 3),
}


def breach_direction(alert: Alert, value: float, baseline: float) -> EffectDirection:
    """Which way the alerting value deviates; threshold rules take priority."""
    if AlertRule.THRESHOLD_HIGH in alert.rules:
        return EffectDirection.UP
    if AlertRule.THRESHOLD_LOW in alert.rules:
        return EffectDirection.DOWN
    return EffectDirection.UP if value >= baseline else EffectDirection.DOWN


@dataclass(frozen=True)
class DecisionContext:
    """Everything the decision table is allowed to look at."""

    alert: Alert
    repeat_count: int  # same patient+vital alerts in the past 7 days, >= 1
    weekday: int  # 0 = Monday
    days_until_next_duty: int  # deciding HCP's gap to their next duty day
    stability_class: StabilityClass
    hcp: HcpProfile


def assign(alert: Alert, hcps: Iterable[HcpProfile], on: date) -> Optional[str]:
    """Round-robin by alert sequence number among HCPs on duty that day."""
    on_duty = sorted(
        (h for h in hcps if on.weekday() in h.duty_days),
        key=lambda h: h.id,
    )
    if not on_duty:
        return None
    return on_duty[parse_id_seq(alert.id) % len(on_duty)].id


def decide(ctx: DecisionContext) -> ResponseAction:
    """Fixed-priority decision table; first matching rule wins."""
    has_threshold = bool(ctx.alert.rules
                         & {AlertRule.THRESHOLD_LOW, AlertRule.THRESHOLD_HIGH})
    if has_threshold and ctx.repeat_count >= 3:
        return ResponseAction.ADJUST_MEDICATION
    if ctx.alert.severity is Severity.HIGH:
        return ResponseAction.CALL_PATIENT
    if ctx.hcp.experience is Experience.NOVICE and ctx.hcp.confidence < 0.5:
        return ResponseAction.CONTACT_COLLEAGUE
    if (ctx.weekday == FRIDAY and ctx.days_until_next_duty >= 2
            and ctx.alert.severity is Severity.MILD):
        return ResponseAction.CALL_PATIENT
    return ResponseAction.DISMISS


@dataclass(frozen=True)
class NoteEvent:
    """Input to note rendering: what happened, about which reading."""

    kind: str  # "response", "phone_consult" or "ward_consult"
    action: Optional[ResponseAction] = None
    severity: Optional[Severity] = None
    vital: Optional[Vital] = None
    value: Optional[float] = None
    drug: Optional[str] = None
    change: Optional[MedChange] = None


def _terse_response(e: NoteEvent, label: str, val: str, sev: str) -> str:
    if e.action is ResponseAction.DISMISS:
        return f"Dismissed {sev} alert, {label} {val}. No action."
    if e.action is ResponseAction.CALL_PATIENT:
        return f"Called patient, {label} {val}. Advised continued monitoring."
    if e.action is ResponseAction.ADJUST_MEDICATION:
        return f"Adjusted {e.drug}, {e.change.value} dose. {label} {val}."
    return f"Flagged {label} {val} to colleague for review."


def _verbose_response(e: NoteEvent, label: str, val: str, sev: str) -> str:
    if e.action is ResponseAction.DISMISS:
        return (f"Reviewed the {sev} alert raised on today's {label} reading of "
                f"{val}. The pattern looks consistent with the past few days and "
                f"the overall picture remains acceptable, so I am dismissing this "
                f"alert without further action for now.")
    if e.action is ResponseAction.CALL_PATIENT:
        return (f"Phoned the patient to discuss the {sev} alert on the {label} "
                f"value of {val}. We talked through current symptoms, medication "
                f"intake and daily routine, and I asked the patient to keep "
                f"measuring and to report any worsening right away.")
    if e.action is ResponseAction.ADJUST_MEDICATION:
        return (f"Given this repeating {sev} alert with the {label} now at "
                f"{val}, I am adjusting the medication plan and will "
                f"{e.change.value} the {e.drug} dose per protocol. The effect on "
                f"the readings should become visible over the coming days, and "
                f"we will keep monitoring closely.")
    return (f"The {sev} alert on the {label} reading of {val} falls outside "
            f"what I feel comfortable judging on my own, so I am handing it "
            f"over to a colleague for a second opinion and leaving the alert "
            f"open until they have had a look.")


def render_note(hcp: HcpProfile, event: NoteEvent) -> str:
    """Deterministic note text in the HCP's documentation style."""
    label = VITAL_LABELS[event.vital] if event.vital is not None else ""
    val = (format_vital(event.vital, event.value)
           if event.vital is not None and event.value is not None else "")
    sev = event.severity.value if event.severity is not None else "mild"
    terse = hcp.doc_style is DocStyle.TERSE

    if event.kind == "response":
        if terse:
            return _terse_response(event, label, val, sev)
        return _verbose_response(event, label, val, sev)
    if event.kind == "phone_consult":
        if terse:
            return f"Phone call re {label} {val}. Patient stable, continue monitoring."
        return (f"Telephone consultation following the alert on the {label} "
                f"reading of {val}. The patient reports feeling much the same "
                f"as over the past few days, with no new complaints; we agreed "
                f"to continue the current regimen and to keep submitting daily "
                f"measurements as usual.")
    if event.kind == "ward_consult":
        if terse:
            return f"Ward visit re {label} {val}. Plan reviewed with patient."
        return (f"Visited the patient on the ward during the current hospital "
                f"stay to go over the {label} reading of {val}. We reviewed the "
                f"recent course of measurements together, discussed how the "
                f"treatment has been going, and agreed on the follow-up plan "
                f"for after discharge.")
    raise ValueError(f"unknown note event kind {event.kind!r}")


def next_record_id(records: Sequence, prefix: str, width: int) -> str:
    """Next zero-padded id after the highest sequence number present."""
    seq = 0
    for r in records:
        try:
            seq = max(seq, parse_id_seq(r.id))
        except ValueError:
            continue
    return f"{prefix}{seq + 1:0{width}d}"


def _response_slot(cohort: Cohort, on: date) -> datetime:
    # Spread same-day responses one minute apart so ordering stays total.
    n = sum(1 for r in cohort.responses if r.timestamp.date() == on)
    return datetime.combine(on, time(14, 0)) + timedelta(minutes=n)


def apply_response(cohort: Cohort, alert_id: str, hcp_id: str,
                   action: ResponseAction, on: date,
                   note: Optional[str] = None) -> Cohort:
    """Record one response and its side effects; mutates and returns `cohort`.

    dismiss / call_patient / adjust_medication resolve the alert; a call adds
    a consultation, an adjustment adds a medication change whose effect the
    simulation picks up from the cohort record.  contact_colleague leaves the
    alert open and moves it to the next on-duty colleague.  Responding to an
    already resolved alert raises ConflictError (first response wins).
    """
    alert = cohort.alert_by_id(alert_id)
    hcp = cohort.hcp_by_id(hcp_id)
    if alert.status is AlertStatus.RESOLVED:
        raise ConflictError(f"alert {alert_id} already resolved")
    measurement = cohort.measurement_by_id(alert.measurement_id)
    patient = cohort.patient_by_id(alert.patient_id)

    stamp = _response_slot(cohort, on)
    vital = measurement.vital

    drug: Optional[str] = None
    change_kind: Optional[MedChange] = None
    if action is ResponseAction.ADJUST_MEDICATION:
        direction = breach_direction(alert, measurement.value,
                                     patient.baselines[vital])
        drug, change_kind, eff_dir, magnitude, onset = MED_TABLE[(vital, direction)]

    if note is None:
        note = render_note(hcp, NoteEvent(
            kind="response", action=action, severity=alert.severity,
            vital=vital, value=measurement.value,
            drug=drug, change=change_kind,
        ))

    cohort.responses.append(AlertResponse(
        id=next_record_id(cohort.responses, "rs-", 5),
        alert_id=alert.id,
        hcp_id=hcp.id,
        action=action,
        note=note,
        timestamp=stamp,
    ))

    if action is ResponseAction.CONTACT_COLLEAGUE:
        on_duty = sorted(
            (h.id for h in cohort.hcps if on.weekday() in h.duty_days))
        if on_duty:
            if hcp.id in on_duty:
                successor = on_duty[(on_duty.index(hcp.id) + 1) % len(on_duty)]
            else:
                successor = on_duty[parse_id_seq(alert.id) % len(on_duty)]
            alert.assigned_hcp_id = successor
        return cohort

    alert.status = AlertStatus.RESOLVED

    if action is ResponseAction.CALL_PATIENT:
        admitted = cohort.is_admitted(patient.id, on)
        channel = Channel.IN_PERSON if admitted else Channel.PHONE
        text = render_note(hcp, NoteEvent(
            kind="ward_consult" if admitted else "phone_consult",
            severity=alert.severity, vital=vital, value=measurement.value,
        ))
        cohort.consultations.append(Consultation(
            id=next_record_id(cohort.consultations, "cs-", 4),
            patient_id=patient.id,
            hcp_id=hcp.id,
            timestamp=stamp + timedelta(minutes=30),
            channel=channel,
            text=text,
        ))
    elif action is ResponseAction.ADJUST_MEDICATION:
        cohort.medication_changes.append(MedicationChange(
            id=next_record_id(cohort.medication_changes, "mc-", 4),
            patient_id=patient.id,
            drug=drug,
            change=change_kind,
            timestamp=stamp,
            effect=MedicationEffect(
                vital=vital, direction=eff_dir,
                magnitude=magnitude, onset_days=onset,
            ),
        ))
    return cohort

"""Fragmented on-disk form of a cohort: one delimited file per entity kind.

The split into per-entity tables (medication changes never inside any other
file) mirrors how the source records are fragmented in practice.  Export is
canonical: fixed column order, fixed row order, fixed number formatting, LF
line endings: identical cohorts give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import zipfile
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path
from typing import Callable, Optional, Sequence

from .config import ConfigError, Mode, SimulationConfig, config_from_dict
from .domain import (
    Admission,
    Alert,
    AlertResponse,
    AlertRule,
    AlertStatus,
    Channel,
    Cohort,
    Consultation,
    DocStyle,
    Experience,
    HcpProfile,
    HcpRole,
    HomeSupport,
    LedgerKind,
    Measurement,
    MedChange,
    MedicationChange,
    MedicationEffect,
    EffectDirection,
    PatientProfile,
    ResponseAction,
    Severity,
    StabilityClass,
    TruthLedgerEntry,
    ValidationReport,
    Vital,
    VITAL_ORDER,
    VITAL_UNITS,
    WEEKDAY_NAMES,
    format_vital,
    validate_cohort,
)

FORMAT_VERSION = 1

MANIFEST_FILE = "manifest.json"
LEDGER_FILE = "truth_ledger.json"

ENTITY_FILES = (
    "patients.csv",
    "hcps.csv",
    "measurements.csv",
    "alerts.csv",
    "responses.csv",
    "medication_changes.csv",
    "admissions.csv",
    "consultations.csv",
)


class BundleError(Exception):
    """Base for everything that can go wrong reading or writing a bundle."""


class BundleFormatError(BundleError):
    """Missing or structurally broken file; the message names it."""


class BundleVersionError(BundleError):
    """The bundle declares a format_version this code does not speak."""


class BundleValidationError(BundleError):
    """The data is readable but violates integrity rules."""

    def __init__(self, report: ValidationReport) -> None:
        super().__init__(str(report))
        self.report = report


@dataclass
class DatasetBundle:
    path: Path
    manifest: dict


def _ts(value: datetime) -> str:
    return value.strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse_ts(text: str) -> datetime:
    return datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ")


def _num(value: float) -> str:
    # repr gives the shortest string that parses back to the same float
    return repr(float(value))


def _opt(value: Optional[str]) -> str:
    return "" if value is None else value


def _duty_names(duty_days: Sequence[int]) -> str:
    return "|".join(WEEKDAY_NAMES[d] for d in duty_days)


def _parse_duty(text: str) -> tuple[int, ...]:
    days = []
    for name in text.split("|"):
        if name not in WEEKDAY_NAMES:
            raise ValueError(f"unknown weekday {name!r}")
        days.append(WEEKDAY_NAMES.index(name))
    return tuple(days)


PATIENT_COLUMNS = (
    "id", "display_name", "age", "comorbidities", "stability_class",
    "adherence", "home_support", "enrollment_date",
    "baseline_weight", "baseline_systolic_bp", "baseline_diastolic_bp",
    "baseline_heart_rate",
    "weight_low", "weight_high", "systolic_bp_low", "systolic_bp_high",
    "diastolic_bp_low", "diastolic_bp_high", "heart_rate_low", "heart_rate_high",
)


def _patient_row(p: PatientProfile) -> list[str]:
    row = [p.id, p.display_name, str(p.age), "|".join(p.comorbidities),
           p.stability_class.value, f"{p.adherence:.2f}",
           p.home_support.value, p.enrollment_date.isoformat()]
    row += [format_vital(v, p.baselines[v]) for v in VITAL_ORDER]
    for v in VITAL_ORDER:
        low, high = p.thresholds[v]
        row += [format_vital(v, low), format_vital(v, high)]
    return row


def _parse_patient(row: dict[str, str]) -> PatientProfile:
    baselines = {
        Vital.WEIGHT: float(row["baseline_weight"]),
        Vital.SYSTOLIC_BP: float(row["baseline_systolic_bp"]),
        Vital.DIASTOLIC_BP: float(row["baseline_diastolic_bp"]),
        Vital.HEART_RATE: float(row["baseline_heart_rate"]),
    }
    thresholds = {
        v: (float(row[f"{v.value}_low"]), float(row[f"{v.value}_high"]))
        for v in VITAL_ORDER
    }
    comorbidities = tuple(c for c in row["comorbidities"].split("|") if c)
    return PatientProfile(
        id=row["id"],
        display_name=row["display_name"],
        age=int(row["age"]),
        comorbidities=comorbidities,
        stability_class=StabilityClass(row["stability_class"]),
        adherence=float(row["adherence"]),
        home_support=HomeSupport(row["home_support"]),
        enrollment_date=date.fromisoformat(row["enrollment_date"]),
        baselines=baselines,
        thresholds=thresholds,
    )


HCP_COLUMNS = ("id", "display_name", "role", "experience", "confidence",
               "doc_style", "duty_days")


def _hcp_row(h: HcpProfile) -> list[str]:
    return [h.id, h.display_name, h.role.value, h.experience.value,
            f"{h.confidence:.2f}", h.doc_style.value, _duty_names(h.duty_days)]


def _parse_hcp(row: dict[str, str]) -> HcpProfile:
    return HcpProfile(
        id=row["id"],
        display_name=row["display_name"],
        role=HcpRole(row["role"]),
        experience=Experience(row["experience"]),
        confidence=float(row["confidence"]),
        doc_style=DocStyle(row["doc_style"]),
        duty_days=_parse_duty(row["duty_days"]),
    )


MEASUREMENT_COLUMNS = ("id", "patient_id", "timestamp", "vital", "value",
                       "unit", "comment")


def _measurement_row(m: Measurement) -> list[str]:
    return [m.id, m.patient_id, _ts(m.timestamp), m.vital.value,
            format_vital(m.vital, m.value), VITAL_UNITS[m.vital],
            _opt(m.comment)]


def _parse_measurement(row: dict[str, str]) -> Measurement:
    vital = Vital(row["vital"])
    if row["unit"] != VITAL_UNITS[vital]:
        raise ValueError(f"unit {row['unit']!r} does not match vital "
                         f"{vital.value!r}")
    return Measurement(
        id=row["id"],
        patient_id=row["patient_id"],
        timestamp=_parse_ts(row["timestamp"]),
        vital=vital,
        value=float(row["value"]),
        comment=row["comment"] or None,
    )


ALERT_COLUMNS = ("id", "patient_id", "measurement_id", "rules", "severity",
                 "created_at", "status", "assigned_hcp_id")


def _alert_row(a: Alert) -> list[str]:
    return [a.id, a.patient_id, a.measurement_id,
            "|".join(sorted(r.value for r in a.rules)), a.severity.value,
            _ts(a.created_at), a.status.value, _opt(a.assigned_hcp_id)]


def _parse_alert(row: dict[str, str]) -> Alert:
    rules = frozenset(AlertRule(r) for r in row["rules"].split("|") if r)
    return Alert(
        id=row["id"],
        patient_id=row["patient_id"],
        measurement_id=row["measurement_id"],
        rules=rules,
        severity=Severity(row["severity"]),
        created_at=_parse_ts(row["created_at"]),
        status=AlertStatus(row["status"]),
        assigned_hcp_id=row["assigned_hcp_id"] or None,
    )


RESPONSE_COLUMNS = ("id", "alert_id", "hcp_id", "action", "note", "timestamp")


def _response_row(r: AlertResponse) -> list[str]:
    return [r.id, r.alert_id, r.hcp_id, r.action.value, r.note, _ts(r.timestamp)]


def _parse_response(row: dict[str, str]) -> AlertResponse:
    return AlertResponse(
        id=row["id"],
        alert_id=row["alert_id"],
        hcp_id=row["hcp_id"],
        action=ResponseAction(row["action"]),
        note=row["note"],
        timestamp=_parse_ts(row["timestamp"]),
    )


MED_CHANGE_COLUMNS = ("id", "patient_id", "drug", "change", "timestamp",
                      "effect_vital", "effect_direction", "effect_magnitude",
                      "effect_onset_days")


def _med_change_row(mc: MedicationChange) -> list[str]:
    return [mc.id, mc.patient_id, mc.drug, mc.change.value, _ts(mc.timestamp),
            mc.effect.vital.value, mc.effect.direction.value,
            _num(mc.effect.magnitude), str(mc.effect.onset_days)]


def _parse_med_change(row: dict[str, str]) -> MedicationChange:
    return MedicationChange(
        id=row["id"],
        patient_id=row["patient_id"],
        drug=row["drug"],
        change=MedChange(row["change"]),
        timestamp=_parse_ts(row["timestamp"]),
        effect=MedicationEffect(
            vital=Vital(row["effect_vital"]),
            direction=EffectDirection(row["effect_direction"]),
            magnitude=float(row["effect_magnitude"]),
            onset_days=int(row["effect_onset_days"]),
        ),
    )


ADMISSION_COLUMNS = ("id", "patient_id", "start", "end", "reason")


def _admission_row(a: Admission) -> list[str]:
    return [a.id, a.patient_id, a.start.isoformat(), a.end.isoformat(), a.reason]


def _parse_admission(row: dict[str, str]) -> Admission:
    return Admission(
        id=row["id"],
        patient_id=row["patient_id"],
        start=date.fromisoformat(row["start"]),
        end=date.fromisoformat(row["end"]),
        reason=row["reason"],
    )


CONSULTATION_COLUMNS = ("id", "patient_id", "hcp_id", "timestamp", "channel",
                        "text")


def _consultation_row(c: Consultation) -> list[str]:
    return [c.id, c.patient_id, c.hcp_id, _ts(c.timestamp), c.channel.value,
            c.text]


def _parse_consultation(row: dict[str, str]) -> Consultation:
    return Consultation(
        id=row["id"],
        patient_id=row["patient_id"],
        hcp_id=row["hcp_id"],
        timestamp=_parse_ts(row["timestamp"]),
        channel=Channel(row["channel"]),
        text=row["text"],
    )


# filename -> (columns, row serializer, row parser, sort key, cohort attr)
_TABLES: dict[str, tuple] = {
    "patients.csv": (PATIENT_COLUMNS, _patient_row, _parse_patient,
                     lambda p: p.id, "patients"),
    "hcps.csv": (HCP_COLUMNS, _hcp_row, _parse_hcp,
                 lambda h: h.id, "hcps"),
    "measurements.csv": (MEASUREMENT_COLUMNS, _measurement_row,
                         _parse_measurement,
                         lambda m: (m.timestamp, m.id), "measurements"),
    "alerts.csv": (ALERT_COLUMNS, _alert_row, _parse_alert,
                   lambda a: (a.created_at, a.id), "alerts"),
    "responses.csv": (RESPONSE_COLUMNS, _response_row, _parse_response,
                      lambda r: (r.timestamp, r.id), "responses"),
    "medication_changes.csv": (MED_CHANGE_COLUMNS, _med_change_row,
                               _parse_med_change,
                               lambda mc: (mc.timestamp, mc.id),
                               "medication_changes"),
    "admissions.csv": (ADMISSION_COLUMNS, _admission_row, _parse_admission,
                       lambda a: (a.start, a.id), "admissions"),
    "consultations.csv": (CONSULTATION_COLUMNS, _consultation_row,
                          _parse_consultation,
                          lambda c: (c.timestamp, c.id), "consultations"),
}


def _row_counts(cohort: Cohort) -> dict[str, int]:
    counts = {name.rsplit(".", 1)[0]: len(getattr(cohort, attr))
              for name, (_, _, _, _, attr) in _TABLES.items()}
    counts["truth_ledger"] = len(cohort.truth_ledger)
    return counts


def build_manifest(cohort: Cohort) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "seed": cohort.config.seed,
        "mode": cohort.config.mode.value,
        "clock": cohort.clock.isoformat() if cohort.clock else None,
        "config": cohort.config.to_dict(),
        "rows": _row_counts(cohort),
    }


def _write_csv(path: Path, columns: Sequence[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        writer.writerow(columns)
        writer.writerows(rows)


def export(cohort: Cohort, destination: str | Path) -> DatasetBundle:
    """Write the cohort as a bundle directory; refuses inconsistent data."""
    report = validate_cohort(cohort)
    if not report.ok:
        raise BundleValidationError(report)

    destination = Path(destination)
    destination.mkdir(parents=True, exist_ok=True)

    for name, (columns, serialize, _, sort_key, attr) in _TABLES.items():
        records = sorted(getattr(cohort, attr), key=sort_key)
        _write_csv(destination / name, columns,
                   [serialize(r) for r in records])

    ledger = sorted(cohort.truth_ledger,
                    key=lambda e: (e.kind.value, e.injected_id))
    ledger_doc = {"entries": [
        {"kind": e.kind.value, "injected_id": e.injected_id,
         "original_id": e.original_id}
        for e in ledger
    ]}
    (destination / LEDGER_FILE).write_text(
        json.dumps(ledger_doc, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")

    manifest = build_manifest(cohort)
    (destination / MANIFEST_FILE).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    return DatasetBundle(path=destination, manifest=manifest)


def _read_csv(path: Path, columns: Sequence[str]) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise BundleFormatError(f"{path.name}: empty file, header expected"
                                    ) from None
        if tuple(header) != tuple(columns):
            raise BundleFormatError(
                f"{path.name}: unexpected header {header!r}")
        rows = []
        for lineno, cells in enumerate(reader, 2):
            if len(cells) != len(columns):
                raise BundleFormatError(
                    f"{path.name}:{lineno}: expected {len(columns)} cells, "
                    f"got {len(cells)}")
            rows.append(dict(zip(columns, cells)))
        return rows


def import_bundle(source: str | Path) -> Cohort:
    """Read a bundle back into a cohort, checking structure and integrity."""
    source = Path(source)
    manifest_path = source / MANIFEST_FILE
    if not manifest_path.is_file():
        raise BundleFormatError(f"missing file {MANIFEST_FILE}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleFormatError(f"{MANIFEST_FILE}: not valid JSON ({exc})") from None

    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise BundleVersionError(
            f"unsupported format_version {version!r}, expected {FORMAT_VERSION}")

    try:
        config = config_from_dict(manifest.get("config", {}))
    except ConfigError as exc:
        raise BundleFormatError(f"{MANIFEST_FILE}: bad config echo: {exc}") from None

    for name in ENTITY_FILES:
        if not (source / name).is_file():
            raise BundleFormatError(f"missing file {name}")
    if not (source / LEDGER_FILE).is_file():
        raise BundleFormatError(f"missing file {LEDGER_FILE}")

    cohort = Cohort(config=config)
    for name, (columns, _, parse, _, attr) in _TABLES.items():
        rows = _read_csv(source / name, columns)
        parsed = []
        for i, row in enumerate(rows, 2):
            try:
                parsed.append(parse(row))
            except (ValueError, KeyError) as exc:
                raise BundleFormatError(f"{name}:{i}: {exc}") from None
        setattr(cohort, attr, parsed)

    try:
        ledger_doc = json.loads((source / LEDGER_FILE).read_text(encoding="utf-8"))
        entries = []
        for e in ledger_doc.get("entries", []):
            entries.append(TruthLedgerEntry(
                kind=LedgerKind(e["kind"]),
                injected_id=e["injected_id"],
                original_id=e.get("original_id"),
            ))
        cohort.truth_ledger = entries
    except (json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        raise BundleFormatError(f"{LEDGER_FILE}: {exc}") from None

    declared = manifest.get("rows", {})
    actual = _row_counts(cohort)
    for key, count in actual.items():
        if key in declared and declared[key] != count:
            raise BundleFormatError(
                f"{MANIFEST_FILE}: rows.{key} declares {declared[key]}, "
                f"found {count}")

    clock = manifest.get("clock")
    cohort.clock = date.fromisoformat(clock) if clock else None

    report = validate_cohort(cohort)
    if not report.ok:
        raise BundleValidationError(report)
    return cohort


def cohorts_equal(a: Cohort, b: Cohort) -> bool:
    """Collection-wise equality, insensitive to in-memory list order."""
    for name, (_, _, _, sort_key, attr) in _TABLES.items():
        if sorted(getattr(a, attr), key=sort_key) \
                != sorted(getattr(b, attr), key=sort_key):
            return False
    ledger_key: Callable = lambda e: (e.kind.value, e.injected_id)
    if sorted(a.truth_ledger, key=ledger_key) \
            != sorted(b.truth_ledger, key=ledger_key):
        return False
    return a.clock == b.clock and a.config.to_dict() == b.config.to_dict()


def build_archive(bundle_dir: str | Path) -> bytes:
    """The bundle directory as a zip archive with stable bytes."""
    bundle_dir = Path(bundle_dir)
    names = list(ENTITY_FILES) + [LEDGER_FILE, MANIFEST_FILE]
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        for name in names:
            info = zipfile.ZipInfo(name, date_time=(2024, 1, 1, 0, 0, 0))
            info.compress_type = zipfile.ZIP_DEFLATED
            info.external_attr = 0o644 << 16
            zf.writestr(info, (bundle_dir / name).read_bytes())
    return buf.getvalue()

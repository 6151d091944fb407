"""Render a cohort to PNG figures and small delimited summary tables.

One figure per patient (all four vitals with thresholds, alert markers,
medication-change lines and admission shading) plus a cohort overview,
written next to stats.csv / per_patient.csv / per_hcp.csv.
"""

from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .domain import (
    AlertStatus,
    Cohort,
    ResponseAction,
    VITAL_LABELS,
    VITAL_ORDER,
    VITAL_UNITS,
)
from .stats import cohort_stats  # noqa: E402

ALERT_COLOR = "#c62828"
SERIES_COLOR = "#33658a"
MED_COLOR = "#2e7d32"
ADMISSION_COLOR = "#9e9e9e"


def _patient_figure(cohort: Cohort, patient_id: str, path: Path) -> None:
    profile = cohort.patient_by_id(patient_id)
    truth = [m for m in cohort.truth_measurements()
             if m.patient_id == patient_id]
    alerting_ids = {a.measurement_id for a in cohort.alerts
                    if a.patient_id == patient_id}
    med_changes = [mc for mc in cohort.medication_changes
                   if mc.patient_id == patient_id]
    admissions = [a for a in cohort.admissions if a.patient_id == patient_id]

    fig, axes = plt.subplots(len(VITAL_ORDER), 1, figsize=(11, 9.5),
                             sharex=True)
    for ax, vital in zip(axes, VITAL_ORDER):
        series = sorted((m for m in truth if m.vital is vital),
                        key=lambda m: (m.timestamp, m.id))
        xs = [m.timestamp for m in series]
        ys = [m.value for m in series]
        ax.plot(xs, ys, color=SERIES_COLOR, lw=0.9, marker=".", ms=3,
                label=VITAL_LABELS[vital])
        flagged = [m for m in series if m.id in alerting_ids]
        if flagged:
            ax.scatter([m.timestamp for m in flagged],
                       [m.value for m in flagged],
                       color=ALERT_COLOR, s=22, zorder=3, label="alert")
        low, high = profile.thresholds[vital]
        ax.axhline(low, color="#888888", lw=0.8, ls="--")
        ax.axhline(high, color="#888888", lw=0.8, ls="--")
        for mc in med_changes:
            if mc.effect.vital is vital:
                ax.axvline(mc.timestamp, color=MED_COLOR, lw=1.1, ls=":")
        for adm in admissions:
            ax.axvspan(adm.start, adm.end, color=ADMISSION_COLOR, alpha=0.18)
        ax.set_ylabel(f"{VITAL_LABELS[vital]}\n({VITAL_UNITS[vital]})",
                      fontsize=9)
        ax.tick_params(labelsize=8)
    axes[-1].set_xlabel("date")
    fig.suptitle(f"{profile.display_name} ({profile.id}) - "
                 f"{profile.stability_class.value}", fontsize=12)
    fig.autofmt_xdate()
    fig.tight_layout(rect=(0, 0, 1, 0.97))
    fig.savefig(path, dpi=110)
    plt.close(fig)


def _overview_figure(cohort: Cohort, path: Path) -> None:
    stats = cohort_stats(cohort)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(12, 4.5))

    patients = sorted(stats.per_patient_alerts)
    ax1.bar(patients, [stats.per_patient_alerts[p] for p in patients],
            color=SERIES_COLOR)
    ax1.set_title("alerts per patient", fontsize=10)
    ax1.tick_params(axis="x", rotation=60, labelsize=8)

    meas_per_day = Counter(m.timestamp.date()
                           for m in cohort.truth_measurements())
    alerts_per_day = Counter(a.created_at.date() for a in cohort.alerts)
    days = sorted(meas_per_day)
    ax2.plot(days, [meas_per_day[d] for d in days],
             color=SERIES_COLOR, lw=0.9, label="measurements")
    ax2.plot(days, [alerts_per_day.get(d, 0) for d in days],
             color=ALERT_COLOR, lw=0.9, label="alerts")
    ax2.set_title(f"daily counts (alert rate {stats.alert_rate:.3f})",
                  fontsize=10)
    ax2.legend(fontsize=8)
    ax2.tick_params(labelsize=8)
    fig.autofmt_xdate()
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def _write_table(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def render_report(cohort: Cohort, out_dir: str | Path) -> list[Path]:
    """Write all report artifacts into `out_dir`; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    stats = cohort_stats(cohort)
    stats_path = out / "stats.csv"
    _write_table(stats_path, ["metric", "value"], [
        [key, value] for key, value in stats.to_dict().items()
        if not isinstance(value, dict)
    ])
    written.append(stats_path)

    meas_by_patient = Counter(m.patient_id for m in cohort.truth_measurements())
    open_by_patient = Counter(a.patient_id for a in cohort.alerts
                              if a.status is AlertStatus.OPEN)
    adm_by_patient = Counter(a.patient_id for a in cohort.admissions)
    med_by_patient = Counter(mc.patient_id for mc in cohort.medication_changes)
    per_patient_path = out / "per_patient.csv"
    _write_table(
        per_patient_path,
        ["patient_id", "display_name", "stability_class", "measurements",
         "alerts", "open_alerts", "admissions", "medication_changes"],
        [[p.id, p.display_name, p.stability_class.value,
          meas_by_patient.get(p.id, 0),
          stats.per_patient_alerts.get(p.id, 0),
          open_by_patient.get(p.id, 0),
          adm_by_patient.get(p.id, 0),
          med_by_patient.get(p.id, 0)]
         for p in cohort.patients],
    )
    written.append(per_patient_path)

    by_action: dict[str, Counter] = {
        action.value: Counter() for action in ResponseAction}
    for r in cohort.responses:
        by_action[r.action.value][r.hcp_id] += 1
    per_hcp_path = out / "per_hcp.csv"
    _write_table(
        per_hcp_path,
        ["hcp_id", "display_name", "role", "responses", "calls",
         "adjustments", "handoffs", "dismissals"],
        [[h.id, h.display_name, h.role.value,
          stats.per_hcp_responses.get(h.id, 0),
          by_action["call_patient"][h.id],
          by_action["adjust_medication"][h.id],
          by_action["contact_colleague"][h.id],
          by_action["dismiss"][h.id]]
         for h in cohort.hcps],
    )
    written.append(per_hcp_path)

    for p in cohort.patients:
        fig_path = out / f"patient_{p.id}.png"
        _patient_figure(cohort, p.id, fig_path)
        written.append(fig_path)

    overview_path = out / "overview.png"
    _overview_figure(cohort, overview_path)
    written.append(overview_path)
    return written

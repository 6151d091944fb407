// Patient roster: one row per patient with latest-vital chips, trend
// labels, and an open-alert badge. All numbers come from the summary
// payload as-is.

import { clear, el } from "./dom.js";
import { fmtValue, trendLabel, vitalLabel } from "./format.js";
import type { PatientSummary } from "./types.js";

export interface RosterOpts {
  onSelect?: (patientId: string) => void;
}

export function renderRoster(
  container: HTMLElement,
  patients: PatientSummary[],
  opts: RosterOpts = {},
): void {
  clear(container);
  if (patients.length === 0) {
    container.append(
      el("p", { class: "empty-state" }, "No patients in this cohort."),
    );
    return;
  }

  const list = el("div", { class: "roster" });
  for (const patient of patients) {
    const chips = el("div", { class: "vital-chips" });
    for (const [vital, summary] of Object.entries(patient.vitals)) {
      const text =
        summary.latest === null
          ? "no readings"
          : fmtValue(summary.latest, summary.unit);
      chips.append(
        el(
          "span",
          { class: `chip trend-${summary.trend ?? "none"}`, "data-vital": vital },
          `${vitalLabel(vital)}: ${text}`,
          summary.trend === null
            ? null
            : el("em", { class: "trend" }, ` (${trendLabel(summary.trend)})`),
        ),
      );
    }

    const badge = el(
      "span",
      {
        class: patient.open_alert_count > 0 ? "alert-badge active" : "alert-badge",
        "data-open-alerts": String(patient.open_alert_count),
      },
      `${patient.open_alert_count} open`,
    );

    const row = el(
      "div",
      { class: "roster-row", "data-patient-id": patient.patient_id },
      el(
        "div",
        { class: "roster-head" },
        el("strong", {}, patient.display_name),
        el("span", { class: "muted" }, ` ${patient.patient_id}`),
        el("span", { class: `stability ${patient.stability_class}` }, patient.stability_class),
        badge,
      ),
      chips,
      el(
        "div",
        { class: "roster-counts muted" },
        `${patient.admission_count} admissions, ` +
          `${patient.medication_change_count} medication changes, ` +
          `${patient.consultation_count} consultations` +
          (patient.last_contact
            ? `, last contact ${patient.last_contact.date} (${patient.last_contact.channel})`
            : ""),
      ),
    );
    row.addEventListener("click", () => opts.onSelect?.(patient.patient_id));
    list.append(row);
  }
  container.append(list);
}

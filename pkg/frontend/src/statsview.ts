// Cohort statistics panel. Displays the stats payload verbatim,
// including the precomputed alert rate.

import { clear, el } from "./dom.js";
import { fmtRate } from "./format.js";
import type { CohortStatsPayload } from "./types.js";

export function renderStats(container: HTMLElement, stats: CohortStatsPayload): void {
  clear(container);

  const rows: [string, string][] = [
    ["measurements", String(stats.measurement_count)],
    ["alerts", String(stats.alert_count)],
    ["alert rate", fmtRate(stats.alert_rate)],
    ["open alerts", String(stats.open_alert_count)],
    ["responses", String(stats.response_count)],
    ["consultations", String(stats.consultation_count)],
    ["medication changes", String(stats.medication_change_count)],
    ["admissions", String(stats.admission_count)],
    ["admitted patient-days", String(stats.admitted_patient_days)],
    ["injected duplicates", String(stats.injected_duplicate_count)],
    ["injected comments", String(stats.injected_comment_count)],
  ];

  const table = el("table", { class: "stats-table" });
  for (const [label, value] of rows) {
    table.append(
      el("tr", { "data-stat": label.replace(/ /g, "-") },
        el("th", {}, label),
        el("td", { class: "stat-value" }, value)),
    );
  }
  container.append(table);

  const breakdown = (title: string, counts: Record<string, number>, cls: string) => {
    const list = el("ul", { class: cls });
    for (const [key, count] of Object.entries(counts)) {
      list.append(el("li", { "data-key": key }, `${key}: ${count}`));
    }
    container.append(el("h4", {}, title), list);
  };
  breakdown("Responses per clinician", stats.per_hcp_responses, "per-hcp");
  breakdown("Alerts per patient", stats.per_patient_alerts, "per-patient");
}

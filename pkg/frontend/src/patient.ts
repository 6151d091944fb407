// Patient detail: header summary, one chart per vital with overlaid
// alert / medication / admission / consultation markers, then the
// consultation history.

import { renderVitalChart } from "./charts.js";
import { clear, el } from "./dom.js";
import { fmtTimestamp, fmtValue, trendLabel, vitalLabel } from "./format.js";
import { buildChartSet } from "./timeline.js";
import type { PatientSummary, TimelinePayload } from "./types.js";

export function renderPatient(
  container: HTMLElement,
  summary: PatientSummary,
  timeline: TimelinePayload,
): void {
  clear(container);

  const head = el(
    "div",
    { class: "patient-head" },
    el("h2", {}, summary.display_name),
    el("span", { class: "muted" }, ` ${summary.patient_id}`),
    el("span", { class: `stability ${summary.stability_class}` }, summary.stability_class),
    el(
      "span",
      { class: "alert-badge", "data-open-alerts": String(summary.open_alert_count) },
      `${summary.open_alert_count} open alerts`,
    ),
  );
  container.append(head);

  const chips = el("div", { class: "vital-chips" });
  for (const [vital, vs] of Object.entries(summary.vitals)) {
    chips.append(
      el(
        "span",
        { class: "chip", "data-vital": vital },
        vs.latest === null
          ? `${vitalLabel(vital)}: no readings`
          : `${vitalLabel(vital)}: ${fmtValue(vs.latest, vs.unit)} (${trendLabel(vs.trend)})`,
      ),
    );
  }
  container.append(chips);

  const set = buildChartSet(timeline);
  const chartsWrap = el("div", { class: "charts" });
  for (const data of set.charts) {
    const block = el("div", { class: "chart-block" });
    block.append(el("h4", {}, `${vitalLabel(data.vital)} (${data.unit})`));
    renderVitalChart(block, data);
    chartsWrap.append(block);
  }
  if (set.charts.length === 0) {
    chartsWrap.append(el("p", { class: "empty-state" }, "No readings yet."));
  }
  container.append(chartsWrap);

  if (set.admissions.length > 0) {
    const items = el("ul", { class: "admission-list" });
    for (const adm of set.admissions) {
      items.append(
        el("li", { "data-admission-id": adm.id },
          `${adm.start} to ${adm.end}: ${adm.reason}`),
      );
    }
    container.append(el("h4", {}, "Admissions"), items);
  }

  const consultHead = el("h4", {}, "Consultations");
  container.append(consultHead);
  if (set.consultations.length === 0) {
    container.append(el("p", { class: "muted" }, "None recorded."));
  } else {
    const items = el("ul", { class: "consultation-list" });
    for (const c of set.consultations) {
      items.append(
        el(
          "li",
          { "data-consultation-id": c.id },
          `${fmtTimestamp(c.timestamp)} ${c.channel} with ${c.hcp_id}: ${c.text}`,
        ),
      );
    }
    container.append(items);
  }
}

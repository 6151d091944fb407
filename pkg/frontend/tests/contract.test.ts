// Contract tests against a stubbed service: whatever the payload
// says is what the DOM must show, even where the payload is
// deliberately inconsistent with its own raw rows.

import { afterEach, beforeEach, describe, expect, it } from "vitest";
import { setBase } from "../src/api.js";
import { openCohort, pollOpenAlerts } from "../src/app.js";
import { renderPatient } from "../src/patient.js";
import { renderRoster } from "../src/roster.js";
import { renderStats } from "../src/statsview.js";
import {
  HANDLE,
  OPEN_ALERTS,
  STATS,
  SUMMARY_PT1,
  SUMMARY_PT2,
  TIMELINE_PT1,
  readRoutes,
} from "./fixtures.js";
import { installFetchStub, type FetchStub, type RecordedCall } from "./stub.js";

const tick = () => new Promise((resolve) => setTimeout(resolve, 0));

let root: HTMLElement;
let stub: FetchStub;

beforeEach(() => {
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.append(root);
  setBase("");
});

afterEach(() => {
  stub?.restore();
});

// ── Roster ───────────────────────────────────────────────────────

describe("roster", () => {
  it("renders one row per patient with payload values verbatim", () => {
    renderRoster(root, [SUMMARY_PT1, SUMMARY_PT2]);
    const rows = root.querySelectorAll(".roster-row");
    expect(rows).toHaveLength(2);

    const first = rows[0] as HTMLElement;
    expect(first.dataset.patientId).toBe("pt-001");
    expect(first.textContent).toContain("Arthur Pell");
    const weightChip = first.querySelector('.chip[data-vital="weight"]')!;
    expect(weightChip.textContent).toContain("85.2 kg");
    // payload says "down" even though the raw series rises; the chip
    // must echo the payload, not recompute a trend
    expect(weightChip.textContent).toContain("falling");
    expect(first.querySelector(".alert-badge")!.getAttribute("data-open-alerts")).toBe("1");

    const second = rows[1] as HTMLElement;
    expect(second.querySelector('.chip[data-vital="heart_rate"]')!.textContent)
      .toContain("64.2 bpm");
    expect(second.querySelector(".alert-badge")!.getAttribute("data-open-alerts")).toBe("0");
  });

  it("shows an empty state for an empty cohort", () => {
    renderRoster(root, []);
    expect(root.querySelector(".roster-row")).toBeNull();
    expect(root.querySelector(".empty-state")!.textContent).toMatch(/no patients/i);
  });

  it("marks vitals without readings instead of inventing numbers", () => {
    renderRoster(root, [SUMMARY_PT1]);
    const chip = root.querySelector('.chip[data-vital="systolic_bp"]')!;
    expect(chip.textContent).toContain("no readings");
  });
});

// ── Inbox ────────────────────────────────────────────────────────

describe("inbox", () => {
  it("lists open alerts in payload order and shows the context pane", async () => {
    stub = installFetchStub(readRoutes());
    await openCohort(root, "c-001", { pollMs: 0 });

    const rows = [...root.querySelectorAll(".inbox-row")] as HTMLElement[];
    expect(rows.map((r) => r.dataset.alertId)).toEqual(["al-00007", "al-00009"]);

    // oldest is selected on load; its reading comes straight from payload
    const detail = root.querySelector(".inbox-detail")!;
    expect(detail.textContent).toContain("al-00007");
    expect(detail.querySelector(".alert-value")!.textContent).toBe("86.4 kg");
    expect(detail.textContent).toContain("expected range 74 to 84 kg");

    // trailing readings table mirrors context.recent exactly
    const cells = [...detail.querySelectorAll(".recent-readings td")].map(
      (td) => td.textContent,
    );
    expect(cells).toEqual(["80.1", "82.7", "86.4"]);
  });

  it("offers the four actions and defaults to the assigned clinician", async () => {
    stub = installFetchStub(readRoutes());
    await openCohort(root, "c-001", { pollMs: 0 });

    const actions = [...root.querySelectorAll(".action-button")].map(
      (b) => (b as HTMLElement).dataset.action,
    );
    expect(actions).toEqual([
      "dismiss", "call_patient", "adjust_medication", "contact_colleague",
    ]);
    const select = root.querySelector(".hcp-select") as HTMLSelectElement;
    expect(select.value).toBe("hcp-02");
    expect(select.options).toHaveLength(2);
  });

  it("switching rows swaps the context pane", async () => {
    stub = installFetchStub(readRoutes());
    await openCohort(root, "c-001", { pollMs: 0 });

    (root.querySelectorAll(".inbox-row")[1] as HTMLElement).click();
    const detail = root.querySelector(".inbox-detail")!;
    expect(detail.textContent).toContain("al-00009");
    expect(detail.querySelector(".alert-value")!.textContent).toBe("96.0 mmHg");
    expect(detail.textContent).toContain("threshold_low, abrupt_change");
  });

  it("dismiss removes the row in place without refetching the list", async () => {
    stub = installFetchStub(readRoutes());
    stub.set("POST /cohorts/c-001/alerts/al-00007/response", {
      payload: (call: RecordedCall) => ({
        response: {
          id: "rs-00010", alert_id: "al-00007",
          hcp_id: (call.body as { hcp_id: string }).hcp_id,
          action: "dismiss", note: null, timestamp: "2024-01-06T09:00:00Z",
        },
        alert: { id: "al-00007", status: "resolved" },
        open_alert_count: 2,
      }),
    });
    await openCohort(root, "c-001", { pollMs: 0 });
    const listFetches = () =>
      stub.calls.filter((c) => c.path === "/cohorts/c-001/alerts?status=open").length;
    const before = listFetches();

    (root.querySelector('.action-button[data-action="dismiss"]') as HTMLElement).click();
    await tick();

    const rows = [...root.querySelectorAll(".inbox-row")] as HTMLElement[];
    expect(rows.map((r) => r.dataset.alertId)).toEqual(["al-00009"]);
    expect(listFetches()).toBe(before); // no reload
    const posted = stub.calls.find((c) => c.method === "POST")!;
    expect(posted.body).toMatchObject({ hcp_id: "hcp-02", action: "dismiss" });
    // badge takes the count the service returned with the response
    expect(root.querySelector(".open-count")!.textContent).toContain("2 open alerts");
  });

  it("double-submit conflict shows a toast and refreshes the inbox", async () => {
    stub = installFetchStub(readRoutes());
    stub.set("POST /cohorts/c-001/alerts/al-00007/response", {
      status: 409,
      payload: { kind: "conflict", message: "alert al-00007 already resolved" },
    });
    await openCohort(root, "c-001", { pollMs: 0 });
    const before = stub.calls.filter(
      (c) => c.path === "/cohorts/c-001/alerts?status=open",
    ).length;

    (root.querySelector('.action-button[data-action="dismiss"]') as HTMLElement).click();
    await tick();
    await tick();

    expect(root.querySelector(".toast")!.textContent).toContain("already resolved");
    const after = stub.calls.filter(
      (c) => c.path === "/cohorts/c-001/alerts?status=open",
    ).length;
    expect(after).toBe(before + 1); // refreshed from the service
    expect(root.querySelector(".inbox")).not.toBeNull(); // view intact
  });
});

// ── Patient detail and charts ────────────────────────────────────

describe("patient charts", () => {
  beforeEach(() => {
    renderPatient(root, SUMMARY_PT1, TIMELINE_PT1);
  });

  it("draws one dot per measurement on the right chart", () => {
    const weightChart = root.querySelector('svg[data-vital="weight"]')!;
    expect(weightChart.querySelectorAll(".reading")).toHaveLength(6);
    const hrChart = root.querySelector('svg[data-vital="heart_rate"]')!;
    expect(hrChart.querySelectorAll(".reading")).toHaveLength(2);
  });

  it("anchors the alert marker to its source measurement", () => {
    const marker = root.querySelector(".alert-marker")!;
    expect(marker.getAttribute("data-alert-id")).toBe("al-00007");
    expect(marker.getAttribute("data-measurement-id")).toBe("ms-00031");
    const dot = root.querySelector('.reading[data-measurement-id="ms-00031"]')!;
    expect(marker.getAttribute("cx")).toBe(dot.getAttribute("cx"));
    expect(marker.getAttribute("cy")).toBe(dot.getAttribute("cy"));
  });

  it("clicking the alert marker highlights the source measurement", () => {
    const marker = root.querySelector(".alert-marker") as SVGElement;
    marker.dispatchEvent(new MouseEvent("click"));
    const dot = root.querySelector('.reading[data-measurement-id="ms-00031"]')!;
    expect(dot.classList.contains("highlighted")).toBe(true);
  });

  it("puts the medication marker on the chart of its effect vital", () => {
    const weightChart = root.querySelector('svg[data-vital="weight"]')!;
    const marker = weightChart.querySelector(".med-marker")!;
    expect(marker.getAttribute("data-med-id")).toBe("mc-001");
    expect(marker.getAttribute("data-drug")).toBe("furosemide");
    const hrChart = root.querySelector('svg[data-vital="heart_rate"]')!;
    expect(hrChart.querySelector(".med-marker")).toBeNull();
  });

  it("shades the admission interval on every chart", () => {
    const charts = [...root.querySelectorAll("svg.vital-chart")];
    expect(charts.length).toBeGreaterThan(1);
    for (const chart of charts) {
      const span = chart.querySelector(".admission-span")!;
      expect(span).not.toBeNull();
      expect(span.getAttribute("data-admission-id")).toBe("ad-001");
    }
  });

  it("ticks consultations on the charts and lists them below", () => {
    for (const chart of root.querySelectorAll("svg.vital-chart")) {
      expect(chart.querySelector('.consult-tick[data-consult-id="cs-001"]')).not.toBeNull();
    }
    const item = root.querySelector('[data-consultation-id="cs-001"]')!;
    expect(item.textContent).toContain("phone");
    expect(item.textContent).toContain("Reviewed weight gain");
  });

  it("draws threshold guides from the payload thresholds", () => {
    const weightChart = root.querySelector('svg[data-vital="weight"]')!;
    expect(weightChart.querySelector(".threshold-low")).not.toBeNull();
    expect(weightChart.querySelector(".threshold-high")).not.toBeNull();
  });

  it("summary chips echo the payload trend even when the series disagrees", () => {
    const chip = root.querySelector('.patient-body .chip[data-vital="weight"], .chip[data-vital="weight"]')!;
    expect(chip.textContent).toContain("85.2 kg");
    expect(chip.textContent).toContain("falling");
  });
});

// ── Stats ────────────────────────────────────────────────────────

describe("stats", () => {
  it("renders every stat verbatim, including the precomputed rate", () => {
    renderStats(root, STATS);
    const cell = (name: string) =>
      root.querySelector(`[data-stat="${name}"] .stat-value`)!.textContent;
    expect(cell("measurements")).toBe("100");
    expect(cell("alerts")).toBe("4");
    // 4/100 = 0.04; the payload says 0.2222 and that is what renders
    expect(cell("alert-rate")).toBe("0.2222");
    expect(cell("open-alerts")).toBe("3");
    expect(cell("admitted-patient-days")).toBe("2");

    const hcpItems = [...root.querySelectorAll(".per-hcp li")].map((li) => li.textContent);
    expect(hcpItems).toEqual(["hcp-01: 5", "hcp-02: 4"]);
  });
});

// ── Header, advance control, polling ─────────────────────────────

describe("cohort header", () => {
  it("shows clock and the service-reported open count, not the list length", async () => {
    stub = installFetchStub(readRoutes());
    await openCohort(root, "c-001", { pollMs: 0 });
    expect(root.querySelector(".clock")!.textContent).toContain("2024-01-06");
    // handle says 3 even though the open list has 2 entries
    expect(root.querySelector(".open-count")!.textContent).toContain("3 open alerts");
  });

  it("disables advancing while alerts are pending, with a hint", async () => {
    stub = installFetchStub(readRoutes());
    await openCohort(root, "c-001", { pollMs: 0 });
    const button = root.querySelector(".advance-button") as HTMLButtonElement;
    expect(button.disabled).toBe(true);
    expect(root.querySelector(".advance-hint")!.textContent).toMatch(/clear the open alerts/);
  });

  it("advances when clear and displays the day report", async () => {
    const clearedHandle = { ...HANDLE, open_alert_count: 0 };
    const advancedHandle = { ...HANDLE, open_alert_count: 1, clock: "2024-01-07" };
    stub = installFetchStub({
      ...readRoutes(),
      "GET /cohorts/c-001": { payload: clearedHandle },
      "POST /cohorts/c-001/advance": {
        payload: {
          days_advanced: 1, new_measurements: 8, new_alerts: 1,
          clock: "2024-01-07", open_alerts: 1, complete: false,
        },
      },
    });
    await openCohort(root, "c-001", { pollMs: 0 });
    const button = root.querySelector(".advance-button") as HTMLButtonElement;
    expect(button.disabled).toBe(false);

    stub.set("GET /cohorts/c-001", { payload: advancedHandle });
    button.click();
    await tick();
    await tick();

    const advance = stub.calls.find((c) => c.method === "POST" && c.path.endsWith("/advance"))!;
    expect(advance.body).toEqual({ days: 1 });
    expect(root.querySelector(".clock")!.textContent).toContain("2024-01-07");
    expect(root.querySelector(".day-report")!.textContent)
      .toContain("8 readings, 1 new alerts");
  });

  it("shows the complete state instead of a button", async () => {
    const done = { ...HANDLE, open_alert_count: 0, complete: true, clock: "2024-02-09" };
    stub = installFetchStub({ ...readRoutes(), "GET /cohorts/c-001": { payload: done } });
    await openCohort(root, "c-001", { pollMs: 0 });
    expect(root.querySelector(".advance-button")).toBeNull();
    expect(root.querySelector(".complete-chip")!.textContent).toBe("cohort complete");
  });

  it("polling refreshes the open-alert badge", async () => {
    stub = installFetchStub(readRoutes());
    const shell = await openCohort(root, "c-001", { pollMs: 0 });
    stub.set("GET /cohorts/c-001", { payload: { ...HANDLE, open_alert_count: 7 } });
    await pollOpenAlerts(shell);
    expect(root.querySelector(".open-count")!.textContent).toContain("7 open alerts");
  });
});

// ── Cohort list fixture sanity ───────────────────────────────────

describe("fixture consistency", () => {
  it("open alert fixtures really are oldest first", () => {
    const times = OPEN_ALERTS.map((a) => Date.parse(a.created_at));
    expect(times).toEqual([...times].sort((a, b) => a - b));
  });
});

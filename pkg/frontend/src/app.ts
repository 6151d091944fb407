// Shell: cohort picker, header with clock and advance-day control,
// inbox-first tabs, patient drill-in, open-alert polling, toasts.

import {
  ApiError,
  advanceDay,
  createCohort,
  getCohort,
  getStats,
  getSummary,
  getTimeline,
  listAlerts,
  listCohorts,
  listPatients,
} from "./api.js";
import { clear, el } from "./dom.js";
import { fmtClock } from "./format.js";
import { renderInbox } from "./inbox.js";
import { renderPatient } from "./patient.js";
import { renderRoster } from "./roster.js";
import { renderStats } from "./statsview.js";
import type { CohortHandle, DayReport } from "./types.js";

export interface AppOpts {
  /** Poll interval for the open-alert badge; 0 disables the timer. */
  pollMs?: number;
}

interface Shell {
  root: HTMLElement;
  header: HTMLElement;
  toastBox: HTMLElement;
  main: HTMLElement;
  handle: CohortHandle;
  tab: "inbox" | "roster" | "stats";
  pollTimer: ReturnType<typeof setInterval> | null;
  lastReport: DayReport | null;
}

export function toast(box: HTMLElement, message: string): void {
  const node = el("div", { class: "toast" }, message);
  box.append(node);
  setTimeout(() => node.remove(), 4000);
}

// ── Cohort picker ────────────────────────────────────────────────

export async function renderPicker(root: HTMLElement, opts: AppOpts = {}): Promise<void> {
  clear(root);
  const cohorts = await listCohorts();
  const box = el("div", { class: "picker" }, el("h2", {}, "Cohorts"));

  if (cohorts.length === 0) {
    box.append(el("p", { class: "empty-state" }, "No cohorts on this service yet."));
  }
  for (const handle of cohorts) {
    const row = el(
      "div",
      { class: "picker-row", "data-cohort-id": handle.cohort_id },
      el("strong", {}, handle.cohort_id),
      el("span", { class: "muted" },
        ` ${handle.mode}, ${handle.n_patients} patients, day clock ${fmtClock(handle.clock)}`),
      el("span", { class: "alert-badge" }, `${handle.open_alert_count} open`),
    );
    row.addEventListener("click", () => void openCohort(root, handle.cohort_id, opts));
    box.append(row);
  }

  // minimal create form; the service validates everything
  const patients = el("input", { type: "number", value: "6", "aria-label": "patients" });
  const days = el("input", { type: "number", value: "30", "aria-label": "days" });
  const seed = el("input", { type: "number", value: "1", "aria-label": "seed" });
  const mode = el("select", { "aria-label": "mode" },
    el("option", { value: "interactive" }, "interactive"),
    el("option", { value: "batch" }, "batch"));
  const createBtn = el("button", { class: "create-button" }, "Create cohort");
  createBtn.addEventListener("click", async () => {
    (createBtn as HTMLButtonElement).disabled = true;
    try {
      const handle = await createCohort({
        n_patients: Number((patients as HTMLInputElement).value),
        duration_days: Number((days as HTMLInputElement).value),
        seed: Number((seed as HTMLInputElement).value),
        mode: (mode as HTMLSelectElement).value,
      });
      await openCohort(root, handle.cohort_id, opts);
    } catch (err) {
      (createBtn as HTMLButtonElement).disabled = false;
      const msg = err instanceof Error ? err.message : String(err);
      box.append(el("p", { class: "form-error" }, msg));
    }
  });
  box.append(
    el("div", { class: "create-form" },
      el("label", {}, "patients ", patients),
      el("label", {}, "days ", days),
      el("label", {}, "seed ", seed),
      el("label", {}, "mode ", mode),
      createBtn),
  );
  root.append(box);
}

// ── Cohort shell ─────────────────────────────────────────────────

export async function openCohort(
  root: HTMLElement,
  cohortId: string,
  opts: AppOpts = {},
): Promise<Shell> {
  const handle = await getCohort(cohortId);
  clear(root);

  const header = el("div", { class: "cohort-header" });
  const toastBox = el("div", { class: "toasts" });
  const tabs = el("div", { class: "tabs" });
  const main = el("div", { class: "main" });
  root.append(header, toastBox, tabs, main);

  const shell: Shell = {
    root, header, toastBox, main, handle,
    tab: "inbox", pollTimer: null, lastReport: null,
  };

  for (const name of ["inbox", "roster", "stats"] as const) {
    const button = el("button", { class: "tab-button", "data-tab": name }, name);
    button.addEventListener("click", () => {
      shell.tab = name;
      void renderMain(shell);
    });
    tabs.append(button);
  }
  const back = el("button", { class: "tab-button back" }, "all cohorts");
  back.addEventListener("click", () => {
    stopPolling(shell);
    void renderPicker(root, opts);
  });
  tabs.append(back);

  renderHeader(shell);
  await renderMain(shell);

  const pollMs = opts.pollMs ?? 5000;
  if (pollMs > 0) {
    shell.pollTimer = setInterval(() => void pollOpenAlerts(shell), pollMs);
  }
  return shell;
}

export function stopPolling(shell: Shell): void {
  if (shell.pollTimer !== null) {
    clearInterval(shell.pollTimer);
    shell.pollTimer = null;
  }
}

/** One badge refresh; the interval handler and tests both call this. */
export async function pollOpenAlerts(shell: Shell): Promise<void> {
  try {
    shell.handle = await getCohort(shell.handle.cohort_id);
  } catch {
    return; // transient poll failure, keep the last known header
  }
  renderHeader(shell);
}

export function renderHeader(shell: Shell): void {
  const { handle } = shell;
  clear(shell.header);
  shell.header.append(
    el("strong", {}, handle.cohort_id),
    el("span", { class: `mode-chip ${handle.mode}` }, handle.mode),
    el("span", { class: "clock", "data-clock": handle.clock ?? "" },
      `day clock: ${fmtClock(handle.clock)}`),
    el("span", { class: "open-count", "data-open-alerts": String(handle.open_alert_count) },
      `${handle.open_alert_count} open alerts`),
  );

  if (handle.mode !== "interactive") {
    shell.header.append(el("span", { class: "readonly-chip" }, "read only"));
  } else if (handle.complete) {
    shell.header.append(el("span", { class: "complete-chip" }, "cohort complete"));
  } else {
    const button = el("button", { class: "advance-button" }, "Advance one day");
    const blocked = handle.open_alert_count > 0;
    if (blocked) {
      (button as HTMLButtonElement).disabled = true;
      shell.header.append(
        button,
        el("span", { class: "advance-hint" },
          "clear the open alerts before advancing"),
      );
    } else {
      button.addEventListener("click", () => void doAdvance(shell));
      shell.header.append(button);
    }
  }

  if (shell.lastReport) {
    const r = shell.lastReport;
    shell.header.append(
      el("span", { class: "day-report" },
        `+${r.days_advanced} day: ${r.new_measurements} readings, ` +
        `${r.new_alerts} new alerts`),
    );
  }
}

async function doAdvance(shell: Shell): Promise<void> {
  try {
    shell.lastReport = await advanceDay(shell.handle.cohort_id);
  } catch (err) {
    if (err instanceof ApiError) {
      toast(shell.toastBox, err.message);
      await pollOpenAlerts(shell);
      return;
    }
    throw err;
  }
  shell.handle = await getCohort(shell.handle.cohort_id);
  renderHeader(shell);
  await renderMain(shell);
}

export async function renderMain(shell: Shell): Promise<void> {
  clear(shell.main);
  const cohortId = shell.handle.cohort_id;
  const readOnly = shell.handle.mode !== "interactive";

  if (shell.tab === "inbox") {
    const alerts = await listAlerts(cohortId, "open");
    renderInbox(shell.main, alerts, {
      cohortId,
      readOnly,
      onResolved: (result) => {
        shell.handle = { ...shell.handle, open_alert_count: result.open_alert_count };
        renderHeader(shell);
      },
      onConflict: (message) => {
        toast(shell.toastBox, message);
        // someone else moved first; re-pull the list
        void renderMain(shell);
      },
      onOpenPatient: (patientId) => void showPatient(shell, patientId),
    });
  } else if (shell.tab === "roster") {
    const patients = await listPatients(cohortId);
    renderRoster(shell.main, patients, {
      onSelect: (patientId) => void showPatient(shell, patientId),
    });
  } else {
    const stats = await getStats(cohortId);
    renderStats(shell.main, stats);
  }
}

export async function showPatient(shell: Shell, patientId: string): Promise<void> {
  const cohortId = shell.handle.cohort_id;
  const [summary, timeline] = await Promise.all([
    getSummary(cohortId, patientId),
    getTimeline(cohortId, patientId),
  ]);
  clear(shell.main);
  const backRow = el("div", { class: "patient-nav" });
  const back = el("button", { class: "tab-button" }, "back");
  back.addEventListener("click", () => void renderMain(shell));
  backRow.append(back);
  shell.main.append(backRow);
  const body = el("div", { class: "patient-body" });
  shell.main.append(body);
  renderPatient(body, summary, timeline);
}

// ── Entry point ──────────────────────────────────────────────────

export function main(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  void renderPicker(root);
}

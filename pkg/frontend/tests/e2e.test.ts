// End-to-end scripted triage session against a live service process:
// open the oldest alert, adjust medication, clear the rest, advance a
// day, and confirm the inbox, the patient chart markers, and the
// stats endpoint all agree with each other.

import { spawn, type ChildProcess } from "node:child_process";
import { createServer } from "node:net";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import {
  createCohort,
  getStats,
  getTimeline,
  setBase,
} from "../src/api.js";
import { openCohort } from "../src/app.js";

const tick = () => new Promise((resolve) => setTimeout(resolve, 25));

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      const port = address.port;
      probe.close(() => resolve(port));
    });
    probe.on("error", reject);
  });
}

let server: ChildProcess;
let base = "";

beforeAll(async () => {
  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  server = spawn("python3", ["-m", "rpmsim.cli", "serve", "--host", "127.0.0.1", "--port", String(port)], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  const failed = new Promise<never>((_, reject) => {
    server.on("exit", (code) => reject(new Error(`service exited early (${code})`)));
  });
  const ready = (async () => {
    for (let attempt = 0; attempt < 150; attempt++) {
      try {
        const res = await globalThis.fetch(`${base}/cohorts`);
        if (res.ok) return;
      } catch {
        // not listening yet
      }
      await new Promise((resolve) => setTimeout(resolve, 200));
    }
    throw new Error("service never became ready");
  })();
  await Promise.race([ready, failed]);
  server.removeAllListeners("exit");
  setBase(base);
}, 60_000);

afterAll(() => {
  server?.kill("SIGTERM");
});

describe("live triage session", () => {
  it("adjusting medication flows through inbox, chart, and stats", async () => {
    const handle = await createCohort({
      n_patients: 6,
      n_hcps: 2,
      duration_days: 60,
      seed: 3,
      mode: "interactive",
    });
    expect(handle.complete).toBe(false);
    expect(handle.open_alert_count).toBeGreaterThan(0);

    const statsBefore = await getStats(handle.cohort_id);

    document.body.innerHTML = "";
    const root = document.createElement("div");
    document.body.append(root);
    const shell = await openCohort(root, handle.cohort_id, { pollMs: 0 });

    const rows = () => [...root.querySelectorAll(".inbox-row")] as HTMLElement[];
    const openCount = rows().length;
    expect(openCount).toBe(handle.open_alert_count);

    // the oldest alert is preselected; read what the dialog shows
    const oldest = rows()[0];
    const oldestId = oldest.dataset.alertId!;
    const detailText = root.querySelector(".inbox-detail")!.textContent!;
    expect(detailText).toContain(oldestId);
    const patientId = (await (async () => {
      // patient id comes from the payload the service sent for this alert
      const res = await globalThis.fetch(
        `${base}/cohorts/${handle.cohort_id}/alerts?status=open`,
      );
      const alerts = (await res.json()) as { id: string; patient_id: string }[];
      return alerts.find((a) => a.id === oldestId)!.patient_id;
    })());

    const markersBefore = (await getTimeline(handle.cohort_id, patientId)).events.filter(
      (e) => e.kind === "medication_change",
    ).length;

    // submit adjust_medication on the oldest alert
    const note = root.querySelector(".note-input") as HTMLTextAreaElement;
    note.value = "Upping the diuretic per protocol.";
    (root.querySelector('.action-button[data-action="adjust_medication"]') as HTMLElement).click();
    await tick();

    // (a) the inbox shrank by exactly that alert, no reload involved
    expect(rows().length).toBe(openCount - 1);
    expect(rows().map((r) => r.dataset.alertId)).not.toContain(oldestId);

    // clear the remaining alerts so the advance control unlocks
    while (rows().length > 0) {
      rows()[0].click();
      await tick();
      (root.querySelector('.action-button[data-action="dismiss"]') as HTMLElement).click();
      await tick();
    }
    const advance = root.querySelector(".advance-button") as HTMLButtonElement;
    expect(advance).not.toBeNull();
    expect(advance.disabled).toBe(false);

    const clockBefore = shell.handle.clock!;
    advance.click();
    for (let i = 0; i < 40 && shell.handle.clock === clockBefore; i++) await tick();

    // clock moved forward exactly one day
    const dayMs = 24 * 60 * 60 * 1000;
    expect(Date.parse(shell.handle.clock!) - Date.parse(clockBefore)).toBe(dayMs);

    // (b) the medication change now shows as a chart marker
    const timeline = await getTimeline(handle.cohort_id, patientId);
    const medEvents = timeline.events.filter((e) => e.kind === "medication_change");
    expect(medEvents.length).toBe(markersBefore + 1);

    await (async () => {
      const body = document.createElement("div");
      document.body.append(body);
      const { renderPatient } = await import("../src/patient.js");
      const summaryRes = await globalThis.fetch(
        `${base}/cohorts/${handle.cohort_id}/patients/${patientId}/summary`,
      );
      renderPatient(body, await summaryRes.json(), timeline);
      const markers = body.querySelectorAll(".med-marker");
      expect(markers.length).toBe(medEvents.length);
      const newest = medEvents[medEvents.length - 1];
      expect(
        body.querySelector(`.med-marker[data-med-id="${newest.entity_id}"]`),
      ).not.toBeNull();
      body.remove();
    })();

    // (c) stats endpoint agrees with what the session did and shows
    const statsAfter = await getStats(handle.cohort_id);
    expect(statsAfter.medication_change_count).toBe(statsBefore.medication_change_count + 1);
    expect(statsAfter.response_count).toBe(statsBefore.response_count + openCount);
    expect(statsAfter.open_alert_count).toBe(shell.handle.open_alert_count);

    // the rendered inbox matches the stats endpoint count
    const inboxRows = root.querySelectorAll(".inbox-row").length;
    expect(inboxRows).toBe(statsAfter.open_alert_count);
    expect(root.querySelector(".open-count")!.textContent)
      .toContain(`${statsAfter.open_alert_count} open alerts`);
  }, 120_000);
});

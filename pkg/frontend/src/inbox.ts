// Alert inbox: oldest-first open alerts (the service already sorts by
// creation time), a context pane for the selected alert, and the
// response dialog. Submitting goes straight to the service; the list
// updates in place from the response payload.

import { ApiError, submitResponse } from "./api.js";
import { clear, el } from "./dom.js";
import { ACTION_LABELS, fmtTimestamp, fmtValue, vitalLabel } from "./format.js";
import type { AlertPayload, ResponseResult } from "./types.js";

export interface InboxOpts {
  cohortId: string;
  readOnly?: boolean;
  onResolved?: (result: ResponseResult) => void;
  onConflict?: (message: string) => void;
  onOpenPatient?: (patientId: string) => void;
}

export function renderInbox(
  container: HTMLElement,
  alerts: AlertPayload[],
  opts: InboxOpts,
): void {
  clear(container);
  const listPane = el("div", { class: "inbox-list" });
  const detailPane = el("div", { class: "inbox-detail" });
  container.append(el("div", { class: "inbox" }, listPane, detailPane));

  if (alerts.length === 0) {
    listPane.append(el("p", { class: "empty-state" }, "Inbox empty."));
    detailPane.append(el("p", { class: "muted" }, "No alert selected."));
    return;
  }

  let selectedRow: HTMLElement | null = null;
  const rows = new Map<string, HTMLElement>();

  const select = (alert: AlertPayload) => {
    selectedRow?.classList.remove("selected");
    selectedRow = rows.get(alert.id) ?? null;
    selectedRow?.classList.add("selected");
    renderDetail(detailPane, alert, opts, (resolvedId, result) => {
      // drop the row in place, no reload
      rows.get(resolvedId)?.remove();
      rows.delete(resolvedId);
      clear(detailPane);
      detailPane.append(
        el("p", { class: "muted" }, `Alert ${resolvedId} handled.`),
      );
      if (rows.size === 0) {
        listPane.append(el("p", { class: "empty-state" }, "Inbox empty."));
      }
      opts.onResolved?.(result);
    });
  };

  for (const alert of alerts) {
    const row = el(
      "div",
      { class: `inbox-row severity-${alert.severity}`, "data-alert-id": alert.id },
      el("span", { class: "alert-id" }, alert.id),
      el("strong", {}, ` ${alert.patient_name}`),
      el(
        "span",
        {},
        ` ${vitalLabel(alert.vital)} ${fmtValue(alert.value, alert.unit)}`,
      ),
      el("span", { class: `severity-chip ${alert.severity}` }, alert.severity),
      el("span", { class: "muted" }, ` ${fmtTimestamp(alert.created_at)}`),
    );
    row.addEventListener("click", () => select(alert));
    rows.set(alert.id, row);
    listPane.append(row);
  }

  // oldest first means the first row is the one to work next
  select(alerts[0]);
}

function renderDetail(
  pane: HTMLElement,
  alert: AlertPayload,
  opts: InboxOpts,
  onDone: (alertId: string, result: ResponseResult) => void,
): void {
  clear(pane);

  const patientLink = el("a", { href: "#", class: "patient-link" }, alert.patient_name);
  patientLink.addEventListener("click", (ev) => {
    ev.preventDefault();
    opts.onOpenPatient?.(alert.patient_id);
  });

  pane.append(
    el(
      "div",
      { class: "detail-head" },
      el("h3", {}, `${alert.id} `),
      patientLink,
      el("span", { class: `severity-chip ${alert.severity}` }, alert.severity),
    ),
    el(
      "p",
      { class: "detail-reading" },
      `${vitalLabel(alert.vital)}: `,
      el("strong", { class: "alert-value" }, fmtValue(alert.value, alert.unit)),
      ` at ${fmtTimestamp(alert.created_at)}`,
    ),
    el("p", { class: "muted rules" }, `rules: ${alert.rules.join(", ")}`),
    el(
      "p",
      { class: "thresholds" },
      `expected range ${alert.context.thresholds.low} to ${alert.context.thresholds.high} ${alert.unit}`,
    ),
  );

  // trailing readings straight from the payload
  const table = el("table", { class: "recent-readings" });
  const head = el("tr", {});
  const valuesRow = el("tr", {});
  for (const reading of alert.context.recent) {
    head.append(el("th", {}, fmtTimestamp(reading.timestamp)));
    valuesRow.append(el("td", {}, String(reading.value)));
  }
  table.append(head, valuesRow);
  pane.append(el("div", { class: "recent-wrap" }, table));

  if (opts.readOnly) {
    pane.append(el("p", { class: "muted" }, "Read-only cohort; responses disabled."));
    return;
  }

  // response dialog: pick an HCP, one of the four actions, optional note
  const hcpSelect = el("select", { class: "hcp-select" });
  for (const hcp of alert.context.hcps) {
    const option = el("option", { value: hcp.id }, `${hcp.display_name} (${hcp.id})`);
    if (hcp.id === alert.assigned_hcp_id) option.setAttribute("selected", "");
    hcpSelect.append(option);
  }
  if (alert.assigned_hcp_id) hcpSelect.value = alert.assigned_hcp_id;

  const note = el("textarea", {
    class: "note-input",
    placeholder: "optional note",
    rows: "2",
  });
  const status = el("p", { class: "dialog-status" });

  const actions = el("div", { class: "actions" });
  for (const [action, label] of Object.entries(ACTION_LABELS)) {
    const button = el(
      "button",
      { class: "action-button", "data-action": action },
      label,
    );
    button.addEventListener("click", async () => {
      for (const b of actions.querySelectorAll("button")) {
        (b as HTMLButtonElement).disabled = true;
      }
      try {
        const result = await submitResponse(opts.cohortId, alert.id, {
          hcp_id: (hcpSelect as HTMLSelectElement).value,
          action,
          note: (note as HTMLTextAreaElement).value || undefined,
        });
        onDone(alert.id, result);
      } catch (err) {
        for (const b of actions.querySelectorAll("button")) {
          (b as HTMLButtonElement).disabled = false;
        }
        if (err instanceof ApiError && err.status === 409) {
          // someone already closed it; keep the pane intact and tell the shell
          status.textContent = "Already handled elsewhere.";
          opts.onConflict?.(err.message);
        } else {
          status.textContent = err instanceof Error ? err.message : String(err);
        }
      }
    });
    actions.append(button);
  }

  pane.append(
    el("div", { class: "dialog" },
      el("label", { class: "muted" }, "responding as "),
      hcpSelect, note, actions, status),
  );
}

import type {
  AlertPayload,
  CohortHandle,
  CohortStatsPayload,
  DayReport,
  PatientSummary,
  ResponseResult,
  TimelinePayload,
} from "./types.js";

let base = "";

/** Point the client at a service root, e.g. "http://127.0.0.1:8000". */
export function setBase(url: string): void {
  base = url.replace(/\/$/, "");
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public kind: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const res = await globalThis.fetch(base + path, init);
  if (!res.ok) {
    let kind = "error";
    let message = `${res.status} ${res.statusText}`;
    try {
      const body = await res.json();
      if (body && body.kind) {
        kind = body.kind;
        message = body.message ?? message;
      }
    } catch {
      // non-JSON error body, keep the status line
    }
    throw new ApiError(res.status, kind, message);
  }
  return res.json() as Promise<T>;
}

function post<T>(path: string, body: unknown): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
}

export const createCohort = (config: Record<string, unknown>) =>
  post<CohortHandle>("/cohorts", { config });

export const listCohorts = () => request<CohortHandle[]>("/cohorts");

export const getCohort = (id: string) => request<CohortHandle>(`/cohorts/${id}`);

export const advanceDay = (id: string, days = 1) =>
  post<DayReport>(`/cohorts/${id}/advance`, { days });

export const listAlerts = (id: string, status: "all" | "open" | "resolved" = "all") =>
  request<AlertPayload[]>(`/cohorts/${id}/alerts?status=${status}`);

export const submitResponse = (
  id: string,
  alertId: string,
  body: { hcp_id: string; action: string; note?: string },
) => post<ResponseResult>(`/cohorts/${id}/alerts/${alertId}/response`, body);

export const listPatients = (id: string) =>
  request<PatientSummary[]>(`/cohorts/${id}/patients`);

export const getTimeline = (id: string, patientId: string) =>
  request<TimelinePayload>(`/cohorts/${id}/patients/${patientId}/timeline`);

export const getSummary = (id: string, patientId: string) =>
  request<PatientSummary>(`/cohorts/${id}/patients/${patientId}/summary`);

export const getStats = (id: string) =>
  request<CohortStatsPayload>(`/cohorts/${id}/stats`);

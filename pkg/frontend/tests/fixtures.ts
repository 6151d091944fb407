// Canned service payloads. Derived fields are deliberately
// inconsistent with the raw rows (alert_rate, trend, open counts) so
// any client-side recomputation shows up as a test failure: the UI
// must render what the service said, not what it could calculate.

import type {
  AlertPayload,
  CohortHandle,
  CohortStatsPayload,
  PatientSummary,
  TimelinePayload,
} from "../src/types.js";

export const HANDLE: CohortHandle = {
  cohort_id: "c-001",
  mode: "interactive",
  seed: 5,
  n_patients: 2,
  n_hcps: 2,
  duration_days: 30,
  clock: "2024-01-06",
  // one more than the open list below holds: the badge must echo this
  open_alert_count: 3,
  complete: false,
};

const HCPS = [
  { id: "hcp-01", display_name: "Dana Whitfield, RN" },
  { id: "hcp-02", display_name: "Priya Raman, NP" },
];

export const OPEN_ALERTS: AlertPayload[] = [
  {
    id: "al-00007",
    patient_id: "pt-001",
    measurement_id: "ms-00031",
    rules: ["threshold_high"],
    severity: "high",
    created_at: "2024-01-03T08:05:00Z",
    status: "open",
    assigned_hcp_id: "hcp-02",
    patient_name: "Arthur Pell",
    vital: "weight",
    value: 86.4,
    unit: "kg",
    context: {
      thresholds: { low: 74.0, high: 84.0 },
      recent: [
        { timestamp: "2024-01-01T08:00:00Z", value: 80.1 },
        { timestamp: "2024-01-02T08:00:00Z", value: 82.7 },
        { timestamp: "2024-01-03T08:00:00Z", value: 86.4 },
      ],
      hcps: HCPS,
    },
  },
  {
    id: "al-00009",
    patient_id: "pt-002",
    measurement_id: "ms-00044",
    rules: ["threshold_low", "abrupt_change"],
    severity: "standard",
    created_at: "2024-01-04T08:30:00Z",
    status: "open",
    assigned_hcp_id: "hcp-01",
    patient_name: "Maren Kowalczyk",
    vital: "systolic_bp",
    value: 96.0,
    unit: "mmHg",
    context: {
      thresholds: { low: 100.0, high: 150.0 },
      recent: [
        { timestamp: "2024-01-03T08:10:00Z", value: 118.0 },
        { timestamp: "2024-01-04T08:10:00Z", value: 96.0 },
      ],
      hcps: HCPS,
    },
  },
];

export const SUMMARY_PT1: PatientSummary = {
  patient_id: "pt-001",
  display_name: "Arthur Pell",
  stability_class: "declining",
  vitals: {
    weight: {
      latest: 85.2,
      latest_at: "2024-01-06T08:00:00Z",
      // raw readings rise, yet the service says "down"; render "down"
      trend: "down",
      unit: "kg",
    },
    heart_rate: { latest: 71.0, latest_at: "2024-01-02T08:01:00Z", trend: null, unit: "bpm" },
    systolic_bp: { latest: null, latest_at: null, trend: null, unit: "mmHg" },
    diastolic_bp: { latest: null, latest_at: null, trend: null, unit: "mmHg" },
  },
  open_alert_count: 1,
  admission_count: 1,
  medication_change_count: 1,
  consultation_count: 1,
  last_contact: { date: "2024-01-05", channel: "phone" },
};

export const SUMMARY_PT2: PatientSummary = {
  patient_id: "pt-002",
  display_name: "Maren Kowalczyk",
  stability_class: "stable",
  vitals: {
    weight: { latest: 68.4, latest_at: "2024-01-06T08:02:00Z", trend: "flat", unit: "kg" },
    heart_rate: { latest: 64.2, latest_at: "2024-01-06T08:03:00Z", trend: "up", unit: "bpm" },
    systolic_bp: { latest: 96.0, latest_at: "2024-01-04T08:10:00Z", trend: "down", unit: "mmHg" },
    diastolic_bp: { latest: 71.5, latest_at: "2024-01-06T08:04:00Z", trend: "flat", unit: "mmHg" },
  },
  open_alert_count: 0,
  admission_count: 0,
  medication_change_count: 0,
  consultation_count: 0,
  last_contact: null,
};

function measurement(
  id: string,
  ts: string,
  vital: string,
  value: number,
  unit: string,
) {
  return {
    kind: "measurement" as const,
    timestamp: ts,
    entity_id: id,
    payload: {
      id, patient_id: "pt-001", timestamp: ts, vital, value, unit, comment: null,
    },
  };
}

export const TIMELINE_PT1: TimelinePayload = {
  patient_id: "pt-001",
  display_name: "Arthur Pell",
  thresholds: {
    weight: { low: 74.0, high: 84.0 },
    heart_rate: { low: 50.0, high: 100.0 },
    systolic_bp: { low: 100.0, high: 150.0 },
    diastolic_bp: { low: 60.0, high: 95.0 },
  },
  events: [
    measurement("ms-00011", "2024-01-01T08:00:00Z", "weight", 80.1, "kg"),
    measurement("ms-00012", "2024-01-01T08:01:00Z", "heart_rate", 68.0, "bpm"),
    {
      kind: "admission",
      timestamp: "2024-01-02T00:00:00Z",
      entity_id: "ad-001",
      payload: {
        id: "ad-001", patient_id: "pt-001",
        start: "2024-01-02", end: "2024-01-03",
        reason: "repeated high-severity alerts",
      },
    },
    measurement("ms-00021", "2024-01-02T08:00:00Z", "weight", 82.7, "kg"),
    measurement("ms-00022", "2024-01-02T08:01:00Z", "heart_rate", 71.0, "bpm"),
    measurement("ms-00031", "2024-01-03T08:00:00Z", "weight", 86.4, "kg"),
    {
      kind: "alert",
      timestamp: "2024-01-03T08:05:00Z",
      entity_id: "al-00007",
      measurement_id: "ms-00031",
      response_ids: [],
      payload: {
        id: "al-00007", patient_id: "pt-001", measurement_id: "ms-00031",
        rules: ["threshold_high"], severity: "high",
        created_at: "2024-01-03T08:05:00Z", status: "open",
        assigned_hcp_id: "hcp-02",
      },
    },
    {
      kind: "medication_change",
      timestamp: "2024-01-04T09:00:00Z",
      entity_id: "mc-001",
      payload: {
        id: "mc-001", patient_id: "pt-001", drug: "furosemide",
        change: "increase", timestamp: "2024-01-04T09:00:00Z",
        effect: { vital: "weight", direction: "down", magnitude: 1.2, onset_days: 3 },
      },
    },
    measurement("ms-00041", "2024-01-04T08:00:00Z", "weight", 84.9, "kg"),
    {
      kind: "consultation",
      timestamp: "2024-01-05T10:00:00Z",
      entity_id: "cs-001",
      payload: {
        id: "cs-001", patient_id: "pt-001", hcp_id: "hcp-01",
        timestamp: "2024-01-05T10:00:00Z", channel: "phone",
        text: "Reviewed weight gain, reinforced fluid limits.",
      },
    },
    measurement("ms-00051", "2024-01-05T08:00:00Z", "weight", 85.0, "kg"),
    measurement("ms-00061", "2024-01-06T08:00:00Z", "weight", 85.2, "kg"),
  ],
};

export const STATS: CohortStatsPayload = {
  measurement_count: 100,
  alert_count: 4,
  // 4/100 would be 0.04; the service value below is what must render
  alert_rate: 0.2222,
  open_alert_count: 3,
  response_count: 9,
  consultation_count: 2,
  medication_change_count: 1,
  admission_count: 1,
  admitted_patient_days: 2,
  injected_duplicate_count: 0,
  injected_comment_count: 0,
  per_hcp_responses: { "hcp-01": 5, "hcp-02": 4 },
  per_patient_alerts: { "pt-001": 3, "pt-002": 1 },
};

/** Route table covering the read side of cohort c-001. */
export function readRoutes() {
  return {
    "GET /cohorts": { payload: [HANDLE] },
    "GET /cohorts/c-001": { payload: HANDLE },
    "GET /cohorts/c-001/alerts?status=open": { payload: OPEN_ALERTS },
    "GET /cohorts/c-001/alerts?status=all": { payload: OPEN_ALERTS },
    "GET /cohorts/c-001/patients": { payload: [SUMMARY_PT1, SUMMARY_PT2] },
    "GET /cohorts/c-001/patients/pt-001/summary": { payload: SUMMARY_PT1 },
    "GET /cohorts/c-001/patients/pt-001/timeline": { payload: TIMELINE_PT1 },
    "GET /cohorts/c-001/stats": { payload: STATS },
  };
}

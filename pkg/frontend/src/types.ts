// Shapes returned by the cohort service. Field names mirror the JSON
// exactly; the UI never derives these values itself.

export interface CohortHandle {
  cohort_id: string;
  mode: "batch" | "interactive";
  seed: number;
  n_patients: number;
  n_hcps: number;
  duration_days: number;
  clock: string | null;
  open_alert_count: number;
  complete: boolean;
}

export interface DayReport {
  days_advanced: number;
  new_measurements: number;
  new_alerts: number;
  clock: string | null;
  open_alerts: number;
  complete: boolean;
}

export interface RecentReading {
  timestamp: string;
  value: number;
}

export interface HcpRef {
  id: string;
  display_name: string;
}

export interface AlertContext {
  thresholds: { low: number; high: number };
  recent: RecentReading[];
  hcps: HcpRef[];
}

export interface AlertPayload {
  id: string;
  patient_id: string;
  measurement_id: string;
  rules: string[];
  severity: "standard" | "high";
  created_at: string;
  status: "open" | "resolved";
  assigned_hcp_id: string | null;
  patient_name: string;
  vital: string;
  value: number;
  unit: string;
  context: AlertContext;
}

export interface ResponseResult {
  response: {
    id: string;
    alert_id: string;
    hcp_id: string;
    action: string;
    note: string | null;
    timestamp: string;
  };
  alert: {
    id: string;
    status: string;
    [key: string]: unknown;
  };
  open_alert_count: number;
}

export interface VitalSummary {
  latest: number | null;
  latest_at: string | null;
  trend: "up" | "down" | "flat" | null;
  unit: string;
}

export interface PatientSummary {
  patient_id: string;
  display_name: string;
  stability_class: string;
  vitals: Record<string, VitalSummary>;
  open_alert_count: number;
  admission_count: number;
  medication_change_count: number;
  consultation_count: number;
  last_contact: { date: string; channel: string } | null;
  age?: number;
  comorbidities?: string[];
}

export interface MeasurementEvent {
  id: string;
  patient_id: string;
  timestamp: string;
  vital: string;
  value: number;
  unit: string;
  comment: string | null;
}

export interface MedChangeEvent {
  id: string;
  patient_id: string;
  drug: string;
  change: string;
  timestamp: string;
  effect: {
    vital: string;
    direction: string;
    magnitude: number;
    onset_days: number;
  };
}

export interface AdmissionEvent {
  id: string;
  patient_id: string;
  start: string;
  end: string;
  reason: string;
}

export interface ConsultationEvent {
  id: string;
  patient_id: string;
  hcp_id: string;
  timestamp: string;
  channel: string;
  text: string;
}

export interface TimelineEvent {
  kind: "measurement" | "alert" | "response" | "medication_change" | "admission" | "consultation";
  timestamp: string;
  entity_id: string;
  payload: Record<string, unknown>;
  measurement_id?: string;
  response_ids?: string[];
}

export interface TimelinePayload {
  patient_id: string;
  display_name: string;
  thresholds: Record<string, { low: number; high: number }>;
  events: TimelineEvent[];
}

export interface CohortStatsPayload {
  measurement_count: number;
  alert_count: number;
  alert_rate: number;
  open_alert_count: number;
  response_count: number;
  consultation_count: number;
  medication_change_count: number;
  admission_count: number;
  admitted_patient_days: number;
  injected_duplicate_count: number;
  injected_comment_count: number;
  per_hcp_responses: Record<string, number>;
  per_patient_alerts: Record<string, number>;
}

export interface ApiErrorBody {
  kind: string;
  message: string;
}

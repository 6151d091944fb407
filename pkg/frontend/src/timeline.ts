// Projects a patient timeline payload into per-vital chart inputs.
// Pure reshaping: group, join by id, parse timestamps. Nothing here
// invents values the service did not send.

import type {
  ChartAdmissionSpan,
  ChartAlertMarker,
  ChartMedMarker,
  ChartPoint,
  VitalChartData,
} from "./charts.js";
import type {
  AdmissionEvent,
  ConsultationEvent,
  MeasurementEvent,
  MedChangeEvent,
  TimelinePayload,
} from "./types.js";

export interface ConsultationTick {
  id: string;
  t: number;
  channel: string;
  hcpId: string;
}

export interface PatientChartSet {
  charts: VitalChartData[];
  consultations: ConsultationEvent[];
  consultationTicks: ConsultationTick[];
  admissions: AdmissionEvent[];
}

const DAY_MS = 24 * 60 * 60 * 1000;

export function buildChartSet(timeline: TimelinePayload): PatientChartSet {
  const pointsByVital = new Map<string, ChartPoint[]>();
  const unitByVital = new Map<string, string>();
  const vitalByMeasurement = new Map<string, string>();
  const alertsByVital = new Map<string, ChartAlertMarker[]>();
  const medsByVital = new Map<string, ChartMedMarker[]>();
  const admissions: AdmissionEvent[] = [];
  const consultations: ConsultationEvent[] = [];

  for (const event of timeline.events) {
    if (event.kind === "measurement") {
      const m = event.payload as unknown as MeasurementEvent;
      vitalByMeasurement.set(m.id, m.vital);
      unitByVital.set(m.vital, m.unit);
      let bucket = pointsByVital.get(m.vital);
      if (!bucket) {
        bucket = [];
        pointsByVital.set(m.vital, bucket);
      }
      bucket.push({
        measurementId: m.id,
        t: Date.parse(m.timestamp),
        value: m.value,
      });
    } else if (event.kind === "alert") {
      const p = event.payload as { id: string; measurement_id: string; severity: string; status: string };
      const vital = vitalByMeasurement.get(p.measurement_id);
      if (!vital) continue; // source measurement precedes its alert; events arrive sorted
      let bucket = alertsByVital.get(vital);
      if (!bucket) {
        bucket = [];
        alertsByVital.set(vital, bucket);
      }
      bucket.push({
        alertId: p.id,
        measurementId: p.measurement_id,
        severity: p.severity,
        status: p.status,
      });
    } else if (event.kind === "medication_change") {
      const mc = event.payload as unknown as MedChangeEvent;
      const vital = mc.effect.vital;
      let bucket = medsByVital.get(vital);
      if (!bucket) {
        bucket = [];
        medsByVital.set(vital, bucket);
      }
      bucket.push({
        id: mc.id,
        t: Date.parse(mc.timestamp),
        drug: mc.drug,
        change: mc.change,
      });
    } else if (event.kind === "admission") {
      admissions.push(event.payload as unknown as AdmissionEvent);
    } else if (event.kind === "consultation") {
      consultations.push(event.payload as unknown as ConsultationEvent);
    }
  }

  // stay spans render on every chart; end date is the discharge day
  const spans: ChartAdmissionSpan[] = admissions.map((a) => ({
    id: a.id,
    t0: Date.parse(a.start + "T00:00:00Z"),
    t1: Date.parse(a.end + "T00:00:00Z") + DAY_MS,
  }));

  const ticks: ConsultationTick[] = consultations.map((c) => ({
    id: c.id,
    t: Date.parse(c.timestamp),
    channel: c.channel,
    hcpId: c.hcp_id,
  }));

  const charts: VitalChartData[] = [];
  for (const [vital, points] of pointsByVital) {
    const bounds = timeline.thresholds[vital];
    charts.push({
      vital,
      unit: unitByVital.get(vital) ?? "",
      points: points.slice().sort((a, b) => a.t - b.t),
      low: bounds ? bounds.low : null,
      high: bounds ? bounds.high : null,
      alerts: alertsByVital.get(vital) ?? [],
      meds: medsByVital.get(vital) ?? [],
      admissions: spans,
      consults: ticks,
    });
  }
  // stable display order regardless of event arrival
  const order = ["weight", "heart_rate", "systolic_bp", "diastolic_bp"];
  charts.sort((a, b) => order.indexOf(a.vital) - order.indexOf(b.vital));

  return { charts, consultations, consultationTicks: ticks, admissions };
}

// Presentation-only helpers. Everything here formats values the service
// already computed; nothing re-derives alerts, trends, or summaries.

export const VITAL_LABELS: Record<string, string> = {
  weight: "Weight",
  heart_rate: "Heart rate",
  systolic_bp: "Systolic BP",
  diastolic_bp: "Diastolic BP",
};

export const ACTION_LABELS: Record<string, string> = {
  dismiss: "Dismiss",
  call_patient: "Call patient",
  adjust_medication: "Adjust medication",
  contact_colleague: "Contact colleague",
};

export const TREND_LABELS: Record<string, string> = {
  up: "rising",
  down: "falling",
  flat: "steady",
};

export function vitalLabel(vital: string): string {
  return VITAL_LABELS[vital] ?? vital;
}

export function fmtValue(value: number, unit: string): string {
  // server values carry one decimal already; toFixed keeps 82 -> "82.0"
  return `${value.toFixed(1)} ${unit}`;
}

export function fmtClock(iso: string | null): string {
  return iso ?? "not started";
}

export function fmtTimestamp(iso: string): string {
  // "2024-01-05T08:12:34Z" -> "2024-01-05 08:12"
  return iso.slice(0, 16).replace("T", " ");
}

export function fmtDate(iso: string): string {
  return iso.slice(0, 10);
}

export function trendLabel(trend: string | null): string {
  if (trend === null) return "no trend";
  return TREND_LABELS[trend] ?? trend;
}

export function fmtRate(rate: number): string {
  return rate.toFixed(4);
}

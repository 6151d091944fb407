/**
 * Hand-rolled SVG time-series chart for one vital.
 *
 * Everything drawn here comes straight off the timeline payload:
 * measurement points, alert markers anchored to their source
 * measurement, medication-change verticals, and shaded admission
 * spans. The chart does not decide what is abnormal; it only draws
 * what the service reported.
 */

import { svgEl } from "./dom.js";
import { fmtTimestamp, vitalLabel } from "./format.js";

// ── Data shapes ──────────────────────────────────────────────────

export interface ChartPoint {
  measurementId: string;
  t: number; // epoch ms
  value: number;
}

export interface ChartAlertMarker {
  alertId: string;
  measurementId: string;
  severity: string;
  status: string;
}

export interface ChartMedMarker {
  id: string;
  t: number;
  drug: string;
  change: string;
}

export interface ChartAdmissionSpan {
  id: string;
  t0: number;
  t1: number;
}

export interface ChartConsultTick {
  id: string;
  t: number;
  channel: string;
}

export interface VitalChartData {
  vital: string;
  unit: string;
  points: ChartPoint[];
  low: number | null;
  high: number | null;
  alerts: ChartAlertMarker[];
  meds: ChartMedMarker[];
  admissions: ChartAdmissionSpan[];
  consults?: ChartConsultTick[];
}

export interface VitalChartOpts {
  width?: number;
  height?: number;
  domain?: { t0: number; t1: number };
  onAlertClick?: (marker: ChartAlertMarker) => void;
}

// ── Scales ───────────────────────────────────────────────────────

function niceStep(range: number, targetTicks: number): number {
  const rough = range / Math.max(targetTicks, 1);
  const pow = Math.pow(10, Math.floor(Math.log10(rough)));
  const norm = rough / pow;
  if (norm <= 1.5) return pow;
  if (norm <= 3) return 2 * pow;
  if (norm <= 7) return 5 * pow;
  return 10 * pow;
}

function yDomain(data: VitalChartData): { min: number; max: number } {
  const values = data.points.map((p) => p.value);
  if (data.low !== null) values.push(data.low);
  if (data.high !== null) values.push(data.high);
  if (values.length === 0) return { min: 0, max: 1 };
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (min === max) {
    min -= 1;
    max += 1;
  }
  const pad = (max - min) * 0.12;
  return { min: min - pad, max: max + pad };
}

// ── Chart ────────────────────────────────────────────────────────

const MARGIN = { top: 18, right: 14, bottom: 26, left: 46 };

export function renderVitalChart(
  container: HTMLElement,
  data: VitalChartData,
  opts: VitalChartOpts = {},
): SVGSVGElement {
  const width = opts.width ?? 640;
  const height = opts.height ?? 180;
  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = height - MARGIN.top - MARGIN.bottom;

  const ts = data.points.map((p) => p.t);
  for (const m of data.meds) ts.push(m.t);
  for (const a of data.admissions) ts.push(a.t0, a.t1);
  for (const c of data.consults ?? []) ts.push(c.t);
  const t0 = opts.domain?.t0 ?? (ts.length ? Math.min(...ts) : 0);
  const t1 = opts.domain?.t1 ?? (ts.length ? Math.max(...ts) : 1);
  const span = Math.max(t1 - t0, 1);
  const { min: yMin, max: yMax } = yDomain(data);

  const x = (t: number) => MARGIN.left + ((t - t0) / span) * innerW;
  const y = (v: number) =>
    MARGIN.top + innerH - ((v - yMin) / (yMax - yMin)) * innerH;

  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
    class: "vital-chart",
    "data-vital": data.vital,
  });
  svg.setAttribute("role", "img");
  svg.setAttribute("aria-label", `${vitalLabel(data.vital)} over time`);

  // admission spans go under everything else
  for (const adm of data.admissions) {
    svg.append(
      svgEl("rect", {
        class: "admission-span",
        "data-admission-id": adm.id,
        x: String(x(adm.t0)),
        y: String(MARGIN.top),
        width: String(Math.max(x(adm.t1) - x(adm.t0), 2)),
        height: String(innerH),
      }),
    );
  }

  // threshold guides
  for (const [name, bound] of [
    ["low", data.low],
    ["high", data.high],
  ] as const) {
    if (bound === null) continue;
    if (bound < yMin || bound > yMax) continue;
    svg.append(
      svgEl("line", {
        class: `threshold threshold-${name}`,
        x1: String(MARGIN.left),
        x2: String(MARGIN.left + innerW),
        y1: String(y(bound)),
        y2: String(y(bound)),
      }),
    );
  }

  // y ticks
  const step = niceStep(yMax - yMin, 4);
  for (let v = Math.ceil(yMin / step) * step; v <= yMax; v += step) {
    const ty = y(v);
    svg.append(
      svgEl("line", {
        class: "grid",
        x1: String(MARGIN.left),
        x2: String(MARGIN.left + innerW),
        y1: String(ty),
        y2: String(ty),
      }),
    );
    const label = svgEl("text", {
      class: "tick-label",
      x: String(MARGIN.left - 6),
      y: String(ty + 3),
      "text-anchor": "end",
    });
    label.textContent = step >= 1 ? String(Math.round(v)) : v.toFixed(1);
    svg.append(label);
  }

  // x ticks: first, middle, last date
  if (data.points.length > 0) {
    const picks = [t0, t0 + span / 2, t1];
    for (const t of picks) {
      const label = svgEl("text", {
        class: "tick-label",
        x: String(x(t)),
        y: String(height - 8),
        "text-anchor": "middle",
      });
      label.textContent = new Date(t).toISOString().slice(0, 10);
      svg.append(label);
    }
  }

  // medication verticals
  for (const med of data.meds) {
    const mx = x(med.t);
    const line = svgEl("line", {
      class: "med-marker",
      "data-med-id": med.id,
      "data-drug": med.drug,
      x1: String(mx),
      x2: String(mx),
      y1: String(MARGIN.top),
      y2: String(MARGIN.top + innerH),
    });
    const title = svgEl("title");
    title.textContent = `${med.drug} ${med.change} at ${fmtTimestamp(new Date(med.t).toISOString())}`;
    line.append(title);
    svg.append(line);
  }

  // consultation ticks along the baseline
  for (const consult of data.consults ?? []) {
    const cx = x(consult.t);
    const baseY = MARGIN.top + innerH;
    const tick = svgEl("path", {
      class: "consult-tick",
      "data-consult-id": consult.id,
      "data-channel": consult.channel,
      d: `M${cx - 4},${baseY} L${cx + 4},${baseY} L${cx},${baseY - 6} Z`,
    });
    const title = svgEl("title");
    title.textContent = `consultation (${consult.channel})`;
    tick.append(title);
    svg.append(tick);
  }

  // series line + measurement dots
  if (data.points.length > 1) {
    const d = data.points
      .map((p, i) => `${i === 0 ? "M" : "L"}${x(p.t).toFixed(1)},${y(p.value).toFixed(1)}`)
      .join(" ");
    svg.append(svgEl("path", { class: "series", d }));
  }
  const byMeasurement = new Map<string, SVGCircleElement>();
  for (const p of data.points) {
    const dot = svgEl("circle", {
      class: "reading",
      "data-measurement-id": p.measurementId,
      cx: x(p.t).toFixed(1),
      cy: y(p.value).toFixed(1),
      r: "2.5",
    });
    byMeasurement.set(p.measurementId, dot);
    svg.append(dot);
  }

  // alert markers ring their source measurement
  for (const marker of data.alerts) {
    const dot = byMeasurement.get(marker.measurementId);
    if (!dot) continue; // alert on a vital drawn elsewhere
    const ring = svgEl("circle", {
      class: `alert-marker severity-${marker.severity} status-${marker.status}`,
      "data-alert-id": marker.alertId,
      "data-measurement-id": marker.measurementId,
      cx: dot.getAttribute("cx")!,
      cy: dot.getAttribute("cy")!,
      r: "6",
    });
    ring.addEventListener("click", () => {
      highlightMeasurement(svg, marker.measurementId);
      opts.onAlertClick?.(marker);
    });
    svg.append(ring);
  }

  container.append(svg);
  return svg;
}

/** Mark one reading as selected; clears any previous highlight. */
export function highlightMeasurement(svg: SVGSVGElement, measurementId: string): void {
  for (const node of svg.querySelectorAll(".reading.highlighted")) {
    node.classList.remove("highlighted");
  }
  const dot = svg.querySelector(`.reading[data-measurement-id="${measurementId}"]`);
  if (dot) {
    dot.classList.add("highlighted");
    dot.setAttribute("r", "4");
  }
}

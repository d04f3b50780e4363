/** h1/h4 effect-size dot plot: one point per window size with a 95% CI bar.
 * Significant points (adjusted p <= alpha, flagged by the server) render
 * darker; points without a CI draw no bar and are marked. */

import { EffectChartJson, EffectPointJson } from "./types.js";
import { displayNumber } from "./format.js";

export interface EffectPointModel {
  k: number;
  d: number | null;
  ciLow: number | null;
  ciHigh: number | null;
  significant: boolean;
  missingCi: boolean;
  label: string;
}

export function effectPoints(chart: EffectChartJson): EffectPointModel[] {
  return chart.points.map((p: EffectPointJson) => ({
    k: p.k,
    d: p.d,
    ciLow: p.ci_low,
    ciHigh: p.ci_high,
    significant: p.significant,
    missingCi: p.missing_ci,
    label: `k=${p.k}: d=${displayNumber(p.d)}`,
  }));
}

export interface PlotGeometry {
  width: number;
  height: number;
  margin: number;
}

const DEFAULT_GEOMETRY: PlotGeometry = { width: 420, height: 240, margin: 36 };

export function renderEffectPlotSVG(
  chart: EffectChartJson,
  geometry: PlotGeometry = DEFAULT_GEOMETRY
): string {
  const points = effectPoints(chart);
  const { width, height, margin } = geometry;
  const values: number[] = [0];
  for (const p of points) {
    if (p.d !== null) values.push(p.d);
    if (p.ciLow !== null) values.push(p.ciLow);
    if (p.ciHigh !== null) values.push(p.ciHigh);
  }
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const pad = (hi - lo) * 0.1 || 1;
  const yOf = (v: number) =>
    height - margin - ((v - (lo - pad)) / (hi + pad - (lo - pad))) * (height - 2 * margin);
  const xStep = (width - 2 * margin) / Math.max(points.length, 1);
  const xOf = (i: number) => margin + xStep * (i + 0.5);

  const parts: string[] = [];
  parts.push(
    `<line class="zero-line" x1="${margin}" y1="${yOf(0)}" x2="${width - margin}" ` +
      `y2="${yOf(0)}" stroke="#999" stroke-dasharray="4 3"/>`
  );
  points.forEach((p, i) => {
    const x = xOf(i);
    if (!p.missingCi && p.ciLow !== null && p.ciHigh !== null) {
      parts.push(
        `<line class="ci-bar" x1="${x}" y1="${yOf(p.ciLow)}" x2="${x}" ` +
          `y2="${yOf(p.ciHigh)}" stroke="#555"/>`
      );
    }
    if (p.d !== null) {
      const fill = p.significant ? "#1a237e" : "#b3c0f0";
      const cls = p.significant ? "point significant" : "point";
      parts.push(
        `<circle class="${cls}" cx="${x}" cy="${yOf(p.d)}" r="6" fill="${fill}">` +
          `<title>${p.label}</title></circle>`
      );
    }
    parts.push(
      `<text x="${x}" y="${height - margin + 16}" text-anchor="middle" ` +
        `font-size="11">±${p.k}</text>`
    );
  });
  return (
    `<svg class="effect-plot" viewBox="0 0 ${width} ${height}" ` +
    `xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`
  );
}

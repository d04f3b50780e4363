/** h2/h5 pre/post scatter: x = post, y = pre, with the diagonal reference.
 * Points above the diagonal are anticipatory. Categories set the fill;
 * significant points (h5 per-event FDR) get a border. */

import { ScatterChartJson, ScatterPointJson } from "./types.js";
import { displayNumber } from "./format.js";

export const CATEGORY_COLORS: Record<string, string> = {
  domestic_policy: "#2e7d32",
  elections: "#c62828",
  foreign_policy: "#1565c0",
};

export interface ScatterPointModel {
  date: string;
  pre: number;
  post: number;
  category: string;
  color: string;
  aboveDiagonal: boolean;
  direction: string;
  significant: boolean;
  label: string;
}

export function scatterPoints(chart: ScatterChartJson): ScatterPointModel[] {
  return chart.points.map((p: ScatterPointJson) => ({
    date: p.date,
    pre: p.pre,
    post: p.post,
    category: p.category,
    color: CATEGORY_COLORS[p.category] ?? "#616161",
    aboveDiagonal: p.pre > p.post,
    direction: p.direction,
    significant: p.significant,
    label: `${p.date} (${p.category}): pre=${displayNumber(p.pre)}, post=${displayNumber(p.post)}`,
  }));
}

export function renderScatterSVG(chart: ScatterChartJson, size = 320, margin = 34): string {
  const points = scatterPoints(chart);
  const values = points.flatMap((p) => [p.pre, p.post]);
  const lo = values.length ? Math.min(...values) : 0;
  const hi = values.length ? Math.max(...values) : 1;
  const pad = (hi - lo) * 0.1 || 1;
  const span = hi + pad - (lo - pad);
  const xOf = (v: number) => margin + ((v - (lo - pad)) / span) * (size - 2 * margin);
  const yOf = (v: number) => size - margin - ((v - (lo - pad)) / span) * (size - 2 * margin);

  const parts: string[] = [];
  parts.push(
    `<line class="diagonal" x1="${xOf(lo - pad)}" y1="${yOf(lo - pad)}" ` +
      `x2="${xOf(hi + pad)}" y2="${yOf(hi + pad)}" stroke="#888" stroke-dasharray="5 4"/>`
  );
  for (const p of points) {
    const stroke = p.significant ? ' stroke="#000" stroke-width="2"' : "";
    const cls = p.significant ? "point significant" : "point";
    parts.push(
      `<circle class="${cls}" data-direction="${p.direction}" cx="${xOf(p.post)}" ` +
        `cy="${yOf(p.pre)}" r="6" fill="${p.color}"${stroke}>` +
        `<title>${p.label}</title></circle>`
    );
  }
  parts.push(
    `<text x="${size / 2}" y="${size - 6}" text-anchor="middle" font-size="11">post</text>`,
    `<text x="10" y="${size / 2}" text-anchor="middle" font-size="11" ` +
      `transform="rotate(-90 10 ${size / 2})">pre</text>`
  );
  return (
    `<svg class="prepost-scatter" viewBox="0 0 ${size} ${size}" ` +
    `xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`
  );
}

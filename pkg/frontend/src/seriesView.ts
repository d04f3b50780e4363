/** Time-series view: normalized daily volume with the dashed mean + 2 sigma
 * threshold and above-threshold days highlighted. */

import { SeriesResponse } from "./types.js";

export interface SeriesViewModel {
  normalized: number[];
  flaggedIndices: number[];
  threshold: number | null;
  normalizedThreshold: number | null;
  totalDocuments: number;
}

export function buildSeriesView(series: SeriesResponse): SeriesViewModel {
  const flaggedIndices = series.flags
    .map((flag, i) => (flag ? i : -1))
    .filter((i) => i >= 0);
  // the threshold is in raw-count units; project it onto the normalized axis
  const lo = Math.min(...series.volume);
  const hi = Math.max(...series.volume);
  const normalizedThreshold =
    series.threshold === null || hi === lo
      ? null
      : (series.threshold - lo) / (hi - lo);
  return {
    normalized: series.normalized_volume,
    flaggedIndices,
    threshold: series.threshold,
    normalizedThreshold,
    totalDocuments: series.volume.reduce((a, b) => a + b, 0),
  };
}

export function renderSeriesSVG(series: SeriesResponse, width = 640, height = 180,
                                margin = 24): string {
  const view = buildSeriesView(series);
  const n = view.normalized.length;
  const xOf = (i: number) => margin + (i / Math.max(n - 1, 1)) * (width - 2 * margin);
  const yOf = (v: number) => height - margin - v * (height - 2 * margin);
  const path = view.normalized
    .map((v, i) => `${i === 0 ? "M" : "L"}${xOf(i).toFixed(1)},${yOf(v).toFixed(1)}`)
    .join(" ");
  const parts: string[] = [];
  parts.push(`<path class="volume" d="${path}" fill="none" stroke="#455a64"/>`);
  if (view.normalizedThreshold !== null && view.normalizedThreshold <= 1) {
    const y = yOf(view.normalizedThreshold);
    parts.push(
      `<line class="threshold" x1="${margin}" y1="${y}" x2="${width - margin}" ` +
        `y2="${y}" stroke="#c62828" stroke-dasharray="6 4"/>`
    );
  }
  for (const i of view.flaggedIndices) {
    parts.push(
      `<circle class="flagged-day" cx="${xOf(i).toFixed(1)}" ` +
        `cy="${yOf(view.normalized[i]).toFixed(1)}" r="4" fill="#c62828">` +
        `<title>${series.dates[i]}</title></circle>`
    );
  }
  return (
    `<svg class="series-view" viewBox="0 0 ${width} ${height}" ` +
    `xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`
  );
}

/** h3 event heat table: per-event percent differences with star and
 * green/red color coding. Values, stars, and color magnitudes come
 * straight from the chart payload. */

import { HeatCellJson, HeatTableChartJson } from "./types.js";
import { displayNumber } from "./format.js";

export type Hue = "green" | "red" | "neutral";

export interface HeatCellModel {
  text: string;
  hue: Hue;
  intensity: number; // |color| in [0, 1]
  significant: boolean;
  css: string;
}

export interface HeatRowModel {
  event: string;
  cells: (HeatCellModel | null)[];
}

export interface HeatTableModel {
  datasetColumns: string[];
  rows: HeatRowModel[];
}

const GREEN = [46, 125, 50];
const RED = [198, 40, 40];

export function cellModel(cell: HeatCellJson | null): HeatCellModel | null {
  if (cell === null) return null;
  if (cell.value === null) {
    return { text: "---", hue: "neutral", intensity: 0, significant: false, css: "" };
  }
  const hue: Hue = cell.color > 0 ? "green" : cell.color < 0 ? "red" : "neutral";
  const intensity = Math.min(1, Math.abs(cell.color));
  const rgb = hue === "green" ? GREEN : hue === "red" ? RED : [120, 120, 120];
  const alpha = hue === "neutral" ? 0 : 0.15 + 0.6 * intensity;
  return {
    text: `${displayNumber(cell.value)}${cell.stars}`,
    hue,
    intensity,
    significant: cell.significant,
    css: alpha === 0 ? "" : `background-color: rgba(${rgb[0]}, ${rgb[1]}, ${rgb[2]}, ${alpha.toFixed(3)})`,
  };
}

export function buildHeatTable(chart: HeatTableChartJson): HeatTableModel {
  const datasetColumns = chart.columns.slice(1);
  const rows = chart.rows.map((row) => ({
    event: String(row["event"]),
    cells: datasetColumns.map((col) => cellModel((row[col] ?? null) as HeatCellJson | null)),
  }));
  return { datasetColumns, rows };
}

export function renderHeatTableHTML(chart: HeatTableChartJson): string {
  const model = buildHeatTable(chart);
  const head = ["event", ...model.datasetColumns]
    .map((c) => `<th>${escapeHtml(c)}</th>`)
    .join("");
  const body = model.rows
    .map((row) => {
      const cells = row.cells
        .map((cell) => {
          if (cell === null) return "<td>---</td>";
          const cls = cell.significant ? ' class="sig"' : "";
          const style = cell.css ? ` style="${cell.css}"` : "";
          return `<td${cls}${style}>${escapeHtml(cell.text)}</td>`;
        })
        .join("");
      return `<tr><td>${escapeHtml(row.event)}</td>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="heat-table"><thead><tr>${head}</tr></thead>` +
    `<tbody>${body}</tbody></table>` +
    `<p class="legend">*** p &lt; 0.001, ** p &lt; 0.01, * p &lt; 0.05 (FDR-adjusted); ` +
    `green positive, red negative, intensity proportional to |value|.</p>`
  );
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

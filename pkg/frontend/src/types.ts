/** API payload types, mirroring docs/api.md. The client renders these
 * verbatim and performs no statistics. */

export type Analysis = "h1" | "h2" | "h3" | "h4" | "h5";
export type Platform = "news" | "reddit" | "all";
export type Mode = "cumulative" | "exclusive";

export interface DatasetEntry {
  movement: string;
  platform: string;
  exclusive: number[];
  cumulative: number[];
  documents: number;
}

export interface DatasetsResponse {
  engine_version: string;
  seed?: number;
  datasets: DatasetEntry[];
  layers: number[];
  modes: Mode[];
  ks: number[];
}

export interface EventRecord {
  date: string;
  description: string;
  category: string;
}

export interface SeriesResponse {
  start_date: string;
  end_date: string;
  dates: string[];
  volume: number[];
  intensity: (number | null)[];
  normalized_volume: number[];
  threshold: number | null;
  flags: boolean[];
  labels: Record<string, string>;
  engine_version: string;
  seed?: number;
}

export interface TestResultJson {
  statistic: number;
  effect_size_d: number | null;
  p_raw: number;
  p_adjusted: number | null;
  ci_low: number | null;
  ci_high: number | null;
  n_a: number;
  n_b: number;
  tail: string;
}

export interface KWindowJson {
  k: number;
  test: TestResultJson;
  percent_change: number | null;
  n_events_used: number;
  skipped: { date: string; reason: string }[];
  per_event: Record<string, unknown>[];
  warnings: string[];
}

export interface ResultJson {
  analysis: Analysis;
  alpha: number;
  n_events: number;
  n_events_used: number;
  skipped: { date: string; reason: string }[];
  by_k: Record<string, KWindowJson>;
  per_event: unknown[];
  aggregate: number | null;
  aggregate_test: TestResultJson | null;
  p_one_sided: number | null;
  direction: string | null;
  labels: Record<string, string>;
}

export interface EffectPointJson {
  k: number;
  d: number | null;
  ci_low: number | null;
  ci_high: number | null;
  significant: boolean;
  missing_ci: boolean;
}

export interface EffectChartJson {
  chart: "effect_sizes";
  analysis: Analysis;
  alpha: number;
  labels: Record<string, string>;
  points: EffectPointJson[];
}

export interface HeatCellJson {
  value: number | null;
  stars: string;
  color: number;
  significant: boolean;
}

export interface HeatTableChartJson {
  chart: "event_heat_table";
  analysis: "h3";
  alpha: number;
  labels: Record<string, string>;
  columns: string[];
  rows: Record<string, string | HeatCellJson | null>[];
}

export interface ScatterPointJson {
  date: string;
  description: string;
  category: string;
  pre: number;
  post: number;
  direction: string;
  significant: boolean;
}

export interface ScatterChartJson {
  chart: "prepost_scatter";
  analysis: Analysis;
  alpha: number;
  labels: Record<string, string>;
  points: ScatterPointJson[];
  skipped: number;
}

export type ChartJson = EffectChartJson | HeatTableChartJson | ScatterChartJson;

export interface AnalyzeResponse {
  engine_version: string;
  seed: number;
  analysis: Analysis;
  config: Record<string, unknown>;
  result: ResultJson;
  chart: ChartJson;
}

export interface AnalyzeRequestBody {
  movement: string;
  platform: Platform;
  layer: number;
  mode: Mode;
  ks: number[];
  alpha: number;
  seed: number;
  permutations?: number;
  bootstrap_iters?: number;
}

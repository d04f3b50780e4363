/** Fixture API responses, shaped exactly like the service payloads. */

import {
  AnalyzeResponse,
  DatasetsResponse,
  EffectChartJson,
  HeatTableChartJson,
  ScatterChartJson,
  SeriesResponse,
  TestResultJson,
} from "../src/types.js";

function testResult(overrides: Partial<TestResultJson>): TestResultJson {
  return {
    statistic: 0,
    effect_size_d: null,
    p_raw: 1,
    p_adjusted: null,
    ci_low: null,
    ci_high: null,
    n_a: 6,
    n_b: 6,
    tail: "two_sided",
    ...overrides,
  };
}

export const H3_CHART: HeatTableChartJson = {
  chart: "event_heat_table",
  analysis: "h3",
  alpha: 0.05,
  labels: { movement: "metoo", platform: "reddit" },
  columns: ["event", "metoo:news", "metoo:reddit"],
  rows: [
    {
      event: "2024-11-05",
      "metoo:news": { value: 54.7, stars: "***", color: 54.7 / 85.8, significant: true },
      "metoo:reddit": { value: -85.8, stars: "***", color: -1.0, significant: true },
    },
    {
      event: "2025-01-04",
      "metoo:news": { value: 0.0, stars: "", color: 0.0, significant: false },
      "metoo:reddit": { value: 10.6, stars: "", color: 10.6 / 85.8, significant: false },
    },
    {
      event: "2025-08-22",
      "metoo:news": null,
      "metoo:reddit": { value: null, stars: "", color: 0, significant: false },
    },
  ],
};

export const H3_RESPONSE: AnalyzeResponse = {
  engine_version: "0.1.0",
  seed: 42,
  analysis: "h3",
  config: { seed: 42 },
  result: {
    analysis: "h3",
    alpha: 0.05,
    n_events: 3,
    n_events_used: 3,
    skipped: [],
    by_k: {},
    per_event: [],
    aggregate: null,
    aggregate_test: null,
    p_one_sided: null,
    direction: null,
    labels: { movement: "metoo", platform: "reddit" },
  },
  chart: H3_CHART,
};

/** h1 fixture: adjusted p values 0.001, 0.2, 0.05, 0.8, 0.049 with
 * alpha = 0.05, so exactly k in {1, 5, 10} are significant. */
export const H1_RESPONSE: AnalyzeResponse = {
  engine_version: "0.1.0",
  seed: 42,
  analysis: "h1",
  config: { seed: 42 },
  result: {
    analysis: "h1",
    alpha: 0.05,
    n_events: 6,
    n_events_used: 6,
    skipped: [],
    by_k: {
      "1": {
        k: 1,
        test: testResult({ effect_size_d: 0.54, p_raw: 0.0005, p_adjusted: 0.001, ci_low: 0.2, ci_high: 0.9 }),
        percent_change: 12.1,
        n_events_used: 6,
        skipped: [],
        per_event: [],
        warnings: [],
      },
      "3": {
        k: 3,
        test: testResult({ effect_size_d: 0.1, p_raw: 0.15, p_adjusted: 0.2, ci_low: -0.2, ci_high: 0.4 }),
        percent_change: 2.0,
        n_events_used: 6,
        skipped: [],
        per_event: [],
        warnings: [],
      },
      "5": {
        k: 5,
        test: testResult({ effect_size_d: 0.45, p_raw: 0.03, p_adjusted: 0.05, ci_low: 0.1, ci_high: 0.8 }),
        percent_change: 9.0,
        n_events_used: 6,
        skipped: [],
        per_event: [],
        warnings: [],
      },
      "7": {
        k: 7,
        test: testResult({ effect_size_d: 0.05, p_raw: 0.7, p_adjusted: 0.8 }),
        percent_change: 0.4,
        n_events_used: 6,
        skipped: [],
        per_event: [],
        warnings: [],
      },
      "10": {
        k: 10,
        test: testResult({ effect_size_d: 1.17, p_raw: 0.02, p_adjusted: 0.049, ci_low: 0.6, ci_high: 1.6 }),
        percent_change: 28.53,
        n_events_used: 6,
        skipped: [],
        per_event: [],
        warnings: [],
      },
    },
    per_event: [],
    aggregate: null,
    aggregate_test: null,
    p_one_sided: null,
    direction: null,
    labels: { movement: "blm", platform: "news" },
  },
  chart: {
    chart: "effect_sizes",
    analysis: "h1",
    alpha: 0.05,
    labels: { movement: "blm", platform: "news" },
    points: [
      { k: 1, d: 0.54, ci_low: 0.2, ci_high: 0.9, significant: true, missing_ci: false },
      { k: 3, d: 0.1, ci_low: -0.2, ci_high: 0.4, significant: false, missing_ci: false },
      { k: 5, d: 0.45, ci_low: 0.1, ci_high: 0.8, significant: true, missing_ci: false },
      { k: 7, d: 0.05, ci_low: null, ci_high: null, significant: false, missing_ci: true },
      { k: 10, d: 1.17, ci_low: 0.6, ci_high: 1.6, significant: true, missing_ci: false },
    ],
  } as EffectChartJson,
};

export const H5_CHART: ScatterChartJson = {
  chart: "prepost_scatter",
  analysis: "h5",
  alpha: 0.05,
  labels: { movement: "metoo", platform: "reddit" },
  points: [
    {
      date: "2024-11-05",
      description: "election",
      category: "elections",
      pre: 1.82,
      post: 1.41,
      direction: "anticipatory",
      significant: true,
    },
    {
      date: "2025-02-05",
      description: "executive action",
      category: "domestic_policy",
      pre: 1.2,
      post: 1.75,
      direction: "reactive",
      significant: false,
    },
  ],
  skipped: 1,
};

export const SERIES_FIXTURE: SeriesResponse = {
  start_date: "2024-09-01",
  end_date: "2024-09-10",
  dates: [
    "2024-09-01", "2024-09-02", "2024-09-03", "2024-09-04", "2024-09-05",
    "2024-09-06", "2024-09-07", "2024-09-08", "2024-09-09", "2024-09-10",
  ],
  volume: [5, 6, 5, 4, 40, 5, 6, 5, 4, 5],
  intensity: [1.2, 1.3, null, 1.1, 1.4, 1.2, 1.2, 1.3, 1.2, 1.1],
  normalized_volume: [
    0.027777777777777776, 0.05555555555555555, 0.027777777777777776, 0.0,
    1.0, 0.027777777777777776, 0.05555555555555555, 0.027777777777777776,
    0.0, 0.027777777777777776,
  ],
  threshold: 29.38,
  flags: [false, false, false, false, true, false, false, false, false, false],
  labels: { movement: "metoo", platform: "news", layer: "5", mode: "cumulative" },
  engine_version: "0.1.0",
};

export const CONSTANT_SERIES: SeriesResponse = {
  ...SERIES_FIXTURE,
  volume: new Array(10).fill(7),
  normalized_volume: new Array(10).fill(0),
  threshold: 7,
  flags: new Array(10).fill(false),
};

export const DATASETS_FIXTURE: DatasetsResponse = {
  engine_version: "0.1.0",
  datasets: [
    {
      movement: "metoo",
      platform: "news",
      exclusive: [100, 50, 30, 20, 15, 12, 10, 8, 5],
      cumulative: [100, 150, 180, 200, 215, 227, 237, 245, 250],
      documents: 250,
    },
    {
      movement: "metoo",
      platform: "reddit",
      exclusive: [80, 40, 25, 18, 12, 10, 8, 6, 4],
      cumulative: [80, 120, 145, 163, 175, 185, 193, 199, 203],
      documents: 203,
    },
  ],
  layers: [0, 1, 2, 3, 4, 5, 6, 7, 8],
  modes: ["cumulative", "exclusive"],
  ks: [1, 3, 5, 7, 10],
};

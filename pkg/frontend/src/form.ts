/** Analysis-request form state and validation.
 *
 * Submission stays disabled until the server metadata (/datasets) has
 * loaded and the current state validates against it; k choices are
 * restricted to the server-advertised set {1, 3, 5, 7, 10}. */

import { Analysis, AnalyzeRequestBody, DatasetsResponse, Mode, Platform } from "./types.js";

export const SINGLE_K_ANALYSES: Analysis[] = ["h2", "h3", "h5"];

export interface FormState {
  movement: string;
  platform: Platform;
  layer: number;
  cumulative: boolean;
  analysis: Analysis;
  ks: number[];
  alpha: number;
  seed: number;
}

export function defaultForm(): FormState {
  return {
    movement: "",
    platform: "all",
    layer: 5,
    cumulative: true,
    analysis: "h1",
    ks: [1, 3, 5, 7, 10],
    alpha: 0.05,
    seed: 42,
  };
}

export interface ValidationResult {
  ok: boolean;
  errors: string[];
}

export function validateForm(
  state: FormState,
  server: DatasetsResponse | null
): ValidationResult {
  const errors: string[] = [];
  if (server === null) {
    return { ok: false, errors: ["waiting for server metadata"] };
  }
  const movements = new Set(server.datasets.map((d) => d.movement));
  if (!movements.has(state.movement)) {
    errors.push(`unknown movement "${state.movement}"`);
  }
  if (!["news", "reddit", "all"].includes(state.platform)) {
    errors.push("platform must be news, reddit, or all");
  }
  if (!server.layers.includes(state.layer)) {
    errors.push(`layer must be one of ${server.layers.join(", ")}`);
  }
  if (state.ks.length === 0) {
    errors.push("pick at least one window size");
  }
  const allowed = new Set(server.ks);
  for (const k of state.ks) {
    if (!allowed.has(k)) errors.push(`window size ${k} not in {${server.ks.join(", ")}}`);
  }
  if (SINGLE_K_ANALYSES.includes(state.analysis) && state.ks.length !== 1) {
    errors.push(`${state.analysis} takes exactly one window size`);
  }
  if (!(state.alpha > 0 && state.alpha < 1)) {
    errors.push("alpha must be in (0, 1)");
  }
  if (!Number.isInteger(state.seed)) {
    errors.push("seed must be an integer");
  }
  return { ok: errors.length === 0, errors };
}

export function toggleK(state: FormState, k: number): FormState {
  const ks = state.ks.includes(k)
    ? state.ks.filter((v) => v !== k)
    : [...state.ks, k].sort((a, b) => a - b);
  return { ...state, ks };
}

export function analyzeBody(state: FormState): AnalyzeRequestBody {
  return {
    movement: state.movement,
    platform: state.platform,
    layer: state.layer,
    mode: (state.cumulative ? "cumulative" : "exclusive") as Mode,
    ks: state.ks,
    alpha: state.alpha,
    seed: state.seed,
  };
}

/** Cumulative document counts per layer for the slider's live label. */
export function layerCounts(
  server: DatasetsResponse,
  movement: string,
  platform: Platform
): number[] | null {
  const relevant = server.datasets.filter(
    (d) => d.movement === movement && (platform === "all" || d.platform === platform)
  );
  if (relevant.length === 0) return null;
  const out = new Array(9).fill(0);
  for (const entry of relevant) {
    entry.cumulative.forEach((count, i) => {
      out[i] += count;
    });
  }
  return out;
}

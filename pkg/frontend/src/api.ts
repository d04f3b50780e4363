/** Thin API client. One in-flight analysis request per panel: submitting
 * again aborts the stale request before issuing the new one. */

import {
  Analysis,
  AnalyzeRequestBody,
  AnalyzeResponse,
  DatasetsResponse,
  EventRecord,
  SeriesResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseOrThrow<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      if (body && typeof body.error === "string") detail = body.error;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  private controllers = new Map<string, AbortController>();

  constructor(
    private baseUrl: string = "",
    private fetchImpl: typeof fetch = fetch.bind(globalThis)
  ) {}

  async datasets(): Promise<DatasetsResponse> {
    return parseOrThrow(await this.fetchImpl(`${this.baseUrl}/datasets`));
  }

  async events(): Promise<{ events: EventRecord[] }> {
    return parseOrThrow(await this.fetchImpl(`${this.baseUrl}/events`));
  }

  async series(dataset: string, layer: number, mode: string): Promise<SeriesResponse> {
    const params = new URLSearchParams({
      dataset,
      layer: String(layer),
      mode,
    });
    return parseOrThrow(await this.fetchImpl(`${this.baseUrl}/series?${params}`));
  }

  /** POST /analyze/{h}; cancels any previous request on the same panel. */
  async analyze(
    panel: string,
    analysis: Analysis,
    body: AnalyzeRequestBody
  ): Promise<AnalyzeResponse> {
    this.controllers.get(panel)?.abort();
    const controller = new AbortController();
    this.controllers.set(panel, controller);
    try {
      const resp = await this.fetchImpl(`${this.baseUrl}/analyze/${analysis}`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
        signal: controller.signal,
      });
      return await parseOrThrow<AnalyzeResponse>(resp);
    } finally {
      if (this.controllers.get(panel) === controller) {
        this.controllers.delete(panel);
      }
    }
  }

  hasInFlight(panel: string): boolean {
    return this.controllers.has(panel);
  }
}

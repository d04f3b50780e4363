/** Dashboard shell: form on the left, series explorer and result panel on
 * the right. All numbers render verbatim from the API (2-decimal display);
 * results go stale-marked the moment the form diverges from the submitted
 * state. */

import { ApiClient, ApiError } from "./api.js";
import { renderEffectPlotSVG } from "./effectPlot.js";
import { displayNumber, displayP } from "./format.js";
import {
  FormState,
  analyzeBody,
  defaultForm,
  layerCounts,
  toggleK,
  validateForm,
} from "./form.js";
import { escapeHtml, renderHeatTableHTML } from "./heatTable.js";
import { renderScatterSVG } from "./scatter.js";
import { renderSeriesSVG } from "./seriesView.js";
import {
  Analysis,
  AnalyzeResponse,
  DatasetsResponse,
  EffectChartJson,
  HeatTableChartJson,
  ScatterChartJson,
} from "./types.js";

const ANALYSES: Analysis[] = ["h1", "h2", "h3", "h4", "h5"];

class Dashboard {
  private api = new ApiClient("");
  private server: DatasetsResponse | null = null;
  private form: FormState = defaultForm();
  private submittedForm: string | null = null;

  constructor(private root: HTMLElement) {}

  async start(): Promise<void> {
    this.renderSkeleton();
    try {
      this.server = await this.api.datasets();
      const first = this.server.datasets[0];
      if (first) this.form.movement = first.movement;
      this.renderForm();
      await this.refreshSeries();
    } catch (err) {
      this.showError("form-errors", err);
    }
  }

  private renderSkeleton(): void {
    this.root.innerHTML = `
      <header><h1>retroscope dashboard</h1><span id="engine-version"></span></header>
      <main>
        <aside id="form-panel"><p>Loading datasets…</p></aside>
        <section>
          <div id="series-panel" class="panel"><h2>Daily series</h2>
            <div id="series-body"><p>---</p></div></div>
          <div id="result-panel" class="panel"><h2>Analysis</h2>
            <div id="result-status"></div>
            <div id="result-body"><p>Run an analysis to see results.</p></div></div>
        </section>
      </main>`;
  }

  private renderForm(): void {
    const server = this.server;
    if (!server) return;
    const versionEl = document.getElementById("engine-version");
    if (versionEl) versionEl.textContent = `engine ${server.engine_version}`;
    const movements = [...new Set(server.datasets.map((d) => d.movement))];
    const counts = layerCounts(server, this.form.movement, this.form.platform);
    const layerDocs = counts ? counts[this.form.layer] : 0;
    const validation = validateForm(this.form, server);

    const panel = document.getElementById("form-panel")!;
    panel.innerHTML = `
      <label>Movement
        <select id="f-movement">${movements
          .map((m) => `<option ${m === this.form.movement ? "selected" : ""}>${escapeHtml(m)}</option>`)
          .join("")}</select>
      </label>
      <label>Platform
        <select id="f-platform">${["news", "reddit", "all"]
          .map((p) => `<option ${p === this.form.platform ? "selected" : ""}>${p}</option>`)
          .join("")}</select>
      </label>
      <label>Layer <output>${this.form.layer}</output> (${layerDocs} docs)
        <input id="f-layer" type="range" min="0" max="8" value="${this.form.layer}">
      </label>
      <label><input id="f-cumulative" type="checkbox" ${this.form.cumulative ? "checked" : ""}>
        cumulative layers</label>
      <div id="f-tabs" role="tablist">${ANALYSES.map(
        (a) =>
          `<button data-analysis="${a}" class="${a === this.form.analysis ? "active" : ""}">${a}</button>`
      ).join("")}</div>
      <fieldset><legend>Window sizes ±k</legend>${server.ks
        .map(
          (k) =>
            `<label class="k-choice"><input type="checkbox" data-k="${k}" ` +
            `${this.form.ks.includes(k) ? "checked" : ""}>${k}</label>`
        )
        .join("")}</fieldset>
      <label>alpha <input id="f-alpha" type="number" step="0.01" min="0.001" max="0.5"
        value="${this.form.alpha}"></label>
      <label>seed <input id="f-seed" type="number" value="${this.form.seed}"></label>
      <button id="f-run" ${validation.ok ? "" : "disabled"}>Run analysis</button>
      <div id="form-errors" class="errors">${validation.errors
        .map((e) => `<p>${escapeHtml(e)}</p>`)
        .join("")}</div>`;

    this.bindFormEvents();
  }

  private bindFormEvents(): void {
    const onChange = () => {
      this.markStaleIfNeeded();
      this.renderForm();
    };
    (document.getElementById("f-movement") as HTMLSelectElement).onchange = (e) => {
      this.form.movement = (e.target as HTMLSelectElement).value;
      onChange();
      void this.refreshSeries();
    };
    (document.getElementById("f-platform") as HTMLSelectElement).onchange = (e) => {
      this.form.platform = (e.target as HTMLSelectElement).value as FormState["platform"];
      onChange();
      void this.refreshSeries();
    };
    (document.getElementById("f-layer") as HTMLInputElement).oninput = (e) => {
      this.form.layer = Number((e.target as HTMLInputElement).value);
      onChange();
      void this.refreshSeries();
    };
    (document.getElementById("f-cumulative") as HTMLInputElement).onchange = (e) => {
      this.form.cumulative = (e.target as HTMLInputElement).checked;
      onChange();
      void this.refreshSeries();
    };
    document.querySelectorAll<HTMLButtonElement>("#f-tabs button").forEach((btn) => {
      btn.onclick = () => {
        this.form.analysis = btn.dataset.analysis as Analysis;
        onChange();
      };
    });
    document.querySelectorAll<HTMLInputElement>("input[data-k]").forEach((box) => {
      box.onchange = () => {
        this.form = toggleK(this.form, Number(box.dataset.k));
        onChange();
      };
    });
    (document.getElementById("f-alpha") as HTMLInputElement).onchange = (e) => {
      this.form.alpha = Number((e.target as HTMLInputElement).value);
      onChange();
    };
    (document.getElementById("f-seed") as HTMLInputElement).onchange = (e) => {
      this.form.seed = Number((e.target as HTMLInputElement).value);
      onChange();
    };
    (document.getElementById("f-run") as HTMLButtonElement).onclick = () => {
      void this.runAnalysis();
    };
  }

  private markStaleIfNeeded(): void {
    if (this.submittedForm === null) return;
    const status = document.getElementById("result-status");
    if (!status) return;
    const current = JSON.stringify({ a: this.form.analysis, b: analyzeBody(this.form) });
    status.innerHTML =
      current === this.submittedForm
        ? ""
        : '<p class="stale">Form changed since this result was computed (stale).</p>';
  }

  private async refreshSeries(): Promise<void> {
    if (!this.server) return;
    const body = document.getElementById("series-body")!;
    const dataset = `${this.form.movement}:${this.form.platform}`;
    try {
      const series = await this.api.series(
        dataset,
        this.form.layer,
        this.form.cumulative ? "cumulative" : "exclusive"
      );
      const total = series.volume.reduce((a, b) => a + b, 0);
      body.innerHTML =
        `<p>${escapeHtml(dataset)} · layer ${this.form.layer} ` +
        `(${this.form.cumulative ? "cumulative" : "exclusive"}) · ${total} documents · ` +
        `threshold ${series.threshold === null ? "---" : displayNumber(series.threshold)}</p>` +
        renderSeriesSVG(series);
    } catch (err) {
      body.innerHTML = `<p class="errors">${escapeHtml(describeError(err))}</p>`;
    }
  }

  private async runAnalysis(): Promise<void> {
    const status = document.getElementById("result-status")!;
    const body = document.getElementById("result-body")!;
    const requestBody = analyzeBody(this.form);
    const analysis = this.form.analysis;
    status.innerHTML = "<p>Running…</p>";
    try {
      const response = await this.api.analyze("main", analysis, requestBody);
      this.submittedForm = JSON.stringify({ a: analysis, b: requestBody });
      status.innerHTML = "";
      body.innerHTML = renderResult(response);
    } catch (err) {
      if ((err as Error).name === "AbortError") return; // superseded submission
      status.innerHTML = "";
      body.innerHTML = `<p class="errors">${escapeHtml(describeError(err))}</p>`;
    }
  }

  private showError(targetId: string, err: unknown): void {
    const el = document.getElementById(targetId) ?? this.root;
    el.innerHTML = `<p class="errors">${escapeHtml(describeError(err))}</p>`;
  }
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) return `server: ${err.detail} (HTTP ${err.status})`;
  return err instanceof Error ? err.message : String(err);
}

export function renderResult(response: AnalyzeResponse): string {
  const { result, chart } = response;
  const header =
    `<p class="meta">engine ${escapeHtml(response.engine_version)} · seed ${response.seed} · ` +
    `${result.n_events_used}/${result.n_events} events used</p>`;
  let panel = "";
  if (chart.chart === "event_heat_table") {
    panel = renderHeatTableHTML(chart as HeatTableChartJson);
  } else if (chart.chart === "effect_sizes") {
    panel = renderEffectPlotSVG(chart as EffectChartJson) + renderKTable(response);
  } else {
    panel = renderScatterSVG(chart as ScatterChartJson) + renderAggregate(response);
  }
  return header + panel;
}

function renderKTable(response: AnalyzeResponse): string {
  const rows = Object.values(response.result.by_k)
    .sort((a, b) => a.k - b.k)
    .map((entry) => {
      const t = entry.test;
      const ci =
        t.ci_low === null || t.ci_high === null
          ? "---"
          : `[${displayNumber(t.ci_low)}, ${displayNumber(t.ci_high)}]`;
      return (
        `<tr><td>±${entry.k}</td><td>${displayNumber(t.effect_size_d)}</td>` +
        `<td>${displayP(t.p_raw)}</td><td>${displayP(t.p_adjusted)}</td>` +
        `<td>${ci}</td><td>${displayNumber(entry.percent_change)}</td></tr>`
      );
    })
    .join("");
  return (
    `<table class="k-table"><thead><tr><th>k</th><th>d</th><th>p raw</th>` +
    `<th>p adj</th><th>95% CI</th><th>% change</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

function renderAggregate(response: AnalyzeResponse): string {
  const r = response.result;
  if (!r.aggregate_test) return "";
  const t = r.aggregate_test;
  return (
    `<p>aggregate pre−post = ${displayNumber(r.aggregate)} (${escapeHtml(r.direction ?? "")}), ` +
    `two-tailed p = ${displayP(t.p_raw)}, one-tailed p = ${displayP(r.p_one_sided)}</p>`
  );
}

const rootEl = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootEl) {
  void new Dashboard(rootEl).start();
}

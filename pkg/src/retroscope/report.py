"""Rendering of analysis results: tables, exports, and chart-ready JSON.

Stars are always a pure function of the FDR-adjusted p-value (*, **, *** at
0.05/0.01/0.001). Cell color is the signed normalized magnitude
value / max|value| over the table, in [-1, 1]: positive green, negative red.
The chart JSON schemas are documented in docs/api.md and consumed verbatim
by the dashboard; the client performs no statistics.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .eventstudy import HypothesisResult, significance_stars

TABLE_FORMATS = ("markdown", "csv", "json")

TABLE_LEGEND = {
    "stars": {"***": "p < 0.001", "**": "p < 0.01", "*": "p < 0.05"},
    "color": "signed normalized magnitude in [-1, 1]: positive green, negative red",
}


def stable_json(payload) -> str:
    """Canonical JSON serialization: sorted keys, no whitespace.

    The CLI and the HTTP service both emit exactly this form, so identical
    run configurations produce byte-identical output.
    """
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


@dataclass
class RenderedTable:
    format: str
    columns: list[str]
    rows: list[dict]
    legend: dict = field(default_factory=lambda: dict(TABLE_LEGEND))

    def __post_init__(self):
        if self.format not in TABLE_FORMATS:
            raise ValueError(f"unknown table format {self.format!r}")

    def to_json(self) -> str:
        return stable_json({"columns": self.columns, "rows": self.rows, "legend": self.legend})

    def _cell_text(self, cell) -> str:
        if cell is None:
            return ""
        if isinstance(cell, dict):
            value = cell.get("value")
            if value is None:
                return "---"
            return f"{value:.1f}{cell.get('stars', '')}"
        return str(cell)

    def to_markdown(self) -> str:
        buf = io.StringIO()
        buf.write("| " + " | ".join(self.columns) + " |\n")
        buf.write("|" + "|".join(["---"] * len(self.columns)) + "|\n")
        for row in self.rows:
            cells = [self._cell_text(row.get(col)) for col in self.columns]
            buf.write("| " + " | ".join(cells) + " |\n")
        buf.write("\nLegend: *** p < 0.001, ** p < 0.01, * p < 0.05; "
                  "green positive, red negative, intensity proportional to |value|.\n")
        return buf.getvalue()

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(self._cell_text(row.get(col)) for col in self.columns) + "\n")
        return buf.getvalue()

    def render(self) -> str:
        if self.format == "markdown":
            return self.to_markdown()
        if self.format == "csv":
            return self.to_csv()
        return self.to_json()


def _color_value(value: float | None, max_abs: float) -> float:
    if value is None or max_abs == 0.0:
        return 0.0
    return max(-1.0, min(1.0, value / max_abs))


def render_event_table(
    results: HypothesisResult | Mapping[str, HypothesisResult],
    format: str = "markdown",
) -> RenderedTable:
    """Per-event heat table for one or more per-event volume analyses.

    One row per event; one value column per dataset label. Cells carry the
    signed percent difference, stars from the adjusted p, and the color
    value. Cumulative layering of multiple datasets matches the published
    table layout (events as rows, datasets as columns).
    """
    if isinstance(results, HypothesisResult):
        results = {_dataset_label(results): results}
    for res in results.values():
        if res.analysis != "h3":
            raise ValueError(f"render_event_table expects an h3 result, got {res.analysis!r}")

    all_values = [
        o.percent_change
        for res in results.values()
        for o in res.per_event
        if o.percent_change is not None
    ]
    max_abs = max((abs(v) for v in all_values), default=0.0)

    event_dates = []
    for res in results.values():
        for outcome in res.per_event:
            if outcome.event.date not in event_dates:
                event_dates.append(outcome.event.date)
    event_dates.sort()

    columns = ["event"] + list(results.keys())
    rows = []
    for day in event_dates:
        row: dict = {"event": day.isoformat()}
        for label, res in results.items():
            outcome = next((o for o in res.per_event if o.event.date == day), None)
            if outcome is None:
                row[label] = None
                continue
            stars = significance_stars(outcome.test.p_adjusted if outcome.test else None)
            color = _color_value(outcome.percent_change, max_abs)
            row[label] = {
                "value": outcome.percent_change,
                "stars": stars,
                "color": color,
                "significant": bool(outcome.significant),
            }
        rows.append(row)
    return RenderedTable(format=format, columns=columns, rows=rows)


def _dataset_label(result: HypothesisResult) -> str:
    labels = result.labels or {}
    movement = labels.get("movement", "dataset")
    platform = labels.get("platform", "all")
    return f"{movement}:{platform}"


def emit_effect_plot_data(result: HypothesisResult, ks: Sequence[int] | None = None) -> dict:
    """Dot-plot data for per-window analyses: one point per k with Cohen's d,
    CI bar ends, and a significance flag (adjusted p <= alpha). Points with
    no CI are emitted without bars and flagged missing_ci."""
    if result.analysis not in ("h1", "h4"):
        raise ValueError(f"effect plot needs an h1/h4 result, got {result.analysis!r}")
    ks = list(ks) if ks is not None else sorted(result.by_k)
    points = []
    for k in ks:
        kres = result.by_k.get(k)
        if kres is None:
            continue
        test = kres.test
        missing_ci = test.ci_low is None or test.ci_high is None
        points.append(
            {
                "k": k,
                "d": test.effect_size_d,
                "ci_low": test.ci_low,
                "ci_high": test.ci_high,
                "significant": bool(
                    test.p_adjusted is not None and test.p_adjusted <= result.alpha
                ),
                "missing_ci": missing_ci,
            }
        )
    return {
        "chart": "effect_sizes",
        "analysis": result.analysis,
        "alpha": result.alpha,
        "labels": result.labels,
        "points": points,
    }


def emit_prepost_scatter(result: HypothesisResult) -> dict:
    """Pre/post scatter data for per-event analyses (h2 detail, h5).

    One point per usable event; points above the diagonal are anticipatory.
    Significance borders reflect per-event adjusted p where a per-event test
    exists (h5); h2 has a single aggregate test, so its points carry
    significant=false. Skipped events appear only in the metadata count.
    """
    if result.analysis not in ("h2", "h5"):
        raise ValueError(f"pre/post scatter needs an h2/h5 result, got {result.analysis!r}")
    points = []
    for outcome in result.per_event:
        pre = outcome.detail.get("pre", outcome.detail.get("pre_mean"))
        post = outcome.detail.get("post", outcome.detail.get("post_mean"))
        points.append(
            {
                "date": outcome.event.date.isoformat(),
                "description": outcome.event.description,
                "category": outcome.event.category,
                "pre": pre,
                "post": post,
                "direction": outcome.direction,
                "significant": bool(outcome.significant),
            }
        )
    return {
        "chart": "prepost_scatter",
        "analysis": result.analysis,
        "alpha": result.alpha,
        "labels": result.labels,
        "points": points,
        "skipped": len(result.skipped),
    }


def chart_payload(result: HypothesisResult) -> dict | None:
    """The chart JSON companion for a result, by analysis type."""
    if result.analysis in ("h1", "h4"):
        return emit_effect_plot_data(result)
    if result.analysis in ("h2", "h5"):
        return emit_prepost_scatter(result)
    if result.analysis == "h3":
        table = render_event_table(result, format="json")
        return {
            "chart": "event_heat_table",
            "analysis": "h3",
            "alpha": result.alpha,
            "labels": result.labels,
            "columns": table.columns,
            "rows": table.rows,
        }
    return None


def result_markdown(result: HypothesisResult) -> str:
    """A compact human-readable summary for any analysis."""
    lines = [f"# Analysis {result.analysis}", ""]
    if result.labels:
        lines.append("Dataset: " + ", ".join(f"{k}={v}" for k, v in sorted(result.labels.items())))
    lines.append(f"Events: {result.n_events_used} used, {len(result.skipped)} skipped")
    lines.append("")
    if result.by_k:
        lines.append("| k | statistic | d | p (raw) | p (adj) | 95% CI | % change |")
        lines.append("|---|---|---|---|---|---|---|")
        for k in sorted(result.by_k):
            kres = result.by_k[k]
            t = kres.test
            d_txt = "n/a" if t.effect_size_d is None else f"{t.effect_size_d:.3f}"
            ci_txt = (
                f"[{t.ci_low:.3f}, {t.ci_high:.3f}]"
                if t.ci_low is not None and t.ci_high is not None
                else "n/a"
            )
            pc = "n/a" if kres.percent_change is None else f"{kres.percent_change:.2f}%"
            lines.append(
                f"| {k} | {t.statistic:.4f} | {d_txt} | {t.p_raw:.4g} "
                f"| {t.p_adjusted:.4g} | {ci_txt} | {pc} |"
            )
    if result.analysis == "h2" and result.aggregate_test is not None:
        t = result.aggregate_test
        lines.append(f"Aggregate (pre - post): {result.aggregate:.4f} ({result.direction})")
        lines.append(
            f"two-tailed p = {t.p_raw:.4g} (adjusted {t.p_adjusted:.4g}), "
            f"one-tailed p = {result.p_one_sided:.4g}"
        )
        if t.ci_low is not None:
            lines.append(f"95% CI [{t.ci_low:.4f}, {t.ci_high:.4f}], d = {t.effect_size_d}")
    if result.analysis == "h3":
        lines.append(render_event_table(result, format="markdown").to_markdown())
    if result.analysis == "h5":
        lines.append("| event | category | pre | post | direction | p (adj) | sig |")
        lines.append("|---|---|---|---|---|---|---|")
        for o in result.per_event:
            lines.append(
                f"| {o.event.date.isoformat()} | {o.event.category} "
                f"| {o.detail['pre_mean']:.4f} | {o.detail['post_mean']:.4f} "
                f"| {o.direction} | {o.test.p_adjusted:.4g} | {'yes' if o.significant else 'no'} |"
            )
    lines.append("")
    return "\n".join(lines)

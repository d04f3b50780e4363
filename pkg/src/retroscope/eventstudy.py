"""The five event-study analyses over a daily series and an event list.

Window algebra, matched weekday controls, permutation schemes, and result
assembly. Every randomized step draws from a labeled substream of a
:class:`~retroscope.stats.RandomPlan`, so any analysis is bitwise
reproducible for a fixed master seed regardless of worker count or event
evaluation order.

Null-scheme notes (fixed here, referenced by the tests):

* Volume-vs-control (h1): per permutation, each event is reassigned a
  pseudo date drawn uniformly from non-occupied days sharing the real
  event's weekday (occupied = any day inside any real event window at the
  current half-width), paired with a fresh control drawn from the same
  weekday-matched eligible-start set as the real control.
* Pre-vs-post (h2): event dates are reassigned uniformly over days with
  full reference+window coverage and a nonzero reference mean, excluding
  the real event dates; no weekday matching.
* Per-event baseline (h3): each permutation samples 2k+1 days without
  replacement from the whole series and compares their mean against the
  remaining days' mean.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import AnalysisError, DataError, EventSkipped
from .stats import (
    DegenerateVarianceError,
    RandomPlan,
    TestResult,
    benjamini_hochberg,
    bootstrap_ci,
    cohens_d,
    mann_whitney,
    permutation_pvalue,
)
from .timeseries import DailySeries

EVENT_CATEGORIES = ("elections", "foreign_policy", "domestic_policy")

DEFAULT_KS = (1, 3, 5, 7, 10)


@dataclass(frozen=True)
class KeyEvent:
    date: date
    description: str = ""
    category: str = "domestic_policy"

    def __post_init__(self):
        if self.category not in EVENT_CATEGORIES:
            raise ValueError(f"unknown event category {self.category!r}")

    def to_dict(self) -> dict:
        return {
            "date": self.date.isoformat(),
            "description": self.description,
            "category": self.category,
        }


def load_events(path: str | Path) -> list[KeyEvent]:
    """Read events from JSON (list of objects) or CSV with a header row."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read events file {path}: {exc}") from exc
    rows: Iterable[dict]
    if path.suffix.lower() == ".json":
        payload = json.loads(text)
        if isinstance(payload, dict) and "events" in payload:
            payload = payload["events"]
        rows = payload
    else:
        rows = list(csv.DictReader(text.splitlines()))
    events = []
    for i, row in enumerate(rows):
        try:
            events.append(
                KeyEvent(
                    date=date.fromisoformat(str(row["date"]).strip()),
                    description=str(row.get("description", "")).strip(),
                    category=str(row["category"]).strip(),
                )
            )
        except (KeyError, ValueError) as exc:
            raise DataError(f"bad event record {i}: {exc}") from exc
    return events


@dataclass(frozen=True)
class WindowConfig:
    """Shared analysis knobs; None counts fall back to per-analysis defaults
    (10,000 permutations for h1/h2, 1,000 for h3; 1,000 bootstrap iterations
    for h1/h2, 2,000 for h4)."""

    exclude_event_day: bool = False
    reference_offsets: tuple[int, int] = (-14, -8)
    buffer_days: int = 14
    n_permutations: Optional[int] = None
    bootstrap_iters: Optional[int] = None
    alpha: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        lo, hi = self.reference_offsets
        if not (lo <= hi < 0):
            raise ValueError("reference window must strictly precede the event")
        if self.buffer_days < 0:
            raise ValueError("buffer_days must be >= 0")

    def permutations(self, default: int) -> int:
        return self.n_permutations if self.n_permutations is not None else default

    def bootstrap(self, default: int) -> int:
        return self.bootstrap_iters if self.bootstrap_iters is not None else default


@dataclass(frozen=True)
class EventWindow:
    event: KeyEvent
    k: int
    pre_days: tuple[date, ...]
    post_days: tuple[date, ...]
    all_days: tuple[date, ...]

    @property
    def first_day(self) -> date:
        return self.pre_days[0]

    @property
    def last_day(self) -> date:
        return self.post_days[-1]

    @property
    def span_length(self) -> int:
        return (self.last_day - self.first_day).days + 1


def build_windows(
    series: DailySeries, event: KeyEvent, k: int, exclude_event_day: bool = False
) -> EventWindow:
    """Symmetric ±k window; raises EventSkipped("boundary") if it overflows."""
    if k < 1:
        raise ValueError("k must be >= 1")
    first = event.date - timedelta(days=k)
    last = event.date + timedelta(days=k)
    if first < series.start_date or last > series.end_date:
        raise EventSkipped("boundary")
    pre = tuple(event.date - timedelta(days=j) for j in range(k, 0, -1))
    post = tuple(event.date + timedelta(days=j) for j in range(1, k + 1))
    all_days = pre + (() if exclude_event_day else (event.date,)) + post
    return EventWindow(event=event, k=k, pre_days=pre, post_days=post, all_days=all_days)


def occupied_days(series: DailySeries, events: Sequence[KeyEvent], k: int) -> set[date]:
    """Every in-range day within ±k of any event (boundary events included)."""
    occupied: set[date] = set()
    for ev in events:
        for j in range(-k, k + 1):
            day = ev.date + timedelta(days=j)
            if series.start_date <= day <= series.end_date:
                occupied.add(day)
    return occupied


@dataclass(frozen=True)
class ControlWindow:
    days: tuple[date, ...]
    relaxed: bool  # True when the weekday constraint had to be dropped


def control_start_candidates(
    series: DailySeries,
    window: EventWindow,
    occupied: set[date],
    match_weekday: bool = True,
) -> list[date]:
    """Start dates of contiguous spans of the window's length that overlap
    no occupied day, optionally sharing the window's starting weekday."""
    length = window.span_length
    target = window.first_day.weekday()
    out = []
    day = series.start_date
    while day + timedelta(days=length - 1) <= series.end_date:
        if not match_weekday or day.weekday() == target:
            span = [day + timedelta(days=j) for j in range(length)]
            if not any(d in occupied for d in span):
                out.append(day)
        day += timedelta(days=1)
    return out


def matched_control(
    series: DailySeries,
    window: EventWindow,
    occupied: set[date],
    rng: np.random.Generator,
) -> ControlWindow:
    """Uniformly sample a non-event span matching the window's start weekday.

    Falls back to any weekday when no matched span exists (relaxed=True);
    raises EventSkipped("no control") if none exists at all.
    """
    candidates = control_start_candidates(series, window, occupied, match_weekday=True)
    relaxed = False
    if not candidates:
        candidates = control_start_candidates(series, window, occupied, match_weekday=False)
        relaxed = True
    if not candidates:
        raise EventSkipped("no control")
    start = candidates[int(rng.integers(0, len(candidates)))]
    days = tuple(start + timedelta(days=j) for j in range(window.span_length))
    return ControlWindow(days=days, relaxed=relaxed)


# ---------------------------------------------------------------------------
# Result containers
# ---------------------------------------------------------------------------

@dataclass
class SkippedEvent:
    date: date
    reason: str

    def to_dict(self) -> dict:
        return {"date": self.date.isoformat(), "reason": self.reason}


@dataclass
class EventOutcome:
    event: KeyEvent
    test: Optional[TestResult] = None
    percent_change: Optional[float] = None
    direction: Optional[str] = None
    significant: Optional[bool] = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "event": self.event.to_dict(),
            "test": self.test.to_dict() if self.test else None,
            "percent_change": self.percent_change,
            "direction": self.direction,
            "significant": self.significant,
            "detail": self.detail,
        }


@dataclass
class KWindowResult:
    k: int
    test: TestResult
    percent_change: Optional[float]
    n_events_used: int
    skipped: list[SkippedEvent]
    per_event: list[dict]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "test": self.test.to_dict(),
            "percent_change": self.percent_change,
            "n_events_used": self.n_events_used,
            "skipped": [s.to_dict() for s in self.skipped],
            "per_event": self.per_event,
            "warnings": self.warnings,
        }


@dataclass
class HypothesisResult:
    """Assembled output of one analysis.

    ``by_k`` is populated for the per-window analyses (h1, h4); ``per_event``
    for the per-event ones (h2 detail, h3, h5). For per-window analyses the
    top-level used/skipped counts reflect the largest k (the most
    boundary-restrictive window); authoritative per-k lists live in
    ``by_k``.
    """

    analysis: str
    alpha: float
    n_events: int
    n_events_used: int
    skipped: list[SkippedEvent] = field(default_factory=list)
    by_k: dict[int, KWindowResult] = field(default_factory=dict)
    per_event: list[EventOutcome] = field(default_factory=list)
    aggregate: Optional[float] = None
    aggregate_test: Optional[TestResult] = None
    p_one_sided: Optional[float] = None
    direction: Optional[str] = None
    labels: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "analysis": self.analysis,
            "alpha": self.alpha,
            "n_events": self.n_events,
            "n_events_used": self.n_events_used,
            "skipped": [s.to_dict() for s in self.skipped],
            "by_k": {str(k): r.to_dict() for k, r in sorted(self.by_k.items())},
            "per_event": [o.to_dict() for o in self.per_event],
            "aggregate": self.aggregate,
            "aggregate_test": self.aggregate_test.to_dict() if self.aggregate_test else None,
            "p_one_sided": self.p_one_sided,
            "direction": self.direction,
            "labels": self.labels,
        }


# ---------------------------------------------------------------------------
# Shared indexing helpers
# ---------------------------------------------------------------------------

class _SeriesIndex:
    def __init__(self, series: DailySeries):
        self.series = series
        self.vol = np.asarray(series.volume, dtype=float)
        self.n = len(series)
        self.intensity = np.array(
            [np.nan if v is None else float(v) for v in series.intensity]
        )
        self.weekdays = (series.start_date.weekday() + np.arange(self.n)) % 7

    def index(self, day: date) -> int:
        return (day - self.series.start_date).days

    def in_range(self, i: int) -> bool:
        return 0 <= i < self.n


def _parallel_map(fn: Callable, items: Sequence, workers: int) -> list:
    """Order-preserving map; results are identical at any worker count
    because each task derives its own labeled random substreams."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _sliding_means(vol: np.ndarray, length: int) -> np.ndarray:
    """means[s] = mean(vol[s:s+length]) for every valid start s."""
    csum = np.concatenate([[0.0], np.cumsum(vol)])
    return (csum[length:] - csum[:-length]) / length


def _sliding_medians(vol: np.ndarray, length: int) -> np.ndarray:
    windows = np.lib.stride_tricks.sliding_window_view(vol, length)
    return np.median(windows, axis=1)


def _safe_cohens_d(a, b) -> Optional[float]:
    try:
        return cohens_d(a, b)
    except DegenerateVarianceError:
        return None


def _fdr_across_k(results: dict[int, KWindowResult], alpha: float) -> None:
    ks = sorted(results)
    adjusted, _ = benjamini_hochberg([results[k].test.p_raw for k in ks], alpha)
    for k, adj in zip(ks, adjusted):
        results[k].test.p_adjusted = adj


# ---------------------------------------------------------------------------
# H1: volume in event windows vs matched controls
# ---------------------------------------------------------------------------

def run_h1(
    series: DailySeries,
    events: Sequence[KeyEvent],
    ks: Sequence[int] = DEFAULT_KS,
    cfg: WindowConfig = WindowConfig(),
    plan: RandomPlan = RandomPlan(0),
    workers: int = 1,
) -> HypothesisResult:
    """Median event-window volume vs matched-control volume, per window size.

    Aggregate statistic: mean over events of (event median - control
    median). Two-tailed permutation p over pseudo-event reassignments;
    Cohen's d between the event-median and control-median samples;
    percentile bootstrap CI over the per-event differences. BH-FDR is
    applied across the window sizes.
    """
    idx = _SeriesIndex(series)
    n_perm = cfg.permutations(10_000)
    boot = cfg.bootstrap(1_000)

    def one_k(k: int) -> tuple[int, KWindowResult]:
        return k, _h1_for_k(idx, events, k, n_perm, boot, plan)

    by_k = dict(_parallel_map(one_k, list(ks), workers))
    _fdr_across_k(by_k, cfg.alpha)
    top = by_k[max(by_k)]
    return HypothesisResult(
        analysis="h1",
        alpha=cfg.alpha,
        n_events=len(events),
        n_events_used=top.n_events_used,
        skipped=top.skipped,
        by_k=by_k,
        labels=dict(series.labels),
    )


def _h1_for_k(
    idx: _SeriesIndex,
    events: Sequence[KeyEvent],
    k: int,
    n_perm: int,
    boot: int,
    plan: RandomPlan,
) -> KWindowResult:
    series = idx.series
    length = 2 * k + 1
    occupied = occupied_days(series, events, k)
    occupied_mask = np.zeros(idx.n, dtype=bool)
    for day in occupied:
        occupied_mask[idx.index(day)] = True
    med_start = _sliding_medians(idx.vol, length)

    usable: list[tuple[int, KeyEvent, int, int, bool]] = []
    skipped: list[SkippedEvent] = []
    warnings: list[str] = []
    for ei, ev in enumerate(events):
        try:
            window = build_windows(series, ev, k)
            control = matched_control(
                series, window, occupied, plan.generator("h1", k, ei, "control")
            )
        except EventSkipped as skip:
            skipped.append(SkippedEvent(ev.date, skip.reason))
            continue
        if control.relaxed:
            warnings.append(f"event {ev.date.isoformat()}: weekday constraint relaxed")
        usable.append(
            (ei, ev, idx.index(window.first_day), idx.index(control.days[0]), control.relaxed)
        )
    if len(usable) < 2:
        raise AnalysisError("need >= 2 usable events")

    event_medians = np.array([med_start[s] for _, _, s, _, _ in usable])
    control_medians = np.array([med_start[c] for _, _, _, c, _ in usable])
    diffs = event_medians - control_medians
    aggregate = float(diffs.mean())

    null_sum = np.zeros(n_perm)
    for ei, ev, _, _, _ in usable:
        event_idx = idx.index(ev.date)
        pseudo = np.flatnonzero(
            (~occupied_mask)
            & (idx.weekdays == idx.weekdays[event_idx])
            & (np.arange(idx.n) >= k)
            & (np.arange(idx.n) <= idx.n - 1 - k)
        )
        if pseudo.size == 0:
            pseudo = np.flatnonzero(
                (~occupied_mask)
                & (np.arange(idx.n) >= k)
                & (np.arange(idx.n) <= idx.n - 1 - k)
            )
        if pseudo.size == 0:
            raise AnalysisError("no eligible pseudo-event dates for the null")
        window = build_windows(series, ev, k)
        control_starts = control_start_candidates(series, window, occupied, True)
        if not control_starts:
            control_starts = control_start_candidates(series, window, occupied, False)
        control_idx = np.array([idx.index(d) for d in control_starts])
        rng_dates = plan.generator("h1", k, ei, "null_dates")
        rng_controls = plan.generator("h1", k, ei, "null_controls")
        pick_dates = pseudo[rng_dates.integers(0, pseudo.size, size=n_perm)]
        pick_controls = control_idx[rng_controls.integers(0, control_idx.size, size=n_perm)]
        null_sum += med_start[pick_dates - k] - med_start[pick_controls]
    null_aggregate = null_sum / len(usable)

    p_raw = permutation_pvalue(aggregate, null_aggregate, "two_sided")
    effect = _safe_cohens_d(event_medians, control_medians)
    ci_low, ci_high = bootstrap_ci(
        diffs, "mean", boot, rng=plan.generator("h1", k, "bootstrap")
    )
    mean_controls = float(control_medians.mean())
    percent = (
        100.0 * (float(event_medians.mean()) - mean_controls) / mean_controls
        if mean_controls != 0.0
        else None
    )
    per_event = [
        {
            "date": ev.date.isoformat(),
            "event_median": float(med_start[s]),
            "control_median": float(med_start[c]),
            "diff": float(med_start[s] - med_start[c]),
            "control_start": series.dates()[c].isoformat(),
            "relaxed_control": relaxed,
        }
        for _, ev, s, c, relaxed in usable
    ]
    test = TestResult(
        statistic=aggregate,
        effect_size_d=effect,
        p_raw=p_raw,
        n_a=len(usable),
        n_b=len(usable),
        tail="two_sided",
        ci_low=ci_low,
        ci_high=ci_high,
    )
    return KWindowResult(
        k=k,
        test=test,
        percent_change=percent,
        n_events_used=len(usable),
        skipped=skipped,
        per_event=per_event,
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# H2: pre-event vs post-event volume, reference-normalized
# ---------------------------------------------------------------------------

def _h2_event_stats(
    idx: _SeriesIndex, event_idx: int, k: int, ref_offsets: tuple[int, int]
) -> tuple[float, float, float]:
    """(pre, post, ref) means; pre/post are divided by the reference mean."""
    ref_lo, ref_hi = ref_offsets
    ref = float(idx.vol[event_idx + ref_lo : event_idx + ref_hi + 1].mean())
    pre = float(idx.vol[event_idx - k : event_idx].mean())
    post = float(idx.vol[event_idx + 1 : event_idx + k + 1].mean())
    if ref == 0.0:
        return pre, post, ref
    return pre / ref, post / ref, ref


def run_h2(
    series: DailySeries,
    events: Sequence[KeyEvent],
    k: int = 7,
    cfg: WindowConfig = WindowConfig(),
    plan: RandomPlan = RandomPlan(0),
    workers: int = 1,
) -> HypothesisResult:
    """Mean pre-event vs post-event daily volume, each normalized by the
    reference-window mean; the event day is excluded.

    Aggregate: mean over events of (pre - post); positive = anticipatory.
    Null: event dates reassigned to eligible alternatives, 10,000 times.
    Reports two-tailed and one-tailed (pre > post) p-values.
    """
    idx = _SeriesIndex(series)
    ref_lo, ref_hi = cfg.reference_offsets
    if ref_hi >= -k:
        raise AnalysisError("reference window must strictly precede the pre window")
    n_perm = cfg.permutations(10_000)
    boot = cfg.bootstrap(1_000)

    pre_values, post_values, used, skipped = [], [], [], []
    for ev in events:
        event_idx = idx.index(ev.date)
        if event_idx + ref_lo < 0 or event_idx + k > idx.n - 1:
            skipped.append(SkippedEvent(ev.date, "boundary"))
            continue
        pre, post, ref = _h2_event_stats(idx, event_idx, k, (ref_lo, ref_hi))
        if ref == 0.0:
            skipped.append(SkippedEvent(ev.date, "zero reference"))
            continue
        pre_values.append(pre)
        post_values.append(post)
        used.append(ev)
    if len(used) < 2:
        if not used:
            raise AnalysisError("all events skipped")
        raise AnalysisError("need >= 2 usable events")

    pre_arr = np.array(pre_values)
    post_arr = np.array(post_values)
    diffs = pre_arr - post_arr
    aggregate = float(diffs.mean())

    # Eligible reassignment dates: full coverage, nonzero reference mean,
    # excluding the real event dates.
    ref_means = _sliding_means(idx.vol, ref_hi - ref_lo + 1)
    pre_means = _sliding_means(idx.vol, k)
    post_means = _sliding_means(idx.vol, k)
    positions = np.arange(idx.n)
    coverage = (positions + ref_lo >= 0) & (positions + k <= idx.n - 1)
    ref_at = np.full(idx.n, np.nan)
    valid = np.flatnonzero(coverage)
    ref_at[valid] = ref_means[valid + ref_lo]
    real_dates = {idx.index(ev.date) for ev in events if 0 <= idx.index(ev.date) < idx.n}
    eligible = np.array(
        [
            i
            for i in valid
            if ref_at[i] != 0.0 and not np.isnan(ref_at[i]) and i not in real_dates
        ]
    )
    if eligible.size == 0:
        raise AnalysisError("no eligible reassignment dates for the null")

    pre_at = np.full(idx.n, np.nan)
    post_at = np.full(idx.n, np.nan)
    pre_at[valid] = pre_means[valid - k]
    post_at[valid] = post_means[valid + 1]

    null_sum = np.zeros(n_perm)
    for ei, _ in enumerate(used):
        rng = plan.generator("h2", k, ei, "null")
        picks = eligible[rng.integers(0, eligible.size, size=n_perm)]
        null_sum += (pre_at[picks] - post_at[picks]) / ref_at[picks]
    null_aggregate = null_sum / len(used)

    p_two = permutation_pvalue(aggregate, null_aggregate, "two_sided")
    p_one = permutation_pvalue(aggregate, null_aggregate, "greater")
    effect = _safe_cohens_d(pre_arr, post_arr)
    ci_low, ci_high = bootstrap_ci(diffs, "mean", boot, rng=plan.generator("h2", k, "bootstrap"))
    adjusted, _ = benjamini_hochberg([p_two], cfg.alpha)

    test = TestResult(
        statistic=aggregate,
        effect_size_d=effect,
        p_raw=p_two,
        p_adjusted=adjusted[0],
        n_a=len(used),
        n_b=len(used),
        tail="two_sided",
        ci_low=ci_low,
        ci_high=ci_high,
    )
    outcomes = [
        EventOutcome(
            event=ev,
            direction="anticipatory" if pre > post else "reactive",
            detail={"pre": pre, "post": post, "diff": pre - post},
        )
        for ev, pre, post in zip(used, pre_values, post_values)
    ]
    return HypothesisResult(
        analysis="h2",
        alpha=cfg.alpha,
        n_events=len(events),
        n_events_used=len(used),
        skipped=skipped,
        per_event=outcomes,
        aggregate=aggregate,
        aggregate_test=test,
        p_one_sided=p_one,
        direction="anticipatory" if aggregate > 0 else "reactive",
        labels=dict(series.labels),
    )


# ---------------------------------------------------------------------------
# H3: per-event volume vs global non-event baseline
# ---------------------------------------------------------------------------

def run_h3(
    series: DailySeries,
    events: Sequence[KeyEvent],
    k: int = 7,
    cfg: WindowConfig = WindowConfig(),
    plan: RandomPlan = RandomPlan(0),
    workers: int = 1,
) -> HypothesisResult:
    """Per-event mean window volume vs the all-events-excluded baseline mean.

    The event day is included in its window. Each event's two-tailed p is
    the proportion of 1,000 random same-size day samples whose
    sample-vs-rest absolute mean difference reaches the observed one;
    BH-FDR is applied across all events in the run.
    """
    idx = _SeriesIndex(series)
    n_perm = cfg.permutations(1_000)
    length = 2 * k + 1
    if length >= idx.n:
        raise AnalysisError("event window spans the whole series")

    window_mask = np.zeros(idx.n, dtype=bool)
    for day in occupied_days(series, events, k):
        window_mask[idx.index(day)] = True
    baseline_idx = np.flatnonzero(~window_mask)
    if baseline_idx.size == 0:
        raise AnalysisError("event windows cover the entire series")
    baseline_mean = float(idx.vol[baseline_idx].mean())
    total = float(idx.vol.sum())

    usable, skipped = [], []
    for ei, ev in enumerate(events):
        try:
            build_windows(series, ev, k)
        except EventSkipped as skip:
            skipped.append(SkippedEvent(ev.date, skip.reason))
            continue
        usable.append((ei, ev))

    def one_event(item: tuple[int, KeyEvent]) -> EventOutcome:
        ei, ev = item
        event_idx = idx.index(ev.date)
        inside = float(idx.vol[event_idx - k : event_idx + k + 1].mean())
        signed = inside - baseline_mean
        rng = plan.generator("h3", k, ei, "null")
        keys = rng.random((n_perm, idx.n))
        picks = np.argpartition(keys, length, axis=1)[:, :length]
        sums = idx.vol[picks].sum(axis=1)
        null_abs = np.abs(sums / length - (total - sums) / (idx.n - length))
        p_raw = permutation_pvalue(abs(signed), null_abs, "greater")
        percent = 100.0 * signed / baseline_mean if baseline_mean != 0.0 else None
        test = TestResult(
            statistic=signed,
            effect_size_d=None,
            p_raw=p_raw,
            n_a=length,
            n_b=int(baseline_idx.size),
            tail="two_sided",
        )
        return EventOutcome(
            event=ev,
            test=test,
            percent_change=percent,
            direction="increase" if signed > 0 else "decrease" if signed < 0 else "flat",
            detail={"inside_mean": inside, "baseline_mean": baseline_mean},
        )

    outcomes = _parallel_map(one_event, usable, workers)
    adjusted, rejected = benjamini_hochberg([o.test.p_raw for o in outcomes], cfg.alpha)
    for outcome, adj, rej in zip(outcomes, adjusted, rejected):
        outcome.test.p_adjusted = adj
        outcome.significant = rej
        outcome.detail["stars"] = significance_stars(adj)
    return HypothesisResult(
        analysis="h3",
        alpha=cfg.alpha,
        n_events=len(events),
        n_events_used=len(outcomes),
        skipped=skipped,
        per_event=outcomes,
        labels=dict(series.labels),
    )


def significance_stars(p: Optional[float]) -> str:
    """'*': p < 0.05, '**': p < 0.01, '***': p < 0.001 (on adjusted p)."""
    if p is None:
        return ""
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


# ---------------------------------------------------------------------------
# H4: emotion intensity in event windows vs buffered baseline
# ---------------------------------------------------------------------------

def run_h4(
    series: DailySeries,
    events: Sequence[KeyEvent],
    ks: Sequence[int] = DEFAULT_KS,
    cfg: WindowConfig = WindowConfig(),
    plan: RandomPlan = RandomPlan(0),
    workers: int = 1,
) -> HypothesisResult:
    """Daily mean intensity on event-window days vs baseline days.

    Baseline days lie outside every ±k window and outside every
    ±buffer_days (default 14) contamination buffer. Days without intensity
    are dropped from both sides. Mann-Whitney two-sided; Cohen's d with a
    2,000-iteration bootstrap CI on d; BH-FDR across window sizes.
    """
    idx = _SeriesIndex(series)
    if not np.any(~np.isnan(idx.intensity)):
        raise AnalysisError("no intensity data")
    boot = cfg.bootstrap(2_000)

    buffer_mask = np.zeros(idx.n, dtype=bool)
    for day in occupied_days(series, events, cfg.buffer_days):
        buffer_mask[idx.index(day)] = True

    def one_k(k: int) -> tuple[int, KWindowResult]:
        window_mask = np.zeros(idx.n, dtype=bool)
        skipped, used = [], 0
        for ev in events:
            lo = idx.index(ev.date) - k
            hi = idx.index(ev.date) + k
            if hi < 0 or lo > idx.n - 1:
                skipped.append(SkippedEvent(ev.date, "boundary"))
                continue
            window_mask[max(lo, 0) : min(hi, idx.n - 1) + 1] = True
            used += 1
        baseline_mask = ~(window_mask | buffer_mask)
        window_vals = idx.intensity[window_mask]
        window_vals = window_vals[~np.isnan(window_vals)]
        baseline_vals = idx.intensity[baseline_mask]
        baseline_vals = baseline_vals[~np.isnan(baseline_vals)]
        if window_vals.size < 2:
            raise AnalysisError("insufficient intensity data (event-window side)")
        if baseline_vals.size < 2:
            raise AnalysisError("insufficient intensity data (baseline side)")
        mwu = mann_whitney(window_vals, baseline_vals)
        effect = _safe_cohens_d(window_vals, baseline_vals)
        ci_low, ci_high = _bootstrap_d_ci(
            window_vals, baseline_vals, boot, plan.generator("h4", k, "bootstrap_d")
        )
        test = TestResult(
            statistic=mwu.u_statistic,
            effect_size_d=effect,
            p_raw=mwu.p_value,
            n_a=int(window_vals.size),
            n_b=int(baseline_vals.size),
            tail="two_sided",
            ci_low=ci_low,
            ci_high=ci_high,
        )
        return k, KWindowResult(
            k=k,
            test=test,
            percent_change=None,
            n_events_used=used,
            skipped=skipped,
            per_event=[],
            warnings=[f"method: {mwu.method}"],
        )

    by_k = dict(_parallel_map(one_k, list(ks), workers))
    _fdr_across_k(by_k, cfg.alpha)
    top = by_k[max(by_k)]
    return HypothesisResult(
        analysis="h4",
        alpha=cfg.alpha,
        n_events=len(events),
        n_events_used=top.n_events_used,
        skipped=top.skipped,
        by_k=by_k,
        labels=dict(series.labels),
    )


def _bootstrap_d_ci(
    a: np.ndarray, b: np.ndarray, iterations: int, rng: np.random.Generator
) -> tuple[Optional[float], Optional[float]]:
    """Percentile bootstrap of Cohen's d, resampling each group."""
    reps = np.empty(iterations)
    for i in range(iterations):
        ra = a[rng.integers(0, a.size, size=a.size)]
        rb = b[rng.integers(0, b.size, size=b.size)]
        d = _safe_cohens_d(ra, rb)
        reps[i] = 0.0 if d is None else d
    lo, hi = np.percentile(reps, [2.5, 97.5])
    return float(lo), float(hi)


# ---------------------------------------------------------------------------
# H5: per-event pre vs post emotion intensity
# ---------------------------------------------------------------------------

def run_h5(
    series: DailySeries,
    events: Sequence[KeyEvent],
    k: int = 7,
    cfg: WindowConfig = WindowConfig(),
    plan: RandomPlan = RandomPlan(0),
    workers: int = 1,
) -> HypothesisResult:
    """Per-event Mann-Whitney on pre vs post daily mean intensity (day 0
    excluded); BH-FDR across all events in the run. Anticipatory when the
    pre mean exceeds the post mean, otherwise reactive."""
    idx = _SeriesIndex(series)
    if not np.any(~np.isnan(idx.intensity)):
        raise AnalysisError("no intensity data")

    outcomes, skipped = [], []
    for ev in events:
        event_idx = idx.index(ev.date)
        if event_idx - k < 0 or event_idx + k > idx.n - 1:
            skipped.append(SkippedEvent(ev.date, "boundary"))
            continue
        pre = idx.intensity[event_idx - k : event_idx]
        post = idx.intensity[event_idx + 1 : event_idx + k + 1]
        pre = pre[~np.isnan(pre)]
        post = post[~np.isnan(post)]
        if pre.size < 2 or post.size < 2:
            skipped.append(SkippedEvent(ev.date, "insufficient intensity"))
            continue
        mwu = mann_whitney(pre, post)
        test = TestResult(
            statistic=mwu.u_statistic,
            effect_size_d=_safe_cohens_d(pre, post),
            p_raw=mwu.p_value,
            n_a=int(pre.size),
            n_b=int(post.size),
            tail="two_sided",
        )
        outcomes.append(
            EventOutcome(
                event=ev,
                test=test,
                direction="anticipatory" if pre.mean() > post.mean() else "reactive",
                detail={
                    "pre_mean": float(pre.mean()),
                    "post_mean": float(post.mean()),
                    "method": mwu.method,
                },
            )
        )
    if not outcomes:
        raise AnalysisError("all events skipped")
    adjusted, rejected = benjamini_hochberg([o.test.p_raw for o in outcomes], cfg.alpha)
    for outcome, adj, rej in zip(outcomes, adjusted, rejected):
        outcome.test.p_adjusted = adj
        outcome.significant = rej
    return HypothesisResult(
        analysis="h5",
        alpha=cfg.alpha,
        n_events=len(events),
        n_events_used=len(outcomes),
        skipped=skipped,
        per_event=outcomes,
        labels=dict(series.labels),
    )

"""Shared pipeline state and analysis dispatch for the CLI and the service.

An EngineState is an immutable snapshot: the loaded corpus, the configured
movements, and the event list. Layer assignments are computed lazily per
movement and cached; everything downstream is pure, so concurrent analysis
requests can share one snapshot safely.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from . import ENGINE_VERSION
from .config import RunConfig
from .corpus import DocumentStore, MovementSpec
from .errors import ConfigurationError, DataError
from .eventstudy import KeyEvent, WindowConfig, load_events, run_h1, run_h2, run_h3, run_h4, run_h5
from .filtering import (
    LayerAssignment,
    assign_layers,
    cooccurrence_counts,
    high_salience_vocabulary,
    layer_summary,
    select_layer,
)
from .report import chart_payload
from .stats import RandomPlan
from .timeseries import DailySeries, aggregate_daily, high_activity_flags, minmax_normalize

KPE_FIXTURE = Path(__file__).parent / "data" / "key_events_36.json"


@dataclass
class EngineState:
    store: DocumentStore
    events: list[KeyEvent]
    movements: dict[str, MovementSpec]
    _assignments: dict[str, LayerAssignment] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def movement(self, name: str) -> MovementSpec:
        try:
            return self.movements[name]
        except KeyError:
            raise DataError(f"unknown movement {name!r}") from None

    def assignment(self, movement_name: str) -> LayerAssignment:
        with self._lock:
            cached = self._assignments.get(movement_name)
        if cached is not None:
            return cached
        movement = self.movement(movement_name)
        docs = self.store.documents()
        stats = cooccurrence_counts(docs, movement)
        vocab = high_salience_vocabulary(stats)
        assignment = assign_layers(docs, vocab, movement)
        with self._lock:
            self._assignments[movement_name] = assignment
        return assignment

    def date_range(self) -> tuple[date, date]:
        days = [doc.day for doc in self.store]
        if not days:
            raise DataError("corpus is empty")
        return min(days), max(days)

    def dataset_series(
        self, movement_name: str, platform: str, layer: int, mode: str
    ) -> DailySeries:
        """Daily series for one movement x platform x layer selection,
        zero-filled over the full corpus date span."""
        assignment = self.assignment(movement_name)
        selected = select_layer(assignment, layer, mode)
        docs = [
            doc
            for doc in self.store
            if doc.id in selected and (platform == "all" or doc.platform == platform)
        ]
        start, end = self.date_range()
        labels = {
            "movement": movement_name,
            "platform": platform,
            "layer": str(layer),
            "mode": mode,
        }
        return aggregate_daily(docs, start, end, labels)

    def dataset_summaries(self) -> list[dict]:
        out = []
        for name in sorted(self.movements):
            assignment = self.assignment(name)
            summary = layer_summary(assignment, self.store.documents())
            platforms = sorted(summary.get("exclusive_by_platform", {}))
            for platform in platforms:
                out.append(
                    {
                        "movement": name,
                        "platform": platform,
                        "exclusive": summary["exclusive_by_platform"][platform],
                        "cumulative": summary["cumulative_by_platform"][platform],
                        "documents": summary["cumulative_by_platform"][platform][-1],
                    }
                )
        return out


def load_state(config: RunConfig) -> EngineState:
    if config.corpus is None:
        raise ConfigurationError("no corpus path configured")
    if not Path(config.corpus).exists():
        raise DataError(f"corpus file not found: {config.corpus}")
    store = DocumentStore(config.corpus)
    if len(store) == 0:
        raise DataError("corpus is empty")
    events_path = config.events if config.events is not None else KPE_FIXTURE
    events = load_events(events_path)
    movements = {m.name: m for m in config.all_movements()}
    if not movements:
        raise ConfigurationError("no movement configured")
    return EngineState(store=store, events=events, movements=movements)


def projected_permutation_work(analysis: str, config: RunConfig, n_events: int) -> int:
    defaults = {"h1": 10_000, "h2": 10_000, "h3": 1_000, "h4": 0, "h5": 0}
    perms = config.permutations if config.permutations is not None else defaults[analysis]
    n_k = len(config.ks) if analysis in ("h1", "h4") else 1
    return perms * max(n_events, 1) * n_k


def run_analysis(state: EngineState, analysis: str, config: RunConfig) -> dict:
    """Run one hypothesis analysis and assemble the response payload.

    The payload is shared verbatim by the CLI (written to disk) and the
    service (HTTP response body); both serialize it with stable_json, so
    identical configurations produce byte-identical output.
    """
    if analysis not in ("h1", "h2", "h3", "h4", "h5"):
        raise ConfigurationError(f"unknown analysis {analysis!r}")
    config = config.validate()
    if config.movement is None:
        raise ConfigurationError("analysis requires a movement")
    series = state.dataset_series(
        config.movement.name, config.platform, config.layer, config.mode
    )
    plan = RandomPlan(config.seed)
    wcfg = WindowConfig(
        alpha=config.alpha,
        n_permutations=config.permutations,
        bootstrap_iters=config.bootstrap_iters,
    )
    if analysis == "h1":
        result = run_h1(series, state.events, ks=config.ks, cfg=wcfg, plan=plan,
                        workers=config.workers)
    elif analysis == "h2":
        result = run_h2(series, state.events, k=config.single_k("h2"), cfg=wcfg,
                        plan=plan, workers=config.workers)
    elif analysis == "h3":
        result = run_h3(series, state.events, k=config.single_k("h3"), cfg=wcfg,
                        plan=plan, workers=config.workers)
    elif analysis == "h4":
        result = run_h4(series, state.events, ks=config.ks, cfg=wcfg, plan=plan,
                        workers=config.workers)
    else:
        result = run_h5(series, state.events, k=config.single_k("h5"), cfg=wcfg,
                        plan=plan, workers=config.workers)
    return {
        "engine_version": ENGINE_VERSION,
        "seed": config.seed,
        "analysis": analysis,
        "config": config.effective_dict(analysis),
        "result": result.to_dict(),
        "chart": chart_payload(result),
    }


def series_payload(series: DailySeries) -> dict:
    """Series + display extras for the /series endpoint and CLI export."""
    payload = series.to_dict()
    if len(series) >= 2:
        threshold, flags = high_activity_flags(series)
    else:
        threshold, flags = None, [False] * len(series)
    payload["dates"] = [d.isoformat() for d in series.dates()]
    payload["normalized_volume"] = minmax_normalize(series).volume
    payload["threshold"] = threshold
    payload["flags"] = flags
    payload["engine_version"] = ENGINE_VERSION
    return payload

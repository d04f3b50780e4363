"""Seeded synthetic fixtures: null series, planted effects, toy corpora.

The series generator draws i.i.d. Poisson daily volumes and Gaussian daily
mean intensities, with optional multiplicative volume and additive intensity
effects planted inside the ±k windows of its randomly placed events. The
corpus generator writes a full canonical JSONL corpus (documents with seed
mentions, keyword sets, and emotion vectors) plus an events file, sized for
desk-scale end-to-end runs.
"""

from __future__ import annotations

import json
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path

import numpy as np

from .corpus import EMOTION_CATEGORIES, MovementSpec
from .eventstudy import EVENT_CATEGORIES, KeyEvent
from .timeseries import DailySeries

CORE_TERMS = (
    "harassment", "assault", "survivor", "accountability", "allegations",
    "consent", "victims", "testimony", "abuse", "misconduct", "justice",
    "workplace",
)

_BODY_SNIPPETS = (
    "Advocates renewed calls for institutional reform after new reports surfaced.",
    "The panel heard testimony from organizers and researchers this week.",
    "Coverage focused on accountability measures proposed by lawmakers.",
    "Community members organized support networks across several cities.",
    "Analysts noted a shift in how outlets frame the movement's demands.",
    "The discussion thread collected firsthand accounts and resources.",
)


def _draw_event_dates(
    rng: np.random.Generator, start: date, n_days: int, n_events: int, margin: int
) -> list[date]:
    lo, hi = margin, n_days - 1 - margin
    if hi < lo:
        raise ValueError("series too short for the requested event margin")
    offsets = rng.choice(np.arange(lo, hi + 1), size=n_events, replace=False)
    return sorted(start + timedelta(days=int(o)) for o in offsets)


def make_events(
    rng: np.random.Generator,
    start: date,
    n_days: int,
    n_events: int = 6,
    margin: int = 21,
) -> list[KeyEvent]:
    dates = _draw_event_dates(rng, start, n_days, n_events, margin)
    return [
        KeyEvent(
            date=d,
            description=f"synthetic event {i + 1}",
            category=EVENT_CATEGORIES[i % len(EVENT_CATEGORIES)],
        )
        for i, d in enumerate(dates)
    ]


def make_series(
    seed: int,
    n_days: int = 365,
    lam: float = 20.0,
    n_events: int = 6,
    start: date = date(2024, 9, 1),
    volume_factor: float = 1.0,
    intensity_shift: float = 0.0,
    k: int = 7,
    base_intensity: float = 2.0,
    intensity_sd: float = 0.15,
    margin: int = 21,
    labels: dict | None = None,
) -> tuple[DailySeries, list[KeyEvent]]:
    """One seeded daily series plus its events.

    volume_factor / intensity_shift apply on days inside any event's ±k
    window; the defaults (1.0 / 0.0) give the pure null generator.
    """
    rng = np.random.default_rng(seed)
    events = make_events(rng, start, n_days, n_events, margin)
    in_window = np.zeros(n_days, dtype=bool)
    for ev in events:
        center = (ev.date - start).days
        in_window[max(0, center - k) : min(n_days, center + k + 1)] = True
    rates = np.where(in_window, lam * volume_factor, lam)
    volume = rng.poisson(rates).astype(float)
    means = np.where(in_window, base_intensity + intensity_shift, base_intensity)
    intensity = np.clip(rng.normal(means, intensity_sd), 0.0, 27.0)
    return (
        DailySeries(
            start_date=start,
            end_date=start + timedelta(days=n_days - 1),
            volume=[float(v) for v in volume],
            intensity=[float(v) for v in intensity],
            labels=dict(labels or {"source": "synthetic", "seed": seed}),
        ),
        events,
    )


def _emotion_vector(rng: np.random.Generator) -> dict[str, float]:
    probs = {name: float(rng.uniform(0.0, 0.05)) for name in EMOTION_CATEGORIES}
    probs["neutral"] = float(rng.uniform(0.2, 0.6))
    for name in rng.choice(
        [c for c in EMOTION_CATEGORIES if c != "neutral"], size=3, replace=False
    ):
        probs[str(name)] = float(rng.uniform(0.2, 0.6))
    return probs


def make_corpus_files(
    out_dir: str | Path,
    seed: int = 0,
    n_docs: int = 5000,
    n_days: int = 365,
    start: date = date(2024, 9, 1),
    n_events: int = 6,
    volume_factor: float = 1.5,
    k: int = 7,
    noise_terms: int = 600,
) -> tuple[MovementSpec, list[KeyEvent], Path, Path]:
    """Write a synthetic canonical corpus and events file.

    Returns (movement, events, corpus_path, events_path). Roughly a third of
    documents mention the movement seed explicitly; the rest carry keyword
    sets with varying coverage of the core terms so the layer filter spreads
    them over L1..L8. Document days are drawn with extra mass inside event
    windows when volume_factor > 1.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    movement = MovementSpec.of("metoo", ["#metoo", "me too movement"])
    events = make_events(rng, start, n_days, n_events)

    in_window = np.zeros(n_days, dtype=bool)
    for ev in events:
        center = (ev.date - start).days
        in_window[max(0, center - k) : min(n_days, center + k + 1)] = True
    weights = np.where(in_window, volume_factor, 1.0)
    weights = weights / weights.sum()
    noise_pool = [f"noise{i:03d}" for i in range(noise_terms)]

    corpus_path = out_dir / "corpus.jsonl"
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for i in range(n_docs):
            day = start + timedelta(days=int(rng.choice(n_days, p=weights)))
            stamp = datetime.combine(
                day, time(int(rng.integers(0, 24)), int(rng.integers(0, 60))), timezone.utc
            )
            platform = "reddit" if rng.random() < 0.5 else "news"
            explicit = rng.random() < 0.35
            core_mask = rng.random(len(CORE_TERMS)) < (0.5 if explicit else rng.random())
            keywords = [t for t, hit in zip(CORE_TERMS, core_mask) if hit]
            keywords += [str(t) for t in rng.choice(noise_pool, size=2, replace=False)]
            title = (
                f"#MeToo update {i}" if explicit else f"Movement coverage item {i}"
            )
            body = str(rng.choice(_BODY_SNIPPETS)) + " " + " ".join(keywords[:3])
            record = {
                "id": f"doc-{i:05d}",
                "platform": platform,
                "published_at": stamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "title": title,
                "body": body,
                "keywords": sorted(set(keywords)),
                "emotions": _emotion_vector(rng),
                "url": f"https://example.org/{platform}/{i}",
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    events_path = out_dir / "events.json"
    events_path.write_text(
        json.dumps([ev.to_dict() for ev in events], indent=2) + "\n", encoding="utf-8"
    )
    return movement, events, corpus_path, events_path

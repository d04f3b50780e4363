"""Daily aggregation of a document set into volume and intensity series.

Days are UTC calendar dates. Volume is a zero-filled count per day;
intensity is the mean per-document emotion intensity over that day's
emotion-bearing documents (None on days without any). Min-max normalization
exists for display only; analyses always consume raw counts.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Iterable, Optional

import numpy as np

from .corpus import Document, emotion_intensity
from .errors import DataError


@dataclass
class DailySeries:
    start_date: date
    end_date: date
    volume: list[float]
    intensity: list[Optional[float]]
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        span = (self.end_date - self.start_date).days + 1
        if span < 1:
            raise DataError("inverted or empty date range")
        if len(self.volume) != span or len(self.intensity) != span:
            raise DataError("series arrays must cover the full day span")

    def __len__(self) -> int:
        return len(self.volume)

    def dates(self) -> list[date]:
        return [self.start_date + timedelta(days=i) for i in range(len(self))]

    def index_of(self, day: date) -> int:
        offset = (day - self.start_date).days
        if not 0 <= offset < len(self):
            raise ValueError(f"{day} outside series range")
        return offset

    def to_dict(self) -> dict:
        return {
            "start_date": self.start_date.isoformat(),
            "end_date": self.end_date.isoformat(),
            "volume": list(self.volume),
            "intensity": list(self.intensity),
            "labels": dict(self.labels),
        }


def aggregate_daily(
    docs: Iterable[Document],
    start: date,
    end: date,
    labels: dict | None = None,
) -> DailySeries:
    """Bucket documents into UTC days over [start, end], inclusive.

    Documents outside the range are ignored. intensity[d] is the mean
    emotion intensity of day d's emotion-bearing documents, None if none.
    """
    if end < start:
        raise DataError("inverted date range")
    span = (end - start).days + 1
    volume = [0.0] * span
    sums = [0.0] * span
    counts = [0] * span
    for doc in docs:
        offset = (doc.day - start).days
        if not 0 <= offset < span:
            continue
        volume[offset] += 1
        if doc.emotions is not None:
            sums[offset] += emotion_intensity(doc.emotions)
            counts[offset] += 1
    intensity: list[Optional[float]] = [
        (sums[i] / counts[i]) if counts[i] else None for i in range(span)
    ]
    return DailySeries(
        start_date=start,
        end_date=end,
        volume=volume,
        intensity=intensity,
        labels=dict(labels or {}),
    )


def minmax_normalize(series: DailySeries) -> DailySeries:
    """Volume rescaled to [0, 1]; a constant series maps to all zeros."""
    if not series.volume:
        raise DataError("empty series")
    vol = np.asarray(series.volume, dtype=float)
    lo, hi = float(vol.min()), float(vol.max())
    if hi == lo:
        scaled = np.zeros_like(vol)
    else:
        scaled = (vol - lo) / (hi - lo)
    return DailySeries(
        start_date=series.start_date,
        end_date=series.end_date,
        volume=[float(v) for v in scaled],
        intensity=list(series.intensity),
        labels=dict(series.labels),
    )


def high_activity_flags(series: DailySeries) -> tuple[float, list[bool]]:
    """Mean + 2 sample standard deviations threshold; strict exceedance."""
    if len(series) < 2:
        raise DataError("high-activity threshold needs at least 2 days")
    vol = np.asarray(series.volume, dtype=float)
    threshold = float(vol.mean() + 2.0 * vol.std(ddof=1))
    flags = [bool(v > threshold) for v in vol]
    return threshold, flags


def series_to_csv(series: DailySeries) -> str:
    """CSV export: date, volume, intensity, flag (blank intensity = no data)."""
    if len(series) >= 2:
        _, flags = high_activity_flags(series)
    else:
        flags = [False] * len(series)
    buf = io.StringIO()
    buf.write("date,volume,intensity,flag\n")
    for day, vol, inten, flag in zip(series.dates(), series.volume, series.intensity, flags):
        inten_txt = "" if inten is None else repr(float(inten))
        buf.write(f"{day.isoformat()},{vol:g},{inten_txt},{str(flag).lower()}\n")
    return buf.getvalue()

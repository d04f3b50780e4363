"""Document model, file-based ingest, and per-document emotion intensity.

The canonical corpus format is line-delimited JSON, one document per line
(see ``docs/formats.md``). Emotion vectors are ingested, never inferred:
documents lacking them are accepted but excluded from intensity analyses.
"""

from __future__ import annotations

import json
import re
import threading
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .errors import ConfigurationError, DataError

# The 27 emotion categories of the GoEmotions taxonomy plus "neutral".
EMOTION_CATEGORIES = (
    "admiration", "amusement", "anger", "annoyance", "approval", "caring",
    "confusion", "curiosity", "desire", "disappointment", "disapproval",
    "disgust", "embarrassment", "excitement", "fear", "gratitude", "grief",
    "joy", "love", "nervousness", "optimism", "pride", "realization",
    "relief", "remorse", "sadness", "surprise", "neutral",
)
_CATEGORY_SET = frozenset(EMOTION_CATEGORIES)

PLATFORMS = ("news", "reddit")

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercased maximal alphanumeric runs, in order of appearance."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class EmotionVector:
    """28 category probabilities; multi-label, so they need not sum to 1."""

    probabilities: dict[str, float]

    def __post_init__(self):
        missing = _CATEGORY_SET - self.probabilities.keys()
        if missing:
            raise ValueError(f"missing emotion categories: {sorted(missing)}")
        unknown = self.probabilities.keys() - _CATEGORY_SET
        if unknown:
            raise ValueError(f"unknown emotion categories: {sorted(unknown)}")
        for name, p in self.probabilities.items():
            if not isinstance(p, (int, float)) or not 0.0 <= float(p) <= 1.0:
                raise ValueError(f"probability for {name!r} outside [0, 1]: {p}")


def emotion_intensity(vec: EmotionVector) -> float:
    """Sum of the 27 non-neutral probabilities, in [0, 27]."""
    return float(
        sum(v for k, v in vec.probabilities.items() if k != "neutral")
    )


@dataclass(frozen=True)
class Document:
    id: str
    platform: str
    published_at: datetime  # always UTC
    title: str = ""
    body: str = ""
    keywords: frozenset[str] = frozenset()
    emotions: Optional[EmotionVector] = None
    url: Optional[str] = None

    @property
    def day(self):
        return self.published_at.date()

    def text(self) -> str:
        return f"{self.title} {self.body}"

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "platform": self.platform,
            "published_at": self.published_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "title": self.title,
            "body": self.body,
            "keywords": sorted(self.keywords),
            "emotions": dict(sorted(self.emotions.probabilities.items()))
            if self.emotions
            else None,
            "url": self.url,
        }


@dataclass(frozen=True)
class MovementSpec:
    """A tracked discourse topic defined by lowercase seed keywords."""

    name: str
    seed_keywords: tuple[str, ...]

    def __post_init__(self):
        if not self.seed_keywords:
            raise ValueError("movement needs at least one seed keyword")
        for kw in self.seed_keywords:
            if kw != kw.lower():
                raise ValueError(f"seed keyword must be lowercase: {kw!r}")

    @classmethod
    def of(cls, name: str, seed_keywords: Iterable[str]) -> "MovementSpec":
        return cls(name=name, seed_keywords=tuple(seed_keywords))


@dataclass
class IngestReport:
    accepted: int = 0
    rejected: int = 0
    duplicate_ids: int = 0
    rejection_reasons: list[tuple[int, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected": self.rejected,
            "duplicate_ids": self.duplicate_ids,
            "rejection_reasons": [
                {"record": i, "reason": r} for i, r in self.rejection_reasons
            ],
        }


def _parse_timestamp(raw) -> datetime:
    if isinstance(raw, (int, float)):
        return datetime.fromtimestamp(float(raw), tz=timezone.utc)
    if not isinstance(raw, str):
        raise ValueError("invalid timestamp")
    text = raw.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ValueError("invalid timestamp") from exc
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _normalize_keywords(raw) -> frozenset[str]:
    if raw is None:
        return frozenset()
    if not isinstance(raw, (list, tuple, set, frozenset)):
        raise ValueError("keywords must be a list of strings")
    out = set()
    for kw in raw:
        if not isinstance(kw, str):
            raise ValueError("keywords must be strings")
        kw = kw.strip().lower()
        if kw:
            out.add(kw)
    return frozenset(out)


def _document_from_canonical(record: dict) -> Document:
    doc_id = record.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise ValueError("missing id")
    platform = record.get("platform")
    if platform not in PLATFORMS:
        raise ValueError(f"unknown platform {platform!r}")
    if "published_at" not in record or record.get("published_at") in (None, ""):
        raise ValueError("missing timestamp")
    published = _parse_timestamp(record["published_at"])
    emotions_raw = record.get("emotions")
    emotions = None
    if emotions_raw is not None:
        if not isinstance(emotions_raw, dict):
            raise ValueError("emotions must be an object or null")
        emotions = EmotionVector(
            {k: float(v) for k, v in emotions_raw.items()}
        )
    return Document(
        id=doc_id,
        platform=platform,
        published_at=published,
        title=str(record.get("title") or ""),
        body=str(record.get("body") or ""),
        keywords=_normalize_keywords(record.get("keywords")),
        emotions=emotions,
        url=record.get("url") or None,
    )


def _adapt_reddit(record: dict) -> dict:
    return {
        "id": record.get("name") or record.get("id"),
        "platform": "reddit",
        "published_at": record.get("created_utc"),
        "title": record.get("title"),
        "body": record.get("selftext"),
        "keywords": record.get("keywords"),
        "emotions": record.get("emotions"),
        "url": record.get("url"),
    }


def _adapt_news(record: dict) -> dict:
    return {
        "id": record.get("article_id") or record.get("id"),
        "platform": "news",
        "published_at": record.get("publish_date"),
        "title": record.get("headline") or record.get("title"),
        "body": record.get("text") or record.get("body"),
        "keywords": record.get("keywords"),
        "emotions": record.get("emotions"),
        "url": record.get("source_url") or record.get("url"),
    }


ADAPTERS = {
    "canonical": lambda record: record,
    "reddit_export": _adapt_reddit,
    "news_export": _adapt_news,
}


class DocumentStore:
    """Append-only file store plus an in-memory index.

    Writes are serialized through a lock (single-writer); reads are pure and
    safe to share across concurrent analysis tasks.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._docs: dict[str, Document] = {}
        self._order: list[str] = []
        self._write_lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._load_existing()

    def _load_existing(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                doc = _document_from_canonical(json.loads(line))
                if doc.id not in self._docs:
                    self._docs[doc.id] = doc
                    self._order.append(doc.id)

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self) -> Iterator[Document]:
        return (self._docs[i] for i in self._order)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._docs

    def get(self, doc_id: str) -> Optional[Document]:
        return self._docs.get(doc_id)

    def documents(self) -> list[Document]:
        return [self._docs[i] for i in self._order]

    def add(self, doc: Document) -> bool:
        """Insert one document; returns False on duplicate id (first wins)."""
        with self._write_lock:
            if doc.id in self._docs:
                return False
            self._docs[doc.id] = doc
            self._order.append(doc.id)
            if self.path is not None:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(doc.to_record(), sort_keys=True) + "\n")
            return True

    def ingest_file(self, path: str | Path, adapter: str = "canonical") -> IngestReport:
        """Ingest a line-delimited JSON export.

        Invalid or duplicate-id records are rejected per record with a
        reason; a malformed line never aborts the whole file.
        """
        if adapter not in ADAPTERS:
            raise ConfigurationError(f"unknown adapter {adapter!r}")
        adapt = ADAPTERS[adapter]
        path = Path(path)
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read corpus file {path}: {exc}") from exc
        report = IngestReport()
        with fh:
            for index, line in enumerate(fh):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    if not isinstance(record, dict):
                        raise ValueError("record is not a JSON object")
                    doc = _document_from_canonical(adapt(record))
                except ValueError as exc:
                    report.rejected += 1
                    report.rejection_reasons.append((index, str(exc)))
                    continue
                if self.add(doc):
                    report.accepted += 1
                else:
                    report.rejected += 1
                    report.duplicate_ids += 1
                    report.rejection_reasons.append((index, f"duplicate id {doc.id!r}"))
        return report


def ingest_documents(
    store: DocumentStore, path: str | Path, adapter: str = "canonical"
) -> IngestReport:
    return store.ingest_file(path, adapter)


def fallback_keywords(doc: Document, k: int, stopwords: Iterable[str] = ()) -> set[str]:
    """Top-k tokens of title+body by frequency; a stand-in when the upstream
    extractor supplied none.

    Ties break by frequency descending then lexicographically ascending;
    fewer than k distinct tokens returns them all.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    stop = {s.lower() for s in stopwords}
    counts = Counter(t for t in tokenize(doc.text()) if t not in stop)
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return {token for token, _ in ranked[:k]}

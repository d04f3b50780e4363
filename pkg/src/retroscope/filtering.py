"""Multi-layer movement filtering.

Layer L0 holds documents that explicitly mention a movement seed keyword
(case-insensitive, word-boundary substring in title or body). Keywords that
co-occur with the movement inside L0 form a frequency distribution; terms at
the configured percentile (default 99th, nearest-rank) become the
high-salience vocabulary. Every other document is assigned to layers L1-L8
by the proportion of that vocabulary it covers: 40%, 35%, 30%, 25%, 20%,
15%, 10%, 5%. Coverage below 5% leaves a document unassigned.

A vocabulary term "appears" in a document if it is in the document's keyword
set or occurs as a (possibly multi-token) token sequence of the lowercased
title+body; the hybrid rule keeps filtering robust to sparse upstream
keyword extraction. Layer-boundary comparisons are pure integer arithmetic,
so exact threshold coverage (e.g. 4 of 10 terms at 40%) is never lost to
rounding.
"""

from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Document, MovementSpec, tokenize
from .errors import DataError

# L1..L8 coverage thresholds, in percent (strictly decreasing).
LAYER_THRESHOLD_PERCENTS = (40, 35, 30, 25, 20, 15, 10, 5)
LAYER_THRESHOLDS = tuple(p / 100.0 for p in LAYER_THRESHOLD_PERCENTS)

N_LAYERS = 9  # L0 plus L1..L8


def _seed_pattern(seed: str) -> re.Pattern:
    # Word-boundary semantics robust to non-word seed characters like "#":
    # the match may not be flanked by alphanumerics, so "#metoo" matches
    # "#MeToo" but "metoo" never matches inside "metoograph".
    return re.compile(
        r"(?<![a-z0-9])" + re.escape(seed) + r"(?![a-z0-9])",
        re.IGNORECASE,
    )


class SeedMatcher:
    """Compiled explicit-mention test for one movement."""

    def __init__(self, movement: MovementSpec):
        self.movement = movement
        self._patterns = [_seed_pattern(s) for s in movement.seed_keywords]

    def matches(self, doc: Document) -> bool:
        text = doc.text()
        return any(p.search(text) for p in self._patterns)


@dataclass(frozen=True)
class CooccurrenceStats:
    """Per-term count of L0 documents whose keyword set contains the term."""

    counts: dict[str, int]
    l0_size: int


@dataclass(frozen=True)
class HighSalienceVocabulary:
    terms: frozenset[str]
    percentile_threshold: int


@dataclass(frozen=True)
class LayerAssignment:
    """Document id -> layer index in 0..8; unassigned documents are absent."""

    layer_of: dict[str, int]
    thresholds: tuple[float, ...] = LAYER_THRESHOLDS

    def ids_at(self, layer: int) -> set[str]:
        return {doc_id for doc_id, lyr in self.layer_of.items() if lyr == layer}


def cooccurrence_counts(
    corpus: Iterable[Document], movement: MovementSpec
) -> CooccurrenceStats:
    """Count, per keyword, the L0 documents carrying it (seeds excluded)."""
    matcher = SeedMatcher(movement)
    seeds = set(movement.seed_keywords)
    counts: dict[str, int] = {}
    l0_size = 0
    for doc in corpus:
        if not matcher.matches(doc):
            continue
        l0_size += 1
        for term in doc.keywords - seeds:
            counts[term] = counts.get(term, 0) + 1
    if l0_size == 0:
        raise DataError("movement has no explicit-mention documents")
    return CooccurrenceStats(counts=counts, l0_size=l0_size)


def high_salience_vocabulary(
    stats: CooccurrenceStats, percentile: float = 99.0
) -> HighSalienceVocabulary:
    """Terms at or above the nearest-rank percentile of co-occurrence counts.

    rank = ceil(percentile/100 * number of distinct terms); the threshold is
    the rank-th smallest count and every term with count >= threshold is in.
    """
    if not stats.counts:
        raise DataError("no co-occurring terms: vocabulary undefined")
    if not 0.0 < percentile <= 100.0:
        raise ValueError("percentile must be in (0, 100]")
    ordered = sorted(stats.counts.values())
    rank = math.ceil(percentile / 100.0 * len(ordered))
    threshold = ordered[rank - 1]
    terms = frozenset(t for t, c in stats.counts.items() if c >= threshold)
    return HighSalienceVocabulary(terms=terms, percentile_threshold=threshold)


def _term_appears(term: str, keywords: frozenset[str], token_text: str) -> bool:
    if term in keywords:
        return True
    term_tokens = " ".join(tokenize(term))
    if not term_tokens:
        return False
    return f" {term_tokens} " in token_text


def vocabulary_coverage(doc: Document, vocab: HighSalienceVocabulary) -> float:
    """Fraction of vocabulary terms appearing in the document."""
    token_text = " " + " ".join(tokenize(doc.text())) + " "
    covered = sum(
        1 for term in vocab.terms if _term_appears(term, doc.keywords, token_text)
    )
    return covered / len(vocab.terms)


def assign_layers(
    corpus: Iterable[Document],
    vocab: HighSalienceVocabulary,
    movement: MovementSpec,
) -> LayerAssignment:
    if not vocab.terms:
        raise DataError("empty vocabulary")
    matcher = SeedMatcher(movement)
    vocab_size = len(vocab.terms)
    layer_of: dict[str, int] = {}
    for doc in corpus:
        if matcher.matches(doc):
            layer_of[doc.id] = 0
            continue
        token_text = " " + " ".join(tokenize(doc.text())) + " "
        covered = sum(
            1 for term in vocab.terms if _term_appears(term, doc.keywords, token_text)
        )
        for j, pct in enumerate(LAYER_THRESHOLD_PERCENTS, start=1):
            if 100 * covered >= pct * vocab_size:
                layer_of[doc.id] = j
                break
    return LayerAssignment(layer_of=layer_of)


def select_layer(
    assignment: LayerAssignment, k: int, mode: str = "cumulative"
) -> set[str]:
    """Document ids of layer k: union of L0..Lk (cumulative) or exactly Lk."""
    if not 0 <= k <= 8:
        raise ValueError(f"layer index {k} out of range 0..8")
    if mode == "cumulative":
        return {d for d, lyr in assignment.layer_of.items() if lyr <= k}
    if mode == "exclusive":
        return assignment.ids_at(k)
    raise ValueError(f"unknown selection mode {mode!r}")


def exclusive_counts(assignment: LayerAssignment) -> list[int]:
    counts = [0] * N_LAYERS
    for lyr in assignment.layer_of.values():
        counts[lyr] += 1
    return counts


def assignment_to_csv(assignment: LayerAssignment) -> str:
    """CSV export: document_id, layer (assigned documents only)."""
    buf = io.StringIO()
    buf.write("document_id,layer\n")
    for doc_id in sorted(assignment.layer_of):
        buf.write(f"{doc_id},{assignment.layer_of[doc_id]}\n")
    return buf.getvalue()


def layer_summary(
    assignment: LayerAssignment, documents: Sequence[Document] | None = None
) -> dict:
    """Per-layer exclusive counts and cumulative totals, optionally split by
    platform (the shape used by dataset listings and summary tables)."""
    exclusive = exclusive_counts(assignment)
    cumulative = []
    running = 0
    for c in exclusive:
        running += c
        cumulative.append(running)
    summary = {
        "exclusive": exclusive,
        "cumulative": cumulative,
        "assigned_total": running,
    }
    if documents is not None:
        by_platform: dict[str, list[int]] = {}
        for doc in documents:
            lyr = assignment.layer_of.get(doc.id)
            if lyr is None:
                continue
            by_platform.setdefault(doc.platform, [0] * N_LAYERS)[lyr] += 1
        summary["exclusive_by_platform"] = by_platform
        summary["cumulative_by_platform"] = {
            platform: [sum(counts[: i + 1]) for i in range(N_LAYERS)]
            for platform, counts in by_platform.items()
        }
    return summary

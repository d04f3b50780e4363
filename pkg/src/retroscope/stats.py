"""Self-contained statistical kernel.

Five primitives used by every analysis: permutation p-values, Mann-Whitney U
(exact enumeration or tie-corrected normal approximation), Cohen's d,
percentile bootstrap confidence intervals, and Benjamini-Hochberg FDR.
Each is testable against a brute-force oracle; none depends on the analyses
that call it.

Randomness contract: every randomized operation takes a ``numpy.random.Generator``
obtained from :class:`RandomPlan`, which derives independent, reproducible
substreams (PCG64) from a 64-bit master seed and a label tuple. Identical
(seed, label) pairs always produce identical streams, so results never depend
on scheduling or parallelism.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "DegenerateVarianceError",
    "MannWhitneyResult",
    "RandomPlan",
    "TestResult",
    "benjamini_hochberg",
    "bootstrap_ci",
    "cohens_d",
    "mann_whitney",
    "permutation_pvalue",
]

# Largest n_a * n_b for which the exact Mann-Whitney null distribution is
# computed; beyond it the tie-corrected normal approximation is used.
EXACT_MWU_LIMIT = 400

TAILS = ("two_sided", "greater", "less")


class DegenerateVarianceError(ValueError):
    """Pooled standard deviation is zero but the means differ."""


@dataclass(frozen=True)
class RandomPlan:
    """Deterministic substream factory for all randomized operations.

    A substream is identified by a label tuple such as
    ``("h1", 7, 3, "control")``. Labels are hashed (SHA-256) into seed
    material combined with the master seed, so streams for distinct labels
    are independent and any single stream is bitwise reproducible.
    """

    master_seed: int

    def generator(self, *label) -> np.random.Generator:
        entropy = [self.master_seed & 0xFFFFFFFFFFFFFFFF]
        for part in label:
            digest = hashlib.sha256(repr(part).encode("utf-8")).digest()
            entropy.append(int.from_bytes(digest[:8], "big"))
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


@dataclass
class TestResult:
    """One hypothesis test: statistic, effect size, p-values, CI, sizes."""

    __test__ = False  # not a pytest class despite the name

    statistic: float
    effect_size_d: Optional[float]
    p_raw: float
    n_a: int
    n_b: int
    tail: str = "two_sided"
    p_adjusted: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None

    def __post_init__(self):
        if self.tail not in TAILS:
            raise ValueError(f"unknown tail {self.tail!r}")
        if not 0.0 <= self.p_raw <= 1.0:
            raise ValueError(f"p_raw {self.p_raw} outside [0, 1]")
        if self.ci_low is not None and self.ci_high is not None:
            if self.ci_low > self.ci_high:
                raise ValueError("ci_low > ci_high")

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "effect_size_d": self.effect_size_d,
            "p_raw": self.p_raw,
            "p_adjusted": self.p_adjusted,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "n_a": self.n_a,
            "n_b": self.n_b,
            "tail": self.tail,
        }


def permutation_pvalue(
    observed: float,
    null_stats: Sequence[float],
    tail: str = "two_sided",
    smoothed: bool = False,
) -> float:
    """Raw-proportion permutation p-value: ties count as exceedances.

    ``smoothed=True`` applies the (b+1)/(N+1) estimator instead; the raw
    proportion (which can be exactly 0) is the default.
    """
    if tail not in TAILS:
        raise ValueError(f"unknown tail {tail!r}")
    null = np.asarray(null_stats, dtype=float)
    if null.size == 0:
        raise ValueError("null_stats is empty")
    if tail == "two_sided":
        count = int(np.sum(np.abs(null) >= abs(observed)))
    elif tail == "greater":
        count = int(np.sum(null >= observed))
    else:
        count = int(np.sum(null <= observed))
    if smoothed:
        return (count + 1) / (null.size + 1)
    return count / null.size


def _average_ranks(pooled: np.ndarray) -> np.ndarray:
    """Fractional ranks (1-based); tied values share the mean rank."""
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(pooled.size, dtype=float)
    sorted_vals = pooled[order]
    i = 0
    while i < pooled.size:
        j = i
        while j + 1 < pooled.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


@dataclass(frozen=True)
class MannWhitneyResult:
    u_statistic: float
    p_value: float
    method: str  # "exact" or "normal_approx"


def _exact_mwu_pvalue(doubled_ranks: np.ndarray, n_a: int, u2_obs: int) -> float:
    """Exact two-sided p over all C(n, n_a) labelings.

    Dynamic program over doubled fractional ranks (integers even with ties):
    ``counts[c, s]`` = number of size-c subsets with doubled rank sum s. The
    resulting subset-sum distribution is exactly the full-enumeration U
    distribution, so ties are handled natively. Two-sided extremeness is
    |2U - n_a*n_b| >= |2U_obs - n_a*n_b| (U's permutation mean is n_a*n_b/2).
    Subset counts stay below 2**53 for every n_a*n_b <= 400, so float64
    arithmetic is exact.
    """
    n = doubled_ranks.size
    n_b = n - n_a
    total = int(doubled_ranks.sum())
    counts = np.zeros((n_a + 1, total + 1))
    counts[0, 0] = 1.0
    for r in doubled_ranks:
        r = int(r)  # doubled ranks are >= 2
        for c in range(n_a - 1, -1, -1):
            counts[c + 1, r:] += counts[c, :-r]
    dist = counts[n_a]
    sums = np.nonzero(dist)[0]
    u2 = sums - n_a * (n_a + 1)  # 2U for each achievable doubled rank sum
    dev_obs = abs(u2_obs - n_a * n_b)
    extreme = np.abs(u2 - n_a * n_b) >= dev_obs
    hits = float(dist[sums][extreme].sum())
    total_labelings = float(dist[sums].sum())
    return hits / total_labelings


def mann_whitney(a: Sequence[float], b: Sequence[float]) -> MannWhitneyResult:
    """Mann-Whitney U (two-sided) with average ranks for ties.

    Exact p by full enumeration of label assignments when n_a*n_b <= 400
    (ties handled natively); otherwise normal approximation with tie and
    continuity corrections. Returns U for the first sample.
    """
    xa = np.asarray(a, dtype=float)
    xb = np.asarray(b, dtype=float)
    if xa.size == 0 or xb.size == 0:
        raise ValueError("both samples must be non-empty")
    n_a, n_b = xa.size, xb.size
    pooled = np.concatenate([xa, xb])
    ranks = _average_ranks(pooled)
    r_a = float(ranks[:n_a].sum())
    u_a = r_a - n_a * (n_a + 1) / 2.0

    if n_a * n_b <= EXACT_MWU_LIMIT:
        doubled = np.rint(ranks * 2).astype(np.int64)
        u2_obs = int(round(2 * r_a)) - n_a * (n_a + 1)
        p = _exact_mwu_pvalue(doubled, n_a, u2_obs)
        return MannWhitneyResult(u_a, p, "exact")

    n = n_a + n_b
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(tie_counts.astype(float) ** 3 - tie_counts))
    sigma_sq = n_a * n_b / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if sigma_sq <= 0:
        return MannWhitneyResult(u_a, 1.0, "normal_approx")
    mu = n_a * n_b / 2.0
    u_big = max(u_a, n_a * n_b - u_a)
    z = (u_big - mu - 0.5) / math.sqrt(sigma_sq)
    p = min(1.0, 2.0 * _normal_sf(z))
    return MannWhitneyResult(u_a, p, "normal_approx")


def cohens_d(a: Sequence[float], b: Sequence[float]) -> float:
    """Standardized mean difference with pooled, Bessel-corrected SD.

    Zero pooled SD with equal means gives 0; with unequal means it raises
    :class:`DegenerateVarianceError` (the effect size is undefined).
    """
    xa = np.asarray(a, dtype=float)
    xb = np.asarray(b, dtype=float)
    if xa.size < 2 or xb.size < 2:
        raise ValueError("cohens_d needs at least 2 observations per sample")
    n_a, n_b = xa.size, xb.size
    var_a = float(xa.var(ddof=1))
    var_b = float(xb.var(ddof=1))
    pooled = math.sqrt(((n_a - 1) * var_a + (n_b - 1) * var_b) / (n_a + n_b - 2))
    diff = float(xa.mean() - xb.mean())
    if pooled == 0.0:
        if diff == 0.0:
            return 0.0
        raise DegenerateVarianceError("zero pooled variance with unequal means")
    return diff / pooled


def bootstrap_ci(
    values: Sequence[float],
    statistic: str = "mean",
    iterations: int = 1000,
    level: float = 0.95,
    rng: np.random.Generator | None = None,
) -> tuple[float, float]:
    """Percentile bootstrap CI for the given statistic of one sample.

    Draw order contract (pinned by a golden test): iteration i draws its n
    resample indices with one ``rng.integers(0, n, size=n)`` call.
    """
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("values is empty")
    if iterations < 100:
        raise ValueError("iterations must be >= 100")
    if statistic != "mean":
        raise ValueError(f"unsupported statistic {statistic!r}")
    if rng is None:
        rng = np.random.default_rng()
    n = x.size
    stats = np.empty(iterations)
    for i in range(iterations):
        idx = rng.integers(0, n, size=n)
        stats[i] = x[idx].mean()
    edge = (1.0 - level) / 2.0 * 100.0
    lo, hi = np.percentile(stats, [edge, 100.0 - edge])
    return float(lo), float(hi)


def benjamini_hochberg(
    p_values: Sequence[float], alpha: float = 0.05
) -> tuple[list[float], list[bool]]:
    """Step-up BH adjustment mapped back to input order.

    adj_(i) = min_{j>=i} (m * p_(j) / j), clipped at 1; reject where the
    adjusted value is <= alpha (inclusive boundary).
    """
    p = np.asarray(p_values, dtype=float)
    if p.size and (np.min(p) < 0.0 or np.max(p) > 1.0):
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    if m == 0:
        return [], []
    order = np.argsort(p, kind="stable")
    # p * (m/j), not (p*m)/j: the j=m factor is exactly 1.0, so the largest
    # adjusted value equals its raw p bit-for-bit
    ranked = p[order] * (m / np.arange(1, m + 1))
    adjusted_sorted = np.minimum.accumulate(ranked[::-1])[::-1]
    adjusted_sorted = np.minimum(adjusted_sorted, 1.0)
    adjusted = np.empty(m)
    adjusted[order] = adjusted_sorted
    rejected = adjusted <= alpha
    return [float(v) for v in adjusted], [bool(v) for v in rejected]

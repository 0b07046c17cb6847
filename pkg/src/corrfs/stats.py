"""Non-parametric comparisons of methods across datasets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc
from scipy.stats import rankdata

__all__ = [
    "WilcoxonResult",
    "FriedmanResult",
    "RankSummary",
    "wilcoxon_signed_rank",
    "signed_rank_null_counts",
    "friedman",
    "average_ranks",
    "chi2_sf",
]

MAX_EXACT_N = 25


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    w_plus: float
    w_minus: float
    n_used: int
    pvalue: float


@dataclass(frozen=True)
class FriedmanResult:
    statistic: float
    pvalue: float
    mean_ranks: np.ndarray


@dataclass(frozen=True)
class RankSummary:
    mean_ranks: np.ndarray
    best_counts: np.ndarray
    ranks: np.ndarray


def signed_rank_null_counts(doubled_ranks) -> np.ndarray:
    """Number of sign assignments giving each value of ``2 * W+``.

    ``doubled_ranks`` are the integer ranks times two (average ranks of tied
    values are half-integers). Entry ``t`` of the result counts the subsets
    of ranks whose doubled sum equals ``t``.
    """
    r = np.asarray(doubled_ranks, dtype=np.int64)
    counts = np.zeros(int(r.sum()) + 1, dtype=object)
    counts[0] = 1
    for v in r:
        counts[v:] = counts[v:] + counts[: counts.size - v].copy()
    return counts


def wilcoxon_signed_rank(x, y) -> WilcoxonResult:
    """Exact two-sided Wilcoxon signed-rank test for paired samples.

    Zero differences are dropped, tied absolute differences receive average
    ranks, and the p-value is the exact probability under all ``2**n`` sign
    assignments that ``min(W+, W-)`` is at most its observed value.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D sequences of equal length")
    diff = x - y
    diff = diff[diff != 0]
    n = diff.size
    if n == 0:
        return WilcoxonResult(0.0, 0.0, 0.0, 0, 1.0)
    if n > MAX_EXACT_N:
        raise ValueError(f"exact test supports at most {MAX_EXACT_N} non-zero differences, got {n}")
    ranks = rankdata(np.abs(diff))
    w_plus = float(ranks[diff > 0].sum())
    w_minus = float(ranks[diff < 0].sum())
    stat = min(w_plus, w_minus)
    doubled = np.rint(2 * ranks).astype(np.int64)
    counts = signed_rank_null_counts(doubled)
    lower = sum(counts[: int(round(2 * stat)) + 1])
    p = min(1.0, 2 * lower / 2**n)
    return WilcoxonResult(stat, w_plus, w_minus, n, float(p))


def _rank_rows(scores, higher_is_better):
    S = np.asarray(scores, dtype=float)
    keyed = -S if higher_is_better else S
    return np.vstack([rankdata(col) for col in keyed.T]).T


def chi2_sf(x: float, dof: int) -> float:
    """Upper tail of the chi-square distribution (regularised incomplete gamma)."""
    if x <= 0:
        return 1.0
    return float(gammaincc(dof / 2.0, x / 2.0))


def friedman(scores, higher_is_better: bool = True) -> FriedmanResult:
    """Friedman test with the chi-square approximation.

    Parameters
    ----------
    scores : array_like, shape (k methods, N datasets)
    """
    S = np.asarray(scores, dtype=float)
    if S.ndim != 2:
        raise ValueError("scores must be a 2-D (methods x datasets) array")
    k, N = S.shape
    if k < 3 or N < 5:
        raise ValueError(f"need at least 3 methods and 5 datasets, got {k} x {N}")
    mean_ranks = _rank_rows(S, higher_is_better).mean(axis=1)
    stat = 12.0 * N / (k * (k + 1)) * (np.sum(mean_ranks**2) - k * (k + 1) ** 2 / 4.0)
    stat = max(float(stat), 0.0)
    return FriedmanResult(stat, chi2_sf(stat, k - 1), mean_ranks)


def average_ranks(scores, higher_is_better: bool = True) -> RankSummary:
    """Per-dataset ranks (1 = best, ties averaged), their means and best-rank counts.

    A method counts as best on a dataset when its rank there is the minimum,
    so shared wins count for every tied method.
    """
    S = np.asarray(scores, dtype=float)
    if S.ndim != 2:
        raise ValueError("scores must be a 2-D (methods x datasets) array")
    ranks = _rank_rows(S, higher_is_better)
    best = (ranks == ranks.min(axis=0)).sum(axis=1)
    return RankSummary(ranks.mean(axis=1), best, ranks)

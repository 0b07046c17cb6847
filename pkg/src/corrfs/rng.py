"""Seedable random source and the sampling primitives used by the selector.

Every stream is driven by numpy's PCG64 bit generator (O'Neill's permuted
congruential generator, 128-bit state, 64-bit output). Seeds are plain
unsigned 64-bit integers; child streams are derived through
``numpy.random.SeedSequence`` so that a (master seed, run index) pair always
maps to the same independent stream.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "RandomSource",
    "derive_seed",
    "next_uniform",
    "roulette_select",
    "sample_chi_square",
    "split_indices",
]

_SEED_MASK = (1 << 64) - 1


def derive_seed(master: int, *keys: int) -> int:
    """Mix a master seed with integer keys into a new 64-bit seed.

    The mixing function is ``SeedSequence([master, *keys])`` followed by one
    64-bit word of generated state. It is fixed and documented so that run
    seeds are reproducible outside this package.
    """
    entropy = [int(master) & _SEED_MASK, *(int(k) & _SEED_MASK for k in keys)]
    word = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0]
    return int(word)


class RandomSource:
    """Single-owner PCG64 stream.

    Parameters
    ----------
    seed : int
        Unsigned 64-bit seed. Equal seeds give identical output sequences.
    """

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = int(seed) & _SEED_MASK
        self.generator = np.random.Generator(np.random.PCG64(self.seed))

    def spawn(self, key: int) -> "RandomSource":
        """Independent child stream keyed by ``key``; does not advance ``self``."""
        return RandomSource(derive_seed(self.seed, key))

    def uniform(self, size=None):
        return self.generator.random(size)

    def permutation(self, n: int) -> np.ndarray:
        return self.generator.permutation(n)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed})"


def next_uniform(src: RandomSource) -> float:
    """Next variate in [0, 1)."""
    return float(src.uniform())


def _check_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("degenerate weight vector")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError("invalid weight")
    if not np.any(w > 0):
        raise ValueError("degenerate weight vector")
    return w


def roulette_select(src: RandomSource, weights, size=None):
    """Draw an index with probability ``weights[i] / sum(weights)``.

    Parameters
    ----------
    src : RandomSource
    weights : array_like
        Non-negative finite weights with at least one positive entry.
    size : int, optional
        Number of independent draws. ``None`` returns a single ``int``.

    Returns
    -------
    int or ndarray of int
    """
    w = _check_weights(weights)
    cdf = np.cumsum(w)
    cdf /= cdf[-1]
    u = src.uniform(size)
    idx = np.searchsorted(cdf, u, side="right")
    # u can only reach the top bucket edge through rounding in cdf; fold it
    # back onto the last index with positive mass.
    last = int(np.flatnonzero(w > 0)[-1])
    idx = np.minimum(idx, last)
    if size is None:
        return int(idx)
    return idx


def sample_chi_square(src: RandomSource, d: int, size=None):
    """Chi-square variate(s) with ``d`` degrees of freedom.

    Uses the generator's gamma-based construction (chi2(d) = 2 * Gamma(d/2)).
    """
    if d < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {d}")
    out = src.generator.chisquare(d, size)
    if size is None:
        return float(out)
    return out


def split_indices(src: RandomSource, labels, train_fraction: float = 0.75):
    """Stratified random train/test partition of sample indices.

    The training side gets ``round(train_fraction * m)`` samples shared out
    over classes by largest remainder, so each class contributes the floor or
    ceiling of ``train_fraction * count``; counts are clipped so both sides
    keep at least one member of every class.

    Returns
    -------
    train, test : ndarray of int
        Sorted, disjoint index arrays whose union is ``range(len(labels))``.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    y = np.asarray(labels)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("labels must be a non-empty 1-D sequence")
    classes, counts = np.unique(y, return_counts=True)
    for cls, count in zip(classes, counts):
        if count < 2:
            raise ValueError(f"class too small to split: class {cls!r} has {count} sample")
    # largest-remainder rounding: per-class counts are floor or ceil of their
    # quota and the total is round(train_fraction * m)
    quota = train_fraction * counts
    n_train = np.floor(quota).astype(np.int64)
    short = int(np.floor(train_fraction * y.size + 0.5)) - int(n_train.sum())
    order = np.argsort(-(quota - n_train), kind="stable")
    n_train[order[:max(short, 0)]] += 1
    n_train = np.clip(n_train, 1, counts - 1)
    train, test = [], []
    for cls, count, k in zip(classes, counts, n_train):
        members = np.flatnonzero(y == cls)
        shuffled = members[src.permutation(count)]
        n_train_cls = int(k)
        train.append(shuffled[:n_train_cls])
        test.append(shuffled[n_train_cls:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))

"""Subset evaluation for the wrapper search: a k-NN accuracy oracle with an
evaluation counter that defines the search budget."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, SplitDataset, make_split, project
from .metrics import MetricsReport, report
from .rng import RandomSource
from .subset import FeatureSubset

__all__ = [
    "KnnConfig",
    "knn_classify",
    "knn_predict",
    "SubsetEvaluator",
    "KnnEvaluator",
    "PROTOCOLS",
]

PROTOCOLS = ("holdout", "paper-mirror")


@dataclass(frozen=True)
class KnnConfig:
    k: int = 5

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


def knn_predict(train: Dataset, queries, cfg: KnnConfig = KnnConfig()) -> np.ndarray:
    """Majority vote of the ``k`` nearest training rows (Euclidean).

    Equal distances keep the lower training index first; tied votes go to
    the lowest class id.
    """
    Xtr = train.features
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    if Q.shape[1] != Xtr.shape[1]:
        raise ValueError(f"dimension mismatch: query has {Q.shape[1]} features, train has {Xtr.shape[1]}")
    m = Xtr.shape[0]
    if m == 0:
        raise ValueError("empty training set")
    if cfg.k > m:
        raise ValueError(f"k={cfg.k} exceeds {m} training samples")
    # squared distances via explicit differences: the expanded-norm trick
    # loses exact zeros and reorders near-ties
    d2 = ((Q[:, None, :] - Xtr[None, :, :]) ** 2).sum(axis=2)
    nearest = np.argsort(d2, axis=1, kind="stable")[:, : cfg.k]
    votes = train.labels[nearest]
    counts = np.zeros((Q.shape[0], train.class_count), dtype=np.int64)
    np.add.at(counts, (np.repeat(np.arange(Q.shape[0]), cfg.k), votes.ravel()), 1)
    return counts.argmax(axis=1)


def knn_classify(train: Dataset, query, cfg: KnnConfig = KnnConfig()) -> int:
    q = np.asarray(query, dtype=float)
    if q.ndim != 1:
        raise ValueError("query must be a single feature vector")
    return int(knn_predict(train, q[None, :], cfg)[0])


class SubsetEvaluator:
    """Base contract for the accuracy oracle.

    Subclasses implement ``_accuracy(subset)`` and ``_final(subset)``.
    ``evaluate`` counts every call, repeated subsets included.
    """

    def __init__(self):
        self.evaluations = 0

    def evaluate(self, subset: FeatureSubset) -> float:
        if subset is None or len(subset) == 0:
            raise ValueError("empty feature subset")
        self.evaluations += 1
        return self._accuracy(subset)

    def final_report(self, subset: FeatureSubset) -> MetricsReport:
        if subset is None or len(subset) == 0:
            raise ValueError("empty feature subset")
        return self._final(subset)

    def _accuracy(self, subset):
        raise NotImplementedError

    def _final(self, subset):
        raise NotImplementedError


class KnnEvaluator(SubsetEvaluator):
    """k-NN wrapper evaluator.

    Parameters
    ----------
    split : SplitDataset
        Already scaled partition.
    k : int
    protocol : {"holdout", "paper-mirror"}
        ``holdout`` carves a stratified 75/25 inner split from the training
        partition (drawn once, from ``src``) and scores on the inner holdout;
        ``paper-mirror`` fits on the full training partition and scores on
        the test partition.
    src : RandomSource, optional
        Needed for the holdout protocol.
    """

    def __init__(self, split: SplitDataset, k: int = 5, protocol: str = "holdout",
                 src: RandomSource | None = None):
        super().__init__()
        if protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
        self.split = split
        self.cfg = KnnConfig(k)
        self.protocol = protocol
        if protocol == "holdout":
            if src is None:
                raise ValueError("holdout protocol needs a RandomSource")
            inner = make_split(split.train, src, 0.75)
            self._fit, self._score = inner.train, inner.test
        else:
            self._fit, self._score = split.train, split.test
        if self.cfg.k > self._fit.n_samples:
            raise ValueError(f"k={self.cfg.k} exceeds {self._fit.n_samples} fitting samples")

    @property
    def n_features(self) -> int:
        return self.split.n_features

    def _accuracy(self, subset):
        cols = sorted(subset.indices)
        fit = project(self._fit, cols)
        score = project(self._score, cols)
        pred = knn_predict(fit, score.features, self.cfg)
        return float(np.mean(pred == score.labels))

    def _final(self, subset):
        cols = sorted(subset.indices)
        train = project(self.split.train, cols)
        test = project(self.split.test, cols)
        pred = knn_predict(train, test.features, self.cfg)
        return report(test.labels, pred, test.class_count, len(cols), self.n_features)

"""Datasets: CSV ingestion, stratified splits, min-max scaling, projection and
synthetic generators with known redundant features."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .rng import RandomSource, split_indices
from .subset import FeatureSubset

__all__ = [
    "DataError",
    "Dataset",
    "SplitDataset",
    "load_csv",
    "write_csv",
    "make_split",
    "normalize_minmax",
    "project",
    "generate_synthetic",
    "generate_wide",
    "SYNTHETIC_REDUNDANT_PAIRS",
]


class DataError(ValueError):
    """Input data could not be read or violates a dataset invariant."""


@dataclass(frozen=True)
class Dataset:
    """Numeric feature matrix with integer class labels.

    Attributes
    ----------
    features : ndarray, shape (m, n)
    labels : ndarray of int, shape (m,)
        Class ids in ``0 .. class_count - 1``.
    feature_names : tuple of str
    class_count : int
    class_names : tuple of str, optional
        Original label tokens, indexed by class id.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple
    class_count: int
    class_names: Optional[tuple] = None

    def __post_init__(self):
        X = np.array(self.features, dtype=float)
        y = np.array(self.labels, dtype=np.int64)
        if X.ndim != 2:
            raise DataError(f"features must be 2-D, got shape {X.shape}")
        m, n = X.shape
        if y.shape != (m,):
            raise DataError(f"labels shape {y.shape} does not match {m} samples")
        if len(self.feature_names) != n:
            raise DataError(f"{len(self.feature_names)} feature names for {n} features")
        if n < 1:
            raise DataError("dataset has no features")
        if not np.all(np.isfinite(X)):
            raise DataError("features contain non-finite values")
        if self.class_count < 2:
            raise DataError(f"need at least 2 classes, got {self.class_count}")
        if m and (y.min() < 0 or y.max() >= self.class_count):
            raise DataError(f"label ids outside 0..{self.class_count - 1}")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", tuple(str(s) for s in self.feature_names))
        if self.class_names is not None:
            object.__setattr__(self, "class_names", tuple(str(s) for s in self.class_names))

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def take(self, rows) -> "Dataset":
        """Row subset with the same columns and class coding."""
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.features[rows], self.labels[rows], self.feature_names,
                       self.class_count, self.class_names)


@dataclass(frozen=True)
class SplitDataset:
    """Train/test partition plus per-feature scaling bounds fitted on train."""

    train: Dataset
    test: Dataset
    scale_min: Optional[np.ndarray] = field(default=None, compare=False)
    scale_max: Optional[np.ndarray] = field(default=None, compare=False)

    @property
    def n_features(self) -> int:
        return self.train.n_features


def _parse_label_column(header, label_column):
    if isinstance(label_column, (int, np.integer)):
        col = int(label_column)
        if col < 0:
            col += len(header)
        if not 0 <= col < len(header):
            raise DataError(f"label column index {label_column} out of range for {len(header)} columns")
        return col
    if label_column not in header:
        raise DataError(f"label column {label_column!r} not found in header")
    return header.index(label_column)


def load_csv(path, label_column: Union[str, int] = -1) -> Dataset:
    """Read a comma-delimited file with a header row.

    Parameters
    ----------
    path : str or Path
    label_column : str or int, default -1
        Header name or column index (negative counts from the end). Label
        tokens are mapped to class ids in order of first appearance.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise DataError(f"{path}: need a header row and at least one data row")
    header = [h.strip() for h in rows[0]]
    seen = set()
    for h in header:
        if h in seen:
            raise DataError(f"{path}: duplicate header name {h!r}")
        seen.add(h)
    label_idx = _parse_label_column(header, label_column)
    feature_cols = [j for j in range(len(header)) if j != label_idx]
    if len(feature_cols) < 2:
        raise DataError(f"{path}: need at least 2 feature columns")

    class_ids: dict = {}
    X = np.empty((len(rows) - 1, len(feature_cols)))
    y = np.empty(len(rows) - 1, dtype=np.int64)
    for r, row in enumerate(rows[1:]):
        line = r + 2
        if len(row) != len(header):
            raise DataError(f"{path}: row {line} has {len(row)} cells, header has {len(header)}")
        for k, j in enumerate(feature_cols):
            cell = row[j].strip()
            try:
                X[r, k] = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {line}, column {j + 1} ({header[j]!r}): cannot parse {cell!r} as a number"
                ) from None
            if not np.isfinite(X[r, k]):
                raise DataError(f"{path}: row {line}, column {j + 1} ({header[j]!r}): non-finite value")
        token = row[label_idx].strip()
        y[r] = class_ids.setdefault(token, len(class_ids))
    if len(class_ids) < 2:
        raise DataError(f"{path}: single-class file")
    return Dataset(X, y, tuple(header[j] for j in feature_cols), len(class_ids),
                   tuple(class_ids))


def write_csv(ds: Dataset, path, label_name: str = "label") -> None:
    """Write ``ds`` as comma-delimited text, labels as integer ids in the last column."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*ds.feature_names, label_name])
        for row, label in zip(ds.features, ds.labels):
            w.writerow([repr(float(v)) for v in row] + [int(label)])


def make_split(ds: Dataset, src: RandomSource, train_fraction: float = 0.75) -> SplitDataset:
    """Stratified random split of ``ds`` (unscaled)."""
    train, test = split_indices(src, ds.labels, train_fraction)
    return SplitDataset(ds.take(train), ds.take(test))


def normalize_minmax(split: SplitDataset) -> SplitDataset:
    """Scale every feature to [0, 1] using train-partition bounds.

    Constant training features map to 0 in both partitions. Test values are
    not clipped.
    """
    Xtr = split.train.features
    if Xtr.shape[0] == 0:
        raise DataError("cannot normalise an empty training partition")
    lo = Xtr.min(axis=0)
    hi = Xtr.max(axis=0)
    span = hi - lo
    const = span == 0
    safe = np.where(const, 1.0, span)

    def scale(ds):
        Z = (ds.features - lo) / safe
        Z[:, const] = 0.0
        return Dataset(Z, ds.labels, ds.feature_names, ds.class_count, ds.class_names)

    return SplitDataset(scale(split.train), scale(split.test), lo, hi)


def project(ds: Dataset, subset) -> Dataset:
    """Restrict ``ds`` to the columns of ``subset``, in subset order."""
    if isinstance(subset, FeatureSubset):
        if subset.n != ds.n_features:
            raise ValueError(f"subset is over {subset.n} features, dataset has {ds.n_features}")
        idx = list(subset.indices)
    else:
        idx = list(FeatureSubset(tuple(subset), ds.n_features).indices)
    return Dataset(ds.features[:, idx], ds.labels, tuple(ds.feature_names[i] for i in idx),
                   ds.class_count, ds.class_names)


# 0-based column pairs that carry the same information in generate_synthetic.
SYNTHETIC_REDUNDANT_PAIRS = ((0, 6), (3, 8), (4, 9))


def _median_labels(src, score, noise_rate):
    labels = (score > np.median(score)).astype(np.int64)
    if noise_rate > 0:
        flip = src.uniform(score.size) < noise_rate
        labels = np.where(flip, 1 - labels, labels)
    return labels


def generate_synthetic(src: RandomSource, m: int = 250, noise_rate: float = 0.02) -> Dataset:
    """Ten-feature, two-class dataset with deliberately redundant columns.

    ``f1..f6`` are i.i.d. Uniform(0, 1); ``f7 = 10 f1``, ``f8 = f2 + 3 f3``,
    ``f9 = f4`` and ``f10 = f5 / 1000``. The label is 1 when
    ``f1 + 0.8 f2 + 0.6 f3 + 0.4 f4 + 0.2 f5`` exceeds its sample median,
    then flipped independently with probability ``noise_rate``. ``f6`` is
    pure noise.
    """
    if m < 10:
        raise ValueError(f"m must be >= 10, got {m}")
    if not 0.0 <= noise_rate < 0.5:
        raise ValueError(f"noise_rate must lie in [0, 0.5), got {noise_rate}")
    base = src.uniform((m, 6))
    f1, f2, f3, f4, f5, _ = base.T
    derived = np.column_stack([10.0 * f1, f2 + 3.0 * f3, f4.copy(), f5 / 1000.0])
    X = np.hstack([base, derived])
    score = f1 + 0.8 * f2 + 0.6 * f3 + 0.4 * f4 + 0.2 * f5
    y = _median_labels(src, score, noise_rate)
    return Dataset(X, y, tuple(f"f{i}" for i in range(1, 11)), 2)


def generate_wide(src: RandomSource, m: int = 300, n_features: int = 100,
                  n_informative: int = 10, n_redundant: int = 20,
                  noise_rate: float = 0.02) -> Dataset:
    """Wider two-class dataset in the same spirit as ``generate_synthetic``.

    Columns ``0 .. n_informative-1`` are Uniform(0, 1) and drive the label
    through linearly decaying weights; the next ``n_redundant`` columns are
    scaled copies of informative ones (cycling); the rest are independent
    Uniform(0, 1) noise.
    """
    if n_informative < 1 or n_redundant < 0 or n_informative + n_redundant > n_features:
        raise ValueError("need 1 <= n_informative and n_informative + n_redundant <= n_features")
    if m < 10:
        raise ValueError(f"m must be >= 10, got {m}")
    info = src.uniform((m, n_informative))
    weights = np.linspace(1.0, 0.2, n_informative)
    scales = 1.0 + np.arange(n_redundant)
    redundant = info[:, np.arange(n_redundant) % n_informative] * scales
    noise = src.uniform((m, n_features - n_informative - n_redundant))
    X = np.hstack([info, redundant, noise])
    y = _median_labels(src, info @ weights, noise_rate)
    return Dataset(X, y, tuple(f"f{i}" for i in range(1, n_features + 1)), 2)

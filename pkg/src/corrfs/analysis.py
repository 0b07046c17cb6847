"""Inspection of finished runs: conditional-probability heatmaps and winner
subset-size trajectories, with CSV export."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .eda import ProbabilityModel

__all__ = [
    "conditional_heatmap",
    "aggregate_heatmaps",
    "size_trajectory",
    "mean_size_trajectory",
    "write_heatmap_csv",
    "write_trajectory_csv",
]


def _row_normalise(H: np.ndarray) -> np.ndarray:
    H = H.copy()
    np.fill_diagonal(H, 0.0)
    return H / H.sum(axis=1, keepdims=True)


def conditional_heatmap(model: ProbabilityModel) -> np.ndarray:
    """``H[i, j]`` = probability of drawing feature ``j`` right after feature ``i``.

    Rows sum to one off the diagonal; the diagonal is zero.
    """
    H = model.im * model.sv[None, :]
    return _row_normalise(H)


def aggregate_heatmaps(heatmaps) -> np.ndarray:
    """Element-wise mean of several heatmaps, rows re-normalised."""
    mats = [np.asarray(h, dtype=float) for h in heatmaps]
    if not mats:
        raise ValueError("need at least one heatmap")
    shape = mats[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError(f"heatmaps must be square, got {shape}")
    for h in mats:
        if h.shape != shape:
            raise ValueError(f"shape mismatch: {h.shape} vs {shape}")
    return _row_normalise(np.mean(mats, axis=0))


def size_trajectory(trace) -> np.ndarray:
    """``(iteration, winner size)`` rows for one run, shape (T, 2)."""
    if not trace:
        raise ValueError("empty trace")
    return np.array([(t.iteration, t.winner_size) for t in trace], dtype=float)


def mean_size_trajectory(traces) -> np.ndarray:
    """Pointwise mean winner size over runs of equal length, shape (T, 2)."""
    series = [size_trajectory(t) for t in traces]
    if not series:
        raise ValueError("need at least one trace")
    lengths = {s.shape[0] for s in series}
    if len(lengths) != 1:
        raise ValueError(f"traces differ in length: {sorted(lengths)}")
    out = series[0].copy()
    out[:, 1] = np.mean([s[:, 1] for s in series], axis=0)
    return out


def write_heatmap_csv(H, path, decimals: int = 6) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in np.asarray(H):
            w.writerow([f"{v:.{decimals}f}" for v in row])


def write_trajectory_csv(traj, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iteration", "size"])
        for it, size in np.asarray(traj):
            w.writerow([int(it), f"{size:g}"])

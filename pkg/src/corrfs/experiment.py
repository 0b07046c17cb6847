"""Multi-run experiments and their JSON reports.

Seeding scheme: run ``r`` of an experiment with master seed ``S`` uses
``derive_seed(S, r)``. Inside a run that seed feeds three child streams:
key 1 draws the evaluator's inner holdout, key 2 drives the search, key 3
draws the stratified 75/25 outer split. Built-in synthetic datasets are drawn
once per experiment from ``RandomSource(S).spawn(DATA_KEY)``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import stats as _stats
from .analysis import aggregate_heatmaps, conditional_heatmap, mean_size_trajectory
from .data import Dataset, generate_synthetic, generate_wide, load_csv, make_split, normalize_minmax
from .eda import RunConfig, RunResult, init_model, run
from .rng import RandomSource, derive_seed

__all__ = [
    "ExperimentConfig",
    "DATA_KEY",
    "SPLIT_KEY",
    "SCHEMA_VERSION",
    "BUILTIN_DATASETS",
    "load_dataset",
    "prepare_split",
    "run_experiment",
    "run_report",
    "heatmap_experiment",
    "stats_report",
    "dumps_report",
    "schema",
]

DATA_KEY = 0xDA7A
SPLIT_KEY = 3
SCHEMA_VERSION = 1
BUILTIN_DATASETS = ("synthetic", "synthetic-wide")


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str = "synthetic"
    label: str = "-1"
    seed: int = 0
    runs: int = 10
    evals: int = 500
    change_factor: float = 0.01
    strong_mult: int = 2
    k: int = 5
    protocol: str = "holdout"
    gate: str = "previous"

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")

    def run_config(self, run_index: int) -> RunConfig:
        return RunConfig(self.evals, derive_seed(self.seed, run_index), self.change_factor,
                         self.strong_mult, self.protocol, self.k, self.gate)


def _label_arg(label: str):
    try:
        return int(label)
    except ValueError:
        return label


def load_dataset(cfg: ExperimentConfig) -> Dataset:
    if cfg.dataset in BUILTIN_DATASETS:
        src = RandomSource(cfg.seed).spawn(DATA_KEY)
        return generate_synthetic(src) if cfg.dataset == "synthetic" else generate_wide(src)
    return load_csv(cfg.dataset, _label_arg(cfg.label))


def prepare_split(ds: Dataset, run_seed: int):
    return normalize_minmax(make_split(ds, RandomSource(run_seed).spawn(SPLIT_KEY)))


def run_experiment(cfg: ExperimentConfig, ds: Optional[Dataset] = None) -> list:
    """Execute ``cfg.runs`` independent runs; returns their ``RunResult`` list."""
    ds = load_dataset(cfg) if ds is None else ds
    results = []
    for r in range(cfg.runs):
        rc = cfg.run_config(r)
        results.append(run(prepare_split(ds, rc.seed), rc))
    return results


def _run_entry(r: int, rc: RunConfig, res: RunResult, ds: Dataset) -> dict:
    idx = sorted(res.best_subset.indices)
    return {
        "run_index": r,
        "seed": rc.seed,
        "subset_indices": idx,
        "subset_names": [ds.feature_names[i] for i in idx],
        "subset_size": len(idx),
        "best_fitness": res.best_fitness,
        "evaluations": res.evaluations,
        "iterations": res.iterations,
        "metrics": res.report.to_dict(),
        "size_trajectory": res.winner_sizes().tolist(),
    }


def run_report(cfg: ExperimentConfig, results: list, ds: Dataset) -> dict:
    """Assemble the versioned run report (see ``schema('run_report')``)."""
    runs = [_run_entry(r, cfg.run_config(r), res, ds) for r, res in enumerate(results)]
    sizes = [e["subset_size"] for e in runs]
    aggregate = {
        "mean_subset_size": float(np.mean(sizes)),
        "best_subset_size": int(min(sizes)),
        "mean_best_fitness": float(np.mean([e["best_fitness"] for e in runs])),
    }
    for key in ("accuracy", "precision", "recall", "f1", "acc_pdf"):
        aggregate[f"mean_{key}"] = float(np.mean([e["metrics"][key] for e in runs]))
    aggregate["mean_size_trajectory"] = mean_size_trajectory([res.trace for res in results])[:, 1].tolist()
    return {
        "schema": "corrfs.run_report",
        "schema_version": SCHEMA_VERSION,
        "config": asdict(cfg),
        "dataset": {
            "name": cfg.dataset,
            "n_samples": ds.n_samples,
            "n_features": ds.n_features,
            "n_classes": ds.class_count,
            "feature_names": list(ds.feature_names),
        },
        "runs": runs,
        "aggregate": aggregate,
    }


def heatmap_experiment(cfg: ExperimentConfig, ds: Optional[Dataset] = None) -> np.ndarray:
    """Mean conditional heatmap of the final models of ``cfg.runs`` runs.

    ``cfg.evals == 0`` skips the search and returns the initial model's
    (uniform) heatmap.
    """
    ds = load_dataset(cfg) if ds is None else ds
    if cfg.evals == 0:
        return aggregate_heatmaps([conditional_heatmap(init_model(ds.n_features))])
    return aggregate_heatmaps([conditional_heatmap(res.model) for res in run_experiment(cfg, ds)])


def stats_report(scores, methods, datasets, reference: Optional[str] = None,
                 higher_is_better: bool = True) -> dict:
    """Pairwise Wilcoxon (reference vs. each other method), Friedman and ranks.

    ``scores`` has shape (methods, datasets).
    """
    S = np.asarray(scores, dtype=float)
    methods = list(methods)
    if S.ndim != 2 or S.shape != (len(methods), len(datasets)):
        raise ValueError(f"score table shape {S.shape} does not match {len(methods)} methods x {len(datasets)} datasets")
    if len(methods) < 2:
        raise ValueError("need at least two methods")
    reference = methods[-1] if reference is None else reference
    if reference not in methods:
        raise ValueError(f"reference method {reference!r} not among {methods}")
    ref = methods.index(reference)
    wilcoxon = []
    for j, name in enumerate(methods):
        if j == ref:
            continue
        w = _stats.wilcoxon_signed_rank(S[ref], S[j])
        wilcoxon.append({"method": name, "statistic": w.statistic, "n_used": w.n_used,
                         "pvalue": w.pvalue, "pvalue_display": f"{w.pvalue:.4f}"})
    k, N = S.shape
    if k >= 3 and N >= 5:
        fr = _stats.friedman(S, higher_is_better)
        friedman = {"statistic": fr.statistic, "dof": k - 1, "pvalue": fr.pvalue}
    else:
        friedman = None
    ranks = _stats.average_ranks(S, higher_is_better)
    return {
        "schema": "corrfs.stats_report",
        "schema_version": SCHEMA_VERSION,
        "methods": methods,
        "datasets": list(datasets),
        "reference": reference,
        "higher_is_better": higher_is_better,
        "wilcoxon": wilcoxon,
        "friedman": friedman,
        "average_ranks": dict(zip(methods, ranks.mean_ranks.tolist())),
        "best_counts": dict(zip(methods, ranks.best_counts.tolist())),
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def schema(name: str) -> dict:
    """JSON schema bundled with the package: ``run_report`` or ``stats_report``."""
    path = Path(__file__).with_name("data") / f"{name}.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))

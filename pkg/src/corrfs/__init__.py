"""Correlation-aware estimation-of-distribution feature selection."""

from .analysis import aggregate_heatmaps, conditional_heatmap, mean_size_trajectory, size_trajectory
from .data import (
    Dataset,
    DataError,
    SplitDataset,
    generate_synthetic,
    generate_wide,
    load_csv,
    make_split,
    normalize_minmax,
    project,
)
from .eda import ProbabilityModel, RunConfig, RunResult, init_model, run
from .evaluator import KnnEvaluator, SubsetEvaluator, knn_classify
from .experiment import ExperimentConfig, run_experiment
from .metrics import MetricsReport, acc_pdf, basic_metrics, confusion
from .rng import RandomSource, derive_seed
from .stats import average_ranks, friedman, wilcoxon_signed_rank
from .subset import FeatureSubset

__version__ = "0.1.0"

"""Correlation-aware two-individual estimation-of-distribution feature selector.

The search keeps a per-feature significance vector ``sv`` and a symmetric
pairwise interaction matrix ``im``. Each iteration draws two candidate
subsets feature by feature: the first feature with probability proportional
to ``sv``, every further feature with probability proportional to
``sv[j] * prod(im[j, l] for l already chosen)``. Subset sizes come from a
chi-square draw whose degrees of freedom track the previous winner's size.
The two candidates compete on ``accuracy / (size / n)`` and the winner/loser
pair nudges ``sv`` and ``im`` through fixed update tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .data import SplitDataset
from .evaluator import PROTOCOLS, KnnEvaluator, SubsetEvaluator
from .metrics import MetricsReport
from .rng import RandomSource, roulette_select, sample_chi_square
from .subset import FeatureSubset

__all__ = [
    "ProbabilityModel",
    "RunConfig",
    "RunState",
    "TraceRecord",
    "RunResult",
    "GATES",
    "init_model",
    "first_feature_distribution",
    "conditional_distribution",
    "sample_subset_size",
    "generate_individual",
    "fitness",
    "compete",
    "apply_sv_update",
    "apply_im_update",
    "sv_delta",
    "im_delta",
    "init_state",
    "step",
    "run",
]

GATES = ("previous", "best")


@dataclass
class ProbabilityModel:
    """Significance vector and interaction matrix.

    ``im`` is stored as a full symmetric matrix; its diagonal is never read.
    Every entry that is read stays inside ``[value_floor, value_cap]``.
    """

    sv: np.ndarray
    im: np.ndarray
    change_factor: float = 0.01
    strong_multiplier: int = 2
    value_floor: float = 1e-6
    value_cap: float = 1e6

    @property
    def n(self) -> int:
        return self.sv.size

    def copy(self) -> "ProbabilityModel":
        return replace(self, sv=self.sv.copy(), im=self.im.copy())


def init_model(n: int, change_factor: float = 0.01, strong_multiplier: int = 2) -> ProbabilityModel:
    """All-ones model: every feature and pair equally likely."""
    if n < 2:
        raise ValueError(f"need at least 2 features, got {n}")
    if change_factor <= 0:
        raise ValueError(f"change_factor must be positive, got {change_factor}")
    if strong_multiplier < 1:
        raise ValueError(f"strong_multiplier must be >= 1, got {strong_multiplier}")
    return ProbabilityModel(np.ones(n), np.ones((n, n)), float(change_factor), int(strong_multiplier))


def _normalise_log(logw: np.ndarray) -> np.ndarray:
    finite = np.isfinite(logw)
    out = np.zeros_like(logw)
    shifted = logw[finite] - logw[finite].max()
    w = np.exp(shifted)
    out[finite] = w / w.sum()
    return out


def first_feature_distribution(model: ProbabilityModel) -> np.ndarray:
    return model.sv / model.sv.sum()


def _log_weights(model: ProbabilityModel, selected) -> np.ndarray:
    logw = np.log(model.sv).copy()
    for l in selected:
        logw += np.log(model.im[:, l])
    logw[list(selected)] = -np.inf
    return logw


def conditional_distribution(model: ProbabilityModel, selected) -> np.ndarray:
    """Probability of each feature being drawn next, given ``selected``.

    Selected features get probability 0. Products over ``im`` are
    accumulated in log space and shifted by the largest log-weight before
    exponentiating, so long subsets neither underflow nor overflow.
    """
    sel = list(selected.indices if isinstance(selected, FeatureSubset) else selected)
    if not sel:
        raise ValueError("selected set must be non-empty; use first_feature_distribution")
    if len(set(sel)) == model.n:
        raise ValueError("all features already selected")
    return _normalise_log(_log_weights(model, sel))


def sample_subset_size(src: RandomSource, d: int, n: int) -> int:
    """Round a chi-square(d) draw to the nearest integer, clamped to [1, n]."""
    if not 1 <= d <= n:
        raise ValueError(f"degrees of freedom d={d} outside [1, {n}]")
    s = math.floor(sample_chi_square(src, d) + 0.5)
    return min(max(s, 1), n)


def generate_individual(model: ProbabilityModel, src: RandomSource, s: int) -> FeatureSubset:
    """Draw ``s`` distinct features by sequential roulette-wheel selection."""
    n = model.n
    if not 1 <= s <= n:
        raise ValueError(f"subset size {s} outside [1, {n}]")
    chosen = [roulette_select(src, first_feature_distribution(model))]
    if s > 1:
        log_im = np.log(model.im)
        logw = np.log(model.sv) + log_im[:, chosen[0]]
        logw[chosen[0]] = -np.inf
        for _ in range(1, s):
            j = roulette_select(src, _normalise_log(logw))
            chosen.append(j)
            logw += log_im[:, j]
            logw[j] = -np.inf
    return FeatureSubset(tuple(chosen), n)


def fitness(accuracy: float, subset_size: int, n: int) -> float:
    """Accuracy divided by the selected-feature rate ``subset_size / n``."""
    if not 1 <= subset_size <= n:
        raise ValueError(f"subset_size must lie in [1, {n}], got {subset_size}")
    return accuracy / (subset_size / n)


def compete(a: FeatureSubset, fit_a: float, b: FeatureSubset, fit_b: float):
    """Return ``(winner, loser)``; ties go to the smaller subset, then to ``a``."""
    if fit_b > fit_a or (fit_b == fit_a and len(b) < len(a)):
        return b, a
    return a, b


def _as_vectors(model, winner, loser):
    w = np.asarray(winner.binary_vector() if isinstance(winner, FeatureSubset) else winner, dtype=np.int64)
    l = np.asarray(loser.binary_vector() if isinstance(loser, FeatureSubset) else loser, dtype=np.int64)
    if w.shape != (model.n,) or l.shape != (model.n,):
        raise ValueError(f"winner/loser vectors must have length {model.n}")
    return w, l


def sv_delta(w: np.ndarray, l: np.ndarray, cf: float) -> np.ndarray:
    """+cf where only the winner selected, -cf where only the loser did."""
    return cf * (w - l)


def im_delta(w: np.ndarray, l: np.ndarray, cf: float, strong: int) -> np.ndarray:
    """Pairwise increments for ``im``.

    winner has both i, j:   loser none -> +cf, loser one -> +strong*cf, loser both -> 0
    loser has both i, j:    winner none -> -cf, winner one -> -strong*cf
    every other combination leaves the pair alone.
    """
    w_both = np.outer(w, w)
    l_both = np.outer(l, l)
    w_count = w[:, None] + w[None, :]
    l_count = l[:, None] + l[None, :]
    up = w_both * (1 - l_both) * np.where(l_count == 1, strong, 1)
    down = (1 - w_both) * l_both * np.where(w_count == 1, strong, 1)
    delta = cf * (up - down)
    np.fill_diagonal(delta, 0.0)
    return delta


def apply_sv_update(model: ProbabilityModel, winner, loser) -> None:
    w, l = _as_vectors(model, winner, loser)
    model.sv = np.clip(model.sv + sv_delta(w, l, model.change_factor),
                       model.value_floor, model.value_cap)


def apply_im_update(model: ProbabilityModel, winner, loser) -> None:
    w, l = _as_vectors(model, winner, loser)
    delta = im_delta(w, l, model.change_factor, model.strong_multiplier)
    im = model.im + delta
    off = ~np.eye(model.n, dtype=bool)
    im[off] = np.clip(im[off], model.value_floor, model.value_cap)
    model.im = im


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    winner_size: int
    winner_fitness: float
    best_fitness: float
    updated: bool


@dataclass
class RunState:
    model: ProbabilityModel
    d: int
    eval_budget: int
    gate: str = "previous"
    prev_winner_fitness: Optional[float] = None
    best_subset: Optional[FeatureSubset] = None
    best_fitness: float = -math.inf
    iteration: int = 0
    trace: list = field(default_factory=list)


@dataclass(frozen=True)
class RunConfig:
    """Search settings. ``budget`` counts subset evaluations (two per iteration)."""

    budget: int = 500
    seed: int = 0
    change_factor: float = 0.01
    strong_multiplier: int = 2
    protocol: str = "holdout"
    k: int = 5
    gate: str = "previous"

    def __post_init__(self):
        if self.budget < 2 or self.budget % 2:
            raise ValueError(f"budget must be an even number >= 2, got {self.budget}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.change_factor <= 0:
            raise ValueError(f"change_factor must be positive, got {self.change_factor}")
        if self.strong_multiplier < 1:
            raise ValueError(f"strong_multiplier must be >= 1, got {self.strong_multiplier}")
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.gate not in GATES:
            raise ValueError(f"gate must be one of {GATES}, got {self.gate!r}")


@dataclass
class RunResult:
    best_subset: FeatureSubset
    best_fitness: float
    model: ProbabilityModel
    trace: list
    evaluations: int
    report: Optional[MetricsReport]

    @property
    def iterations(self) -> int:
        return len(self.trace)

    def winner_sizes(self) -> np.ndarray:
        return np.array([t.winner_size for t in self.trace], dtype=np.int64)

    def best_fitness_trace(self) -> np.ndarray:
        return np.array([t.best_fitness for t in self.trace])


def init_state(n: int, budget: int, change_factor: float = 0.01, strong_multiplier: int = 2,
               gate: str = "previous") -> RunState:
    if gate not in GATES:
        raise ValueError(f"gate must be one of {GATES}, got {gate!r}")
    d = min(max(math.floor(n / 2 + 0.5), 1), n)
    return RunState(init_model(n, change_factor, strong_multiplier), d, budget, gate)


def step(state: RunState, evaluator: SubsetEvaluator, src: RandomSource) -> RunState:
    """One generate / compete / update iteration, applied to ``state`` in place."""
    if state.eval_budget - evaluator.evaluations < 2:
        raise RuntimeError("evaluation budget exhausted")
    model = state.model
    n = model.n
    candidates = []
    for _ in range(2):
        s = sample_subset_size(src, state.d, n)
        candidates.append(generate_individual(model, src, s))
    a, b = candidates
    fit_a = fitness(evaluator.evaluate(a), len(a), n)
    fit_b = fitness(evaluator.evaluate(b), len(b), n)
    winner, loser = compete(a, fit_a, b, fit_b)
    win_fit = fit_a if winner is a else fit_b

    if state.gate == "previous":
        open_gate = state.prev_winner_fitness is None or win_fit > state.prev_winner_fitness
    else:
        open_gate = state.best_subset is None or win_fit > state.best_fitness

    if win_fit > state.best_fitness:
        state.best_subset, state.best_fitness = winner, win_fit
    if open_gate:
        apply_sv_update(model, winner, loser)
        apply_im_update(model, winner, loser)
    state.prev_winner_fitness = win_fit
    state.d = len(winner)
    state.iteration += 1
    state.trace.append(TraceRecord(state.iteration, len(winner), win_fit, state.best_fitness, open_gate))
    return state


def run(split: SplitDataset, config: RunConfig = RunConfig(),
        evaluator: Optional[SubsetEvaluator] = None,
        on_step: Optional[Callable[[RunState], None]] = None) -> RunResult:
    """Full search on ``split`` until the evaluation budget is spent.

    Parameters
    ----------
    split : SplitDataset
        Scaled train/test partition.
    config : RunConfig
    evaluator : SubsetEvaluator, optional
        Defaults to a ``KnnEvaluator`` built from ``config``; its inner
        holdout is drawn from a child stream of ``config.seed``.
    on_step : callable, optional
        Called with the state after every iteration.

    Returns
    -------
    RunResult
        Includes the test-partition metrics of the best subset.
    """
    src = RandomSource(config.seed)
    if evaluator is None:
        evaluator = KnnEvaluator(split, config.k, config.protocol, src.spawn(1))
    search = src.spawn(2)
    state = init_state(split.n_features, config.budget, config.change_factor,
                       config.strong_multiplier, config.gate)
    start = evaluator.evaluations
    state.eval_budget = start + config.budget
    while state.eval_budget - evaluator.evaluations >= 2:
        step(state, evaluator, search)
        if on_step is not None:
            on_step(state)
    return RunResult(state.best_subset, state.best_fitness, state.model, state.trace,
                     evaluator.evaluations - start, evaluator.final_report(state.best_subset))

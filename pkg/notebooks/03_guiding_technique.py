# %% [markdown]
# # Subset size guided by a chi-square draw
#
# Each candidate's size is a chi-square variate whose degrees of freedom
# equal the last winner's size, so the search drifts toward the sizes that
# keep winning.

# %%
import numpy as np
from scipy import stats

from corrfs.analysis import mean_size_trajectory
from corrfs.eda import sample_subset_size
from corrfs.experiment import ExperimentConfig, run_experiment
from corrfs.rng import RandomSource, sample_chi_square

src = RandomSource(0)
for d in (5, 10, 50):
    x = sample_chi_square(src, d, 100000)
    print(d, "mean %.3f var %.3f" % (x.mean(), x.var()))
print("rounded+clamped mean at d=50:", np.mean([sample_subset_size(src, 50, 100) for _ in range(20000)]))

# %% [markdown]
# Winner size over iterations on a 100-feature dataset (10 informative,
# 20 scaled copies, 70 noise), averaged over ten runs.

# %%
results = run_experiment(ExperimentConfig(dataset="synthetic-wide", seed=0, runs=10))
series = mean_size_trajectory([r.trace for r in results])[:, 1]
print(np.round(series[:30], 1))
print("first 50 mean %.2f, last 50 mean %.2f" % (series[:50].mean(), series[-50:].mean()))
print("spearman rho %.3f" % stats.spearmanr(np.arange(series.size), series).statistic)

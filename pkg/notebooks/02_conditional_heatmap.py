# %% [markdown]
# # Conditional-probability heatmap of the learned model
#
# Row i holds the probability of picking each feature j as the second
# feature when i was picked first. Rows sum to one.

# %%
import numpy as np

from corrfs.analysis import aggregate_heatmaps, conditional_heatmap
from corrfs.eda import init_model
from corrfs.experiment import ExperimentConfig, run_experiment

np.set_printoptions(precision=3, suppress=True, linewidth=120)
print(conditional_heatmap(init_model(10)))

# %% [markdown]
# After search, averaged over runs (raise `runs` for smoother estimates).

# %%
results = run_experiment(ExperimentConfig(seed=0, runs=30))
H = aggregate_heatmaps([conditional_heatmap(r.model) for r in results])
print(H)
print("row sums", H.sum(axis=1))

# %% [markdown]
# The heatmap multiplies the pair term by the marginal term, so the two
# are worth inspecting separately.

# %%
IM = np.mean([r.model.im for r in results], axis=0)
SV = np.mean([r.model.sv for r in results], axis=0)
print("SV", SV)
masked = IM + np.diag(np.full(10, np.inf))
for i in (0, 6, 4, 9):
    print(f"row f{i + 1}: lowest IM partner f{np.argmin(masked[i]) + 1}, "
          f"lowest HM partner f{np.argmin(H[i] + np.eye(10)[i]) + 1}")

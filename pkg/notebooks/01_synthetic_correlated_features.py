# %% [markdown]
# # Selecting features from a dataset with planted duplicates
#
# Ten features: f1..f6 are independent uniforms, f7..f10 are exact
# functions of them (f7 = 10 f1, f8 = f2 + 3 f3, f9 = f4, f10 = f5 / 1000).
# A good selector should not spend its budget on both members of a pair.

# %%
import numpy as np

from corrfs.experiment import ExperimentConfig, load_dataset, run_experiment

cfg = ExperimentConfig(seed=0, runs=10, evals=500)
ds = load_dataset(cfg)
X = ds.features
print(ds.features.shape, np.bincount(ds.labels))
print("f9 == f4:", np.array_equal(X[:, 8], X[:, 3]))
print("corr(f5, f10): %.12f" % np.corrcoef(X[:, 4], X[:, 9])[0, 1])

# %% [markdown]
# Ten independent runs, 500 fitness evaluations each.

# %%
results = run_experiment(cfg, ds)
pairs = ((0, 6), (3, 8), (4, 9))
for r, res in enumerate(results):
    s = set(res.best_subset.indices)
    dup = [f"f{a + 1}/f{b + 1}" for a, b in pairs if a in s and b in s]
    names = [ds.feature_names[i] for i in sorted(s)]
    print(r, names, "fitness %.3f" % res.best_fitness, "test acc %.3f" % res.report.accuracy, dup or "")

# %% [markdown]
# Fitness divides accuracy by the selected fraction, so on two classes a
# single decent feature already scores about 5; subsets collapse quickly.

# %%
sizes = [len(res.best_subset) for res in results]
print("mean size", np.mean(sizes), "mean ACCxPDF", np.mean([res.report.acc_pdf for res in results]))

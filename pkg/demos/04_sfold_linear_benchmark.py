"""The S-fold estimator on the high-dimensional linear benchmark: same
budget as simple MC, visibly tighter variance estimates."""

import numpy as np

from lassomc.lasso import SparsityTarget
from lassomc.lmc import LmcConfig, lmc_run
from lassomc.problems import linear_problem

problem = linear_problem(100)
ref = problem.reference()
cfg = LmcConfig(s_folds=5, m=10_000, lambda_strategy=SparsityTarget(0.95))

print(f"truth: mean 0, variance {ref.variance:.4f}")
print(f"budget N=100, S={cfg.s_folds} folds, M={cfg.m} surrogate draws\n")

res = lmc_run(problem, 100, cfg, seed=1)
print("single run:")
print(f"  simple MC  mean {res.mc_mean:+.4f}  variance {res.mc_variance:.4f}")
print(f"  S-fold     mean {res.mean:+.4f}  variance {res.variance:.4f}")
print("  per-fold surrogates:", [(f"{m.lam:.3f}", m.nonzeros) for m in res.fold_models])

reps = 100
lmc_vars, mc_vars = [], []
for r in range(reps):
    res = lmc_run(problem, 100, cfg, seed=1000 + r)
    lmc_vars.append(res.variance)
    mc_vars.append(res.mc_variance)
lmc_vars, mc_vars = np.array(lmc_vars), np.array(mc_vars)
print(f"\nover {reps} repeats (same data for both estimators):")
for label, vals in (("simple MC", mc_vars), ("S-fold", lmc_vars)):
    rmse = np.sqrt(np.mean((vals - ref.variance) ** 2))
    print(
        f"  {label:>9}: mean of estimates {vals.mean():.4f}, "
        f"RMSE vs truth {rmse:.4f}"
    )
print("\nboth are unbiased; the fold-and-correct reuse cuts the spread.")

"""Two-level estimation: how a biased surrogate plus a paired correction
gives unbiased moments, and what the multifidelity strategies do with it."""

import numpy as np

from lassomc.estimators import (
    adaptive_mfmc,
    biased_mfmc,
    estimate_moment_stats,
    estimate_mse_mean,
    simple_mc,
    static_mfmc,
    two_level_mean,
    two_level_variance,
)
from lassomc.lasso import LassoTrainer, SparsityTarget
from lassomc.problems import linear_problem
from lassomc.sampling import derive_seeds, sample

problem = linear_problem(50)
ref = problem.reference()
print(f"truth: mean {ref.mean}, variance {ref.variance:.4f}\n")

# hand-rolled two-level estimate: surrogate on cheap samples + correction
rng_seed = 123
v_seed, w_seed = derive_seeds(rng_seed, 2)
v = sample(problem.distribution, 100, v_seed)
y = problem(v.inputs)
trainer = LassoTrainer(strategy=SparsityTarget(0.95))
model = trainer(v.inputs[:80], y[:80])
w = sample(problem.distribution, 10_000, w_seed)
f_eval, s_eval, s_big = y[80:], model(v.inputs[80:]), model(w.inputs)
print(f"two-level mean    : {two_level_mean(f_eval, s_eval, s_big):.4f}")
print(f"two-level variance: {two_level_variance(f_eval, s_eval, s_big):.4f}")
stats = estimate_moment_stats(f_eval, s_eval)
print("estimated mean-MSE:", f"{estimate_mse_mean(stats, 20, 10_000):.2e}")

# the strategies automate the split
print("\nstrategy comparison at budget N=100 (single seed):")
print(f"  {'simple MC':>14}: var {simple_mc(problem, 100, rng_seed).variance:.4f}")
est = static_mfmc(problem, 100, 0.8, 10_000, trainer, rng_seed)
print(f"  {'static MFMC':>14}: var {est.variance:.4f} (n={est.chosen_n})")
est = adaptive_mfmc(
    problem, 100, [0.1, 0.3, 0.5, 0.7, 0.9], 10_000, trainer, rng_seed
)
print(f"  {'adaptive MFMC':>14}: var {est.variance:.4f} (n={est.chosen_n})")
est = biased_mfmc(problem, 100, 10_000, trainer, rng_seed)
print(f"  {'biased MFMC':>14}: var {est.variance:.4f}  <- reuses training data")

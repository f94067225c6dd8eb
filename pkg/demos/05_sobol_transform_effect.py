"""Why feature transforms matter: the Sobol product function is symmetric
about 0.5, so plain linear surrogates learn nothing (and the estimator
gracefully falls back to simple MC); folding the cube restores the signal."""

import numpy as np

from lassomc.lasso import IDENTITY, AbsShift, CrossValidation
from lassomc.lmc import LmcConfig, lmc_run
from lassomc.problems import sobol_problem

problem = sobol_problem(50)
ref = problem.reference()
print(f"truth: mean {ref.mean}, variance {ref.variance:.4f}, std {ref.std:.4f}\n")

n, reps = 250, 30
for label, transform in (("identity", IDENTITY), ("|x - 0.5| fold", AbsShift(0.5))):
    cfg = LmcConfig(
        s_folds=5,
        m=10_000,
        lambda_strategy=CrossValidation(5),
        transform=transform,
    )
    std_errs, null_folds = [], 0
    for r in range(reps):
        res = lmc_run(problem, n, cfg, seed=9000 + r)
        std_errs.append(abs(np.sqrt(max(res.variance, 0.0)) - ref.std) / ref.std)
        null_folds += sum(m.nonzeros == 0 for m in res.fold_models)
    print(
        f"{label:>15}: mean rel. std error {np.mean(std_errs):.4f}, "
        f"{null_folds}/{reps * 5} folds learned nothing"
    )

print(
    "\nwith identity features most folds select the null model and the\n"
    "estimator matches simple MC; the fold transform turns the symmetric\n"
    "axes into monotone ones that a sparse linear surrogate can capture."
)

"""Lasso surrogates: the null-weight threshold, the regularisation path,
and the two ways of picking lambda."""

import numpy as np

from lassomc.lasso import (
    CrossValidation,
    LassoTrainer,
    SparsityTarget,
    fit,
    fit_path,
    lambda_max,
    select_lambda_cv,
    select_lambda_sparsity,
)
from lassomc.sampling import center_matrix

rng = np.random.default_rng(0)
n, d = 80, 30
x = rng.normal(size=(n, d))
true_beta = np.zeros(d)
true_beta[:5] = [2.0, -1.5, 1.0, 0.5, 0.25]
y = x @ true_beta + 0.3 * rng.normal(size=n)

# the smallest lambda with an all-zero fit is available in closed form
z, _ = center_matrix(x)
yc, _ = center_matrix(y)
lam_top = lambda_max(z, yc)
print(f"lambda_max = {lam_top:.2f}")
print("fit at lambda_max is exactly null:", fit(x, y, lam_top).nonzeros == 0)

# walking the path shows the support growing as lambda shrinks
lams, models = fit_path(x, y)
print("\nlambda -> nonzeros along the path:")
for i in (0, 10, 25, 50, 75, 99):
    print(f"  {lams[i]:10.4f} -> {models[i].nonzeros}")

lam_cv = select_lambda_cv(x, y)
lam_k = select_lambda_sparsity(x, y, k=5)
print(f"\n5-fold CV picks lambda = {lam_cv:.4f}")
print(f"sparsity target k=5 picks lambda = {lam_k:.4f}")
print("CV fit support:", np.flatnonzero(fit(x, y, lam_cv).beta).tolist())
print("k=5 fit support:", np.flatnonzero(fit(x, y, lam_k).beta).tolist())

# trainers bundle the choice for use inside the estimators
model = LassoTrainer(strategy=CrossValidation(5))(x, y)
print(f"\ntrained model: lambda={model.lam:.4f}, {model.nonzeros} nonzeros")
model = LassoTrainer(strategy=SparsityTarget(0.1))(x, y)
print(f"10% sparsity target: lambda={model.lam:.4f}, {model.nonzeros} nonzeros")

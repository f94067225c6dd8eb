"""S-fold Lasso Monte Carlo estimation.

The budget of N true-model evaluations is reused S times: each fold holds
out a contiguous block of N/S samples for evaluation, trains a surrogate on
the other N(S-1)/S, and contributes one small two-level estimate computed
on its held-out block plus a shared surrogate-only set W. The final mean
and variance are the averages of the S fold estimates; no extra true-model
calls are made beyond the N outputs supplied.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, TrainingError
from .estimators import (
    estimate_moment_stats,
    mc_mean,
    mc_variance,
    superiority_conditions,
    two_level_mean,
    two_level_variance,
)
from .lasso import IDENTITY, CrossValidation, LassoTrainer
from .sampling import derive_seeds, sample


@dataclass(frozen=True)
class LmcConfig:
    """Fold count, surrogate-only sample count, and surrogate settings."""

    s_folds: int = 5
    m: int = 10_000
    lambda_strategy: object = field(default_factory=CrossValidation)
    transform: object = IDENTITY

    def __post_init__(self):
        if self.s_folds < 2:
            raise ParameterError(f"S must be >= 2, got {self.s_folds}")
        if self.m < 2:
            raise ParameterError(f"M must be >= 2, got {self.m}")


@dataclass
class FoldSummary:
    """Per-fold surrogate descriptor: regularisation and sparsity."""

    lam: float = None
    nonzeros: int = None


@dataclass
class LmcResult:
    """Averaged S-fold estimates plus per-fold detail.

    `mean` and `variance` are the plain averages of `fold_estimates`.
    `mc_mean` / `mc_variance` carry the simple-MC estimates on the same N
    samples when the runner computed them (side-by-side reporting).
    """

    mean: float
    variance: float
    fold_estimates: list
    fold_models: list
    mc_mean: float = None
    mc_variance: float = None
    diagnostics: dict = field(default_factory=dict)


def fold_indices(n, s_folds):
    """Contiguous S-fold split of range(n): list of (train_idx, eval_idx)."""
    if n % s_folds != 0:
        raise ParameterError(f"S = {s_folds} does not divide N = {n}")
    size = n // s_folds
    out = []
    idx = np.arange(n)
    for s in range(s_folds):
        eval_idx = idx[s * size : (s + 1) * size]
        train_idx = np.concatenate([idx[: s * size], idx[(s + 1) * size :]])
        out.append((train_idx, eval_idx))
    return out


def lmc_estimate(v_inputs, v_outputs, w_inputs, cfg, trainer):
    """Run the S-fold estimator on an already-evaluated sample set V.

    `v_outputs` are the N true-model values (the whole budget); `w_inputs`
    is the shared surrogate-only set, disjoint from V and drawn from the
    same distribution. Consumes no further true-model evaluations.
    """
    v_inputs = np.asarray(v_inputs, dtype=float)
    v_outputs = np.asarray(v_outputs, dtype=float)
    w_inputs = np.asarray(w_inputs, dtype=float)
    n = v_inputs.shape[0]
    s_folds = cfg.s_folds
    if v_outputs.shape != (n,):
        raise ParameterError(f"outputs shape {v_outputs.shape} != ({n},)")
    if n % s_folds != 0:
        raise ParameterError(f"S = {s_folds} does not divide N = {n}")
    if n < 2 * s_folds:
        raise ParameterError(
            f"N = {n} too small: each of the {s_folds} folds needs >= 2 points"
        )
    m = w_inputs.shape[0]
    if m < 10 * n:
        warnings.warn(
            f"surrogate-only set is small (M = {m} < 10 N = {10 * n}); "
            "its variance term may not be negligible",
            stacklevel=2,
        )

    fold_estimates = []
    fold_models = []
    fold_checks = []
    for s, (train_idx, eval_idx) in enumerate(fold_indices(n, s_folds)):
        try:
            model = trainer(v_inputs[train_idx], v_outputs[train_idx])
        except Exception as exc:
            raise TrainingError(f"surrogate training failed on fold {s}") from exc
        f_eval = v_outputs[eval_idx]
        s_eval = np.asarray(model(v_inputs[eval_idx]), dtype=float)
        s_big = np.asarray(model(w_inputs), dtype=float)
        fold_estimates.append(
            (
                two_level_mean(f_eval, s_eval, s_big),
                two_level_variance(f_eval, s_eval, s_big),
            )
        )
        fold_models.append(
            FoldSummary(
                lam=getattr(model, "lam", None),
                nonzeros=getattr(model, "nonzeros", None),
            )
        )
        if f_eval.size >= 4:
            stats = estimate_moment_stats(f_eval, s_eval)
            fold_checks.append(
                superiority_conditions(stats, n, train_idx.size)
            )

    mean = float(np.mean([e[0] for e in fold_estimates]))
    variance = float(np.mean([e[1] for e in fold_estimates]))
    return LmcResult(
        mean=mean,
        variance=variance,
        fold_estimates=fold_estimates,
        fold_models=fold_models,
        diagnostics={
            "fold_conditions": fold_checks,
            "negative_variance": variance < 0.0,
        },
    )


def lmc_run(problem, n, cfg, seed, trainer=None):
    """Sample, evaluate the true model N times, and run the S-fold estimator.

    V (size N) and W (size cfg.m) come from independent derived seeds. The
    simple-MC estimates on V are attached to the result for side-by-side
    reporting. When no trainer is given, a Lasso trainer is built from the
    config's lambda strategy and feature transform.
    """
    v_seed, w_seed = derive_seeds(seed, 2)
    v = sample(problem.distribution, n, v_seed)
    w = sample(problem.distribution, cfg.m, w_seed)
    y = np.asarray(problem(v.inputs), dtype=float)
    if trainer is None:
        trainer = LassoTrainer(strategy=cfg.lambda_strategy, transform=cfg.transform)
    result = lmc_estimate(v.inputs, y, w.inputs, cfg, trainer)
    result.mc_mean = mc_mean(y)
    result.mc_variance = mc_variance(y)
    return result

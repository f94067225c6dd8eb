"""Mean/variance estimators: simple MC, surrogate-only, two-level, and the
static / adaptive / biased multifidelity strategies built on them.

Cost accounting convention: `budget_N` counts evaluations of the true model
only; surrogate training and evaluation are treated as free. Two-level
variance estimates may legitimately come out negative and are returned
unclipped (a diagnostic flag is set instead).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, ParameterError, ShapeError
from .sampling import derive_seeds, sample

# ---------------------------------------------------------------------------
# basic sample estimators
# ---------------------------------------------------------------------------


def mc_mean(y):
    """Arithmetic mean of the sample."""
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise ShapeError("mean of an empty sample")
    return float(y.mean())


def mc_variance(y):
    """Unbiased sample variance (divisor N - 1)."""
    y = np.asarray(y, dtype=float)
    if y.size < 2:
        raise DegenerateInputError("variance needs at least 2 points")
    return float(y.var(ddof=1))


def _paired(f_eval, s_eval):
    f_eval = np.asarray(f_eval, dtype=float)
    s_eval = np.asarray(s_eval, dtype=float)
    if f_eval.shape != s_eval.shape:
        raise ShapeError(
            f"paired evaluations differ in shape: {f_eval.shape} vs {s_eval.shape}"
        )
    return f_eval, s_eval


def two_level_mean(f_eval, s_eval, s_big):
    """mean(s_big) + mean(f_eval) - mean(s_eval).

    `f_eval` and `s_eval` must be true/surrogate values on the same inputs;
    `s_big` holds surrogate values on an independent input set.
    """
    f_eval, s_eval = _paired(f_eval, s_eval)
    return mc_mean(s_big) + mc_mean(f_eval) - mc_mean(s_eval)


def two_level_variance(f_eval, s_eval, s_big):
    """var(s_big) + var(f_eval) - var(s_eval); may be negative."""
    f_eval, s_eval = _paired(f_eval, s_eval)
    return mc_variance(s_big) + mc_variance(f_eval) - mc_variance(s_eval)


# ---------------------------------------------------------------------------
# plug-in moment statistics and estimated MSEs
# ---------------------------------------------------------------------------


@dataclass
class MomentStats:
    """Plug-in moments of paired (f, s) evaluations.

    Central fourth moments use the 1/N plug-in convention; variances and
    the covariance use the unbiased N-1 divisor. Sample fourth moments can
    violate m4 >= var^2; that is reported, not rejected.
    """

    var_f: float
    var_s: float
    var_diff: float
    cov_fs: float
    m4_f: float
    m4_s: float
    m22_plus_minus: float
    var_plus: float
    var_minus: float
    n: int


def estimate_moment_stats(f_eval, s_eval):
    """Estimate all MomentStats fields from paired evaluations (N >= 4)."""
    f_eval, s_eval = _paired(f_eval, s_eval)
    n = f_eval.size
    if n < 4:
        raise DegenerateInputError(f"moment statistics need N >= 4, got {n}")
    fc = f_eval - f_eval.mean()
    sc = s_eval - s_eval.mean()
    plus = f_eval + s_eval
    minus = f_eval - s_eval
    pc = plus - plus.mean()
    mc = minus - minus.mean()
    return MomentStats(
        var_f=float(fc @ fc / (n - 1)),
        var_s=float(sc @ sc / (n - 1)),
        var_diff=float(mc @ mc / (n - 1)),
        cov_fs=float(fc @ sc / (n - 1)),
        m4_f=float((fc**4).mean()),
        m4_s=float((sc**4).mean()),
        m22_plus_minus=float((pc**2 * mc**2).mean()),
        var_plus=float(pc @ pc / (n - 1)),
        var_minus=float(mc @ mc / (n - 1)),
        n=n,
    )


def estimate_mse_mean(stats, n_eval, m):
    """Estimated MSE of the two-level mean: Var[s]/M + Var[f-s]/N_eval."""
    if n_eval < 1 or m < 1:
        raise ParameterError("n_eval and m must be >= 1")
    return stats.var_s / m + stats.var_diff / n_eval


def estimate_mse_variance(stats, n_eval, m):
    """Estimated MSE of the two-level variance estimator.

    (1/M)(m4[s] - (M-3)/(M-1) Var^2[s])
      + (1/N)(m22[f+s, f-s] + Var[f+s] Var[f-s]/(N-1)
              - (N-2)/(N-1) (Var[f] - Var[s])^2)   with N = n_eval.
    """
    if n_eval < 3:
        raise ParameterError(f"n_eval must be >= 3, got {n_eval}")
    if m < 4:
        raise ParameterError(f"m must be >= 4, got {m}")
    m_term = (stats.m4_s - (m - 3) / (m - 1) * stats.var_s**2) / m
    n_term = (
        stats.m22_plus_minus
        + stats.var_plus * stats.var_minus / (n_eval - 1)
        - (n_eval - 2) / (n_eval - 1) * (stats.var_f - stats.var_s) ** 2
    ) / n_eval
    return m_term + n_term


def superiority_conditions(stats, n_total, n_train):
    """Theory diagnostics: when the two-level estimator beats simple MC.

    Evaluates both plug-in inequalities (mean and variance form) for a
    split of n_total samples with n_train used for training. Logged only;
    never used to gate estimation.
    """
    n_eval = n_total - n_train
    if n_eval < 2:
        # degenerate split (e.g. deliberate full reuse): conditions undefined
        return {"mean_condition_holds": None, "var_condition_holds": None}
    ratio = n_total / n_eval
    mean_rhs = (
        stats.var_f / stats.var_diff if stats.var_diff > 0 else float("inf")
    )
    var_den = (
        stats.m22_plus_minus
        + stats.var_plus * stats.var_minus / (n_eval - 1)
        - (n_eval - 2) / (n_eval - 1) * (stats.var_f - stats.var_s) ** 2
    )
    var_num = stats.m4_f - (n_total - 3) / (n_total - 1) * stats.var_f**2
    var_rhs = var_num / var_den if var_den > 0 else float("inf")
    return {
        "mean_condition_lhs": ratio,
        "mean_condition_rhs": mean_rhs,
        "mean_condition_holds": ratio <= mean_rhs,
        "var_condition_lhs": ratio,
        "var_condition_rhs": var_rhs,
        "var_condition_holds": ratio <= var_rhs,
    }


# ---------------------------------------------------------------------------
# estimation strategies
# ---------------------------------------------------------------------------


@dataclass
class EstimateResult:
    """Mean/variance estimate with its cost accounting and diagnostics."""

    mean: float
    variance: float
    budget_N: int
    surrogate_eval_M: int
    chosen_n: int = None
    est_mse_mean: float = None
    est_mse_var: float = None
    diagnostics: dict = field(default_factory=dict)


def _draw_sets(problem, n, m, seed):
    v_seed, w_seed = derive_seeds(seed, 2)
    v = sample(problem.distribution, n, v_seed)
    w = sample(problem.distribution, m, w_seed)
    return v, w


def simple_mc(problem, n, seed):
    """Plain Monte Carlo baseline at budget n."""
    v_seed, _ = derive_seeds(seed, 2)
    v = sample(problem.distribution, n, v_seed)
    y = np.asarray(problem(v.inputs), dtype=float)
    return EstimateResult(
        mean=mc_mean(y), variance=mc_variance(y), budget_N=n, surrogate_eval_M=0
    )


def surrogate_only(problem, n, m, trainer, seed):
    """Train on all n samples, estimate moments from m surrogate draws."""
    v, w = _draw_sets(problem, n, m, seed)
    y = np.asarray(problem(v.inputs), dtype=float)
    model = trainer(v.inputs, y)
    s_big = np.asarray(model(w.inputs), dtype=float)
    return EstimateResult(
        mean=mc_mean(s_big),
        variance=mc_variance(s_big),
        budget_N=n,
        surrogate_eval_M=m,
        chosen_n=n,
    )


def _two_level_result(f_eval, s_eval, s_big, n_total, n_train, m):
    mean = two_level_mean(f_eval, s_eval, s_big)
    var = two_level_variance(f_eval, s_eval, s_big)
    diag = {"negative_variance": var < 0.0}
    est_mean = est_var = None
    if f_eval.size >= 4:
        stats = estimate_moment_stats(f_eval, s_eval)
        est_mean = estimate_mse_mean(stats, f_eval.size, m)
        est_var = estimate_mse_variance(stats, f_eval.size, m)
        diag.update(superiority_conditions(stats, n_total, n_train))
    return EstimateResult(
        mean=mean,
        variance=var,
        budget_N=n_total,
        surrogate_eval_M=m,
        chosen_n=n_train,
        est_mse_mean=est_mean,
        est_mse_var=est_var,
        diagnostics=diag,
    )


def static_mfmc(problem, n, split_fraction, m, trainer, seed):
    """Two-level estimation with a fixed train/evaluate split of the budget."""
    if not 0.0 < split_fraction < 1.0:
        raise ParameterError(f"split_fraction must be in (0, 1), got {split_fraction}")
    n_train = int(np.floor(split_fraction * n))
    if n_train < 2 or n - n_train < 2:
        raise ParameterError(
            f"split leaves too few samples: train {n_train}, eval {n - n_train}"
        )
    v, w = _draw_sets(problem, n, m, seed)
    y = np.asarray(problem(v.inputs), dtype=float)
    model = trainer(v.inputs[:n_train], y[:n_train])
    f_eval = y[n_train:]
    s_eval = np.asarray(model(v.inputs[n_train:]), dtype=float)
    s_big = np.asarray(model(w.inputs), dtype=float)
    return _two_level_result(f_eval, s_eval, s_big, n, n_train, m)


def adaptive_mfmc(problem, n, candidate_fractions, m, trainer, seed):
    """Pick the train/evaluate split with the smallest estimated MSE.

    True-model outputs are computed once and shared across candidates. The
    mean and variance estimates may select different splits; both are
    recorded (`chosen_n` carries the mean's choice).
    """
    fractions = list(candidate_fractions)
    if not fractions:
        raise ParameterError("candidate fraction list is empty")
    v, w = _draw_sets(problem, n, m, seed)
    y = np.asarray(problem(v.inputs), dtype=float)

    candidates = {}
    for frac in fractions:
        if not 0.0 < frac < 1.0:
            raise ParameterError(f"candidate fraction {frac} outside (0, 1)")
        n_train = int(np.floor(frac * n))
        if n_train < 2 or n - n_train < 4:
            raise ParameterError(
                f"fraction {frac} leaves too few samples (train {n_train})"
            )
        if n_train in candidates:
            continue
        model = trainer(v.inputs[:n_train], y[:n_train])
        f_eval = y[n_train:]
        s_eval = np.asarray(model(v.inputs[n_train:]), dtype=float)
        stats = estimate_moment_stats(f_eval, s_eval)
        candidates[n_train] = (
            model,
            f_eval,
            s_eval,
            estimate_mse_mean(stats, n - n_train, m),
            estimate_mse_variance(stats, n - n_train, m),
        )

    n_mean = min(candidates, key=lambda k: candidates[k][3])
    n_var = min(candidates, key=lambda k: candidates[k][4])

    def _estimate(n_train, which):
        model, f_eval, s_eval, _, _ = candidates[n_train]
        s_big = np.asarray(model(w.inputs), dtype=float)
        if which == "mean":
            return two_level_mean(f_eval, s_eval, s_big)
        return two_level_variance(f_eval, s_eval, s_big)

    mean = _estimate(n_mean, "mean")
    var = _estimate(n_var, "var")
    return EstimateResult(
        mean=mean,
        variance=var,
        budget_N=n,
        surrogate_eval_M=m,
        chosen_n=n_mean,
        est_mse_mean=candidates[n_mean][3],
        est_mse_var=candidates[n_var][4],
        diagnostics={
            "chosen_n_mean": n_mean,
            "chosen_n_var": n_var,
            "negative_variance": var < 0.0,
        },
    )


def biased_mfmc(problem, n, m, trainer, seed):
    """Deliberately reuse all n samples for both training and evaluation.

    This violates the independence the two-level correction needs and is
    kept as the negative control demonstrating training-set reuse bias.
    """
    if n < 4:
        raise ParameterError(f"biased MFMC needs n >= 4, got {n}")
    v, w = _draw_sets(problem, n, m, seed)
    y = np.asarray(problem(v.inputs), dtype=float)
    model = trainer(v.inputs, y)
    s_eval = np.asarray(model(v.inputs), dtype=float)
    s_big = np.asarray(model(w.inputs), dtype=float)
    return _two_level_result(y, s_eval, s_big, n, n, m)

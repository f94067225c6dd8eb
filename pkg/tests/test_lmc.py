import numpy as np
import pytest

from lassomc.errors import ParameterError, TrainingError
from lassomc.estimators import mc_mean, mc_variance, two_level_mean
from lassomc.lasso import FixedLambda, LassoTrainer
from lassomc.lmc import LmcConfig, fold_indices, lmc_estimate, lmc_run
from lassomc.problems import linear_problem
from lassomc.sampling import derive_seeds, normal_distribution, sample


def zero_model_trainer(x, y):
    return lambda z: np.zeros(np.atleast_2d(z).shape[0])


class CountingProblem:
    def __init__(self, inner):
        self.inner = inner
        self.calls = 0
        self.name = inner.name
        self.distribution = inner.distribution

    def __call__(self, x):
        self.calls += int(np.atleast_2d(x).shape[0])
        return self.inner(x)

    def reference(self):
        return self.inner.reference()


def random_instance(rng, n=40, d=6, m=800):
    v = rng.normal(size=(n, d))
    y = rng.normal(size=n)
    w = rng.normal(size=(m, d))
    return v, y, w


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------


def test_fold_sizes_match_published_example():
    folds = fold_indices(500, 5)
    assert len(folds) == 5
    for train_idx, eval_idx in folds:
        assert eval_idx.size == 100
        assert train_idx.size == 400


def test_folds_are_disjoint_and_cover():
    for train_idx, eval_idx in fold_indices(30, 5):
        assert np.intersect1d(train_idx, eval_idx).size == 0
        assert np.union1d(train_idx, eval_idx).size == 30


def test_s_must_divide_n():
    with pytest.raises(ParameterError):
        fold_indices(101, 5)
    cfg = LmcConfig(s_folds=5, m=100)
    rng = np.random.default_rng(0)
    v, y, w = random_instance(rng, n=42)
    with pytest.raises(ParameterError):
        lmc_estimate(v, y, w, cfg, zero_model_trainer)


def test_each_fold_needs_two_eval_points():
    rng = np.random.default_rng(0)
    v, y, w = random_instance(rng, n=5)
    with pytest.raises(ParameterError):
        lmc_estimate(v, y, w, LmcConfig(s_folds=5, m=100), zero_model_trainer)


def test_small_m_warns():
    rng = np.random.default_rng(0)
    v, y, w = random_instance(rng, n=40, m=100)
    with pytest.warns(UserWarning, match="surrogate-only set is small"):
        lmc_estimate(v, y, w, LmcConfig(s_folds=5, m=100), zero_model_trainer)


def test_training_failure_carries_fold_index():
    rng = np.random.default_rng(0)
    v, y, w = random_instance(rng)

    def failing_trainer(x, yy):
        raise RuntimeError("boom")

    with pytest.raises(TrainingError, match="fold 0"):
        lmc_estimate(v, y, w, LmcConfig(s_folds=4, m=800), failing_trainer)


# ---------------------------------------------------------------------------
# estimator identities
# ---------------------------------------------------------------------------


def test_zero_surrogate_collapse():
    """With null surrogates every fold's correction cancels termwise.

    The mean collapses to simple MC on V exactly; the variance is the
    average of the per-fold sample variances (the S-fold form of the
    simple-MC estimator, identical in expectation).
    """
    rng = np.random.default_rng(10)
    v, y, w = random_instance(rng, n=50, d=3)
    res = lmc_estimate(v, y, w, LmcConfig(s_folds=5, m=800), zero_model_trainer)
    assert res.mean == pytest.approx(mc_mean(y), rel=1e-13)
    fold_vars = [mc_variance(y[10 * s : 10 * (s + 1)]) for s in range(5)]
    assert res.variance == pytest.approx(np.mean(fold_vars), rel=1e-13)


def test_shared_surrogate_reproduces_single_two_level_mean():
    # identical surrogates across folds: the fold average telescopes into
    # one two-level estimator over all of V
    rng = np.random.default_rng(11)
    for trial in range(20):
        n, d = 40, 4
        v = rng.normal(size=(n, d))
        y = rng.normal(size=n)
        w = rng.normal(size=(2000, d))
        beta = rng.normal(size=d)
        shared = lambda z: np.atleast_2d(z) @ beta  # noqa: E731
        res = lmc_estimate(
            v, y, w, LmcConfig(s_folds=5, m=2000), lambda x, yy: shared
        )
        single = two_level_mean(y, shared(v), shared(w))
        assert res.mean == pytest.approx(single, rel=1e-12)


def test_interpolating_folds_leave_surrogate_variance_on_w():
    # noiseless linear data with n_train > d: every fold recovers the exact
    # weights, the f - s terms vanish, and the LMC variance equals the
    # W-sample variance of f (itself a consistent estimate of sum alpha^2)
    problem = linear_problem(5)
    cfg = LmcConfig(s_folds=5, m=20_000, lambda_strategy=FixedLambda(0.0))
    res = lmc_run(problem, 50, cfg, seed=77)
    _, w_seed = derive_seeds(77, 2)
    w = sample(problem.distribution, cfg.m, w_seed)
    w_var = mc_variance(problem(w.inputs))
    assert res.variance == pytest.approx(w_var, abs=1e-6)
    true_var = problem.reference().variance  # analytic oracle
    stderr = np.sqrt(2.0 / cfg.m) * true_var
    assert abs(w_var - true_var) < 4 * stderr


def test_zero_variance_inputs_give_exact_point_estimate():
    problem = linear_problem(3)
    cfg = LmcConfig(s_folds=5, m=500, lambda_strategy=FixedLambda(0.0))

    class PointMass:
        name = "point"
        distribution = normal_distribution([1.0, 2.0, 3.0], 0.0)

        def __call__(self, x):
            return problem(x)

    res = lmc_run(PointMass(), 20, cfg, seed=5)
    x0 = np.array([1.0, 2.0, 3.0])
    assert res.mean == pytest.approx(float(problem(x0)))
    assert res.variance == pytest.approx(0.0, abs=1e-20)


def test_budget_is_exactly_n():
    counting = CountingProblem(linear_problem(4))
    cfg = LmcConfig(s_folds=5, m=1000, lambda_strategy=FixedLambda(0.0))
    lmc_run(counting, 50, cfg, seed=3)
    assert counting.calls == 50


def test_run_reports_simple_mc_side_by_side():
    problem = linear_problem(4)
    cfg = LmcConfig(s_folds=5, m=1000, lambda_strategy=FixedLambda(0.0))
    res = lmc_run(problem, 50, cfg, seed=21)
    v_seed, _ = derive_seeds(21, 2)
    y = problem(sample(problem.distribution, 50, v_seed).inputs)
    assert res.mc_mean == pytest.approx(mc_mean(y))
    assert res.mc_variance == pytest.approx(mc_variance(y))


def test_fold_models_record_lambda_and_sparsity():
    problem = linear_problem(4)
    cfg = LmcConfig(s_folds=5, m=1000, lambda_strategy=FixedLambda(0.1))
    res = lmc_run(problem, 50, cfg, seed=2)
    assert len(res.fold_models) == 5
    for summary in res.fold_models:
        assert summary.lam == pytest.approx(0.1)
        assert 0 <= summary.nonzeros <= 4


def test_ensemble_unbiasedness_with_shuffled_folds():
    # shuffling V before folding only permutes fold assignment; over an
    # ensemble of fresh datasets + shuffles the estimates stay unbiased
    problem = linear_problem(8)
    cfg = LmcConfig(s_folds=4, m=2000, lambda_strategy=FixedLambda(0.5))
    trainer = LassoTrainer(strategy=FixedLambda(0.5))
    rng = np.random.default_rng(999)
    means, variances = [], []
    for r in range(150):
        v_seed, w_seed = derive_seeds(5000 + r, 2)
        v = sample(problem.distribution, 40, v_seed)
        y = problem(v.inputs)
        w = sample(problem.distribution, cfg.m, w_seed)
        perm = rng.permutation(40)
        res = lmc_estimate(v.inputs[perm], y[perm], w.inputs, cfg, trainer)
        means.append(res.mean)
        variances.append(res.variance)
    ref = problem.reference()
    means = np.array(means)
    variances = np.array(variances)
    mean_stderr = means.std(ddof=1) / np.sqrt(len(means))
    var_stderr = variances.std(ddof=1) / np.sqrt(len(variances))
    assert abs(means.mean() - ref.mean) <= 4 * mean_stderr
    assert abs(variances.mean() - ref.variance) <= 4 * var_stderr


def test_result_is_the_average_of_fold_estimates():
    rng = np.random.default_rng(77)
    v, y, w = random_instance(rng, n=40, d=5)
    trainer = LassoTrainer(strategy=FixedLambda(0.2))
    res = lmc_estimate(v, y, w, LmcConfig(s_folds=4, m=800), trainer)
    assert res.mean == pytest.approx(np.mean([e[0] for e in res.fold_estimates]))
    assert res.variance == pytest.approx(np.mean([e[1] for e in res.fold_estimates]))
    assert len(res.fold_estimates) == 4


def test_assumption_diagnostics_logged_per_fold():
    problem = linear_problem(4)
    cfg = LmcConfig(s_folds=5, m=1000, lambda_strategy=FixedLambda(0.0))
    res = lmc_run(problem, 50, cfg, seed=8)
    assert len(res.diagnostics["fold_conditions"]) == 5
    for cond in res.diagnostics["fold_conditions"]:
        assert "mean_condition_holds" in cond

"""Lasso Monte Carlo and multifidelity estimators for high-dimensional UQ."""

from . import errors, estimators, harness, lasso, lmc, pce, problems, sampling
from ._rk45 import rk45_integrate
from .estimators import (
    EstimateResult,
    MomentStats,
    adaptive_mfmc,
    biased_mfmc,
    estimate_moment_stats,
    estimate_mse_mean,
    estimate_mse_variance,
    mc_mean,
    mc_variance,
    simple_mc,
    static_mfmc,
    surrogate_only,
    two_level_mean,
    two_level_variance,
)
from .harness import ConvergenceRecord, ExperimentConfig, run_experiment, summarize
from .lasso import (
    AbsShift,
    CrossValidation,
    FixedLambda,
    LassoModel,
    LassoTrainer,
    SparsityTarget,
    TrainConfig,
    fit,
    fit_path,
    lambda_max,
    predict,
    select_lambda_cv,
    select_lambda_sparsity,
)
from .lmc import LmcConfig, LmcResult, lmc_estimate, lmc_run
from .pce import PceBasis, PceModel, build_basis, pce_fit, pce_moments
from .problems import (
    FputProblem,
    LinearProblem,
    ReferenceMoments,
    SobolProblem,
    fput_problem,
    fput_qoi,
    fput_rhs,
    linear_problem,
    sobol_problem,
    sobol_transform,
)
from .sampling import (
    InputDistribution,
    SampleSet,
    center_columns,
    derive_seeds,
    normal_distribution,
    sample,
    uniform_distribution,
)

__version__ = "0.1.0"

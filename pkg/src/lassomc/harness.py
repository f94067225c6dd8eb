"""Convergence-study driver: run each method over a budget ladder with
repeated seeds, compute relative errors against reference moments, and
serialise records to CSV/JSON.

Determinism contract: a config fully determines the output files. Records
are sorted by (problem, method, N, repeat) before writing, and the
wall-time column is excluded from files unless explicitly requested, so
re-running a config reproduces the bytes.
"""

import json
import time
import warnings
from dataclasses import dataclass, field, fields

import numpy as np

from . import estimators, lasso, pce, problems
from .errors import ConfigError, ParameterError
from .lmc import LmcConfig, lmc_run
from .sampling import derive_seeds, sample

METHODS = (
    "mc",
    "lasso_surrogate",
    "lmc",
    "static_mfmc",
    "adaptive_mfmc",
    "biased_mfmc",
    "pce",
)

_METHOD_ALIASES = {
    "lasso": "lasso_surrogate",
    "static-mfmc": "static_mfmc",
    "adaptive-mfmc": "adaptive_mfmc",
    "biased-mfmc": "biased_mfmc",
}


def canonical_method(name):
    name = name.strip()
    name = _METHOD_ALIASES.get(name, name)
    if name not in METHODS:
        raise ConfigError(f"unknown method {name!r}; known: {', '.join(METHODS)}")
    return name


def make_problem(problem_id, dim=None):
    """Look up a benchmark problem by id ('linear', 'sobol', 'fput')."""
    if problem_id == "linear":
        return problems.linear_problem(dim or 400)
    if problem_id == "sobol":
        return problems.sobol_problem(dim or 400)
    if problem_id == "fput":
        return problems.fput_problem(p=(dim - 1) if dim else 40)
    raise ConfigError(f"unknown problem {problem_id!r}; known: linear, sobol, fput")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a convergence study needs; see the CLI for the flag names."""

    problem: str = "linear"
    dim: int = None
    methods: tuple = ("mc", "lmc")
    budgets: tuple = (50, 100, 200)
    repeats: int = 20
    s_folds: int = 5
    big_m: int = 10_000
    lambda_strategy: object = field(default_factory=lasso.CrossValidation)
    transform: object = lasso.IDENTITY
    split_fraction: float = 0.8
    candidate_fractions: tuple = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    pce_degree: int = 3
    base_seed: int = 42
    out: str = None
    json_out: str = None

    def __post_init__(self):
        methods = tuple(canonical_method(m) for m in self.methods)
        object.__setattr__(self, "methods", methods)
        budgets = tuple(int(b) for b in self.budgets)
        if list(budgets) != sorted(budgets):
            raise ConfigError("budgets must be ascending")
        object.__setattr__(self, "budgets", budgets)
        if self.repeats < 2:
            raise ConfigError("repeats must be >= 2")
        if "lmc" in methods:
            bad = [b for b in budgets if b % self.s_folds != 0]
            if bad:
                raise ParameterError(
                    f"budgets {bad} are not divisible by S = {self.s_folds}"
                )


@dataclass
class ConvergenceRecord:
    """One CSV row: a single method evaluation at one budget and seed."""

    problem: str
    method: str
    N: int
    repeat_index: int
    mean_est: float
    var_est: float
    rel_err_mean: float
    rel_err_std: float
    mean_err_is_absolute: bool
    chosen_n: int = None
    wall_time_ms: float = 0.0


RECORD_FIELDS = [f.name for f in fields(ConvergenceRecord)]


def relative_errors(mean_est, var_est, ref):
    """Error metrics: |mu - E|/|E| and |sqrt(max(s2,0)) - std|/std.

    When the reference mean is exactly zero the mean error falls back to
    the absolute error, flagged by the returned boolean.
    """
    if ref.mean == 0.0:
        rel_mean, is_abs = abs(mean_est), True
    else:
        rel_mean, is_abs = abs((mean_est - ref.mean) / ref.mean), False
    est_std = np.sqrt(max(var_est, 0.0))
    if ref.std == 0.0:
        rel_std = abs(est_std)
    else:
        rel_std = abs((est_std - ref.std) / ref.std)
    return float(rel_mean), float(rel_std), is_abs


def _run_method(method, problem, n, cfg, seed):
    """Dispatch one (method, budget, seed) run; returns an EstimateResult-like."""
    trainer = lasso.LassoTrainer(strategy=cfg.lambda_strategy, transform=cfg.transform)
    if method == "mc":
        return estimators.simple_mc(problem, n, seed)
    if method == "lasso_surrogate":
        return estimators.surrogate_only(problem, n, cfg.big_m, trainer, seed)
    if method == "static_mfmc":
        return estimators.static_mfmc(
            problem, n, cfg.split_fraction, cfg.big_m, trainer, seed
        )
    if method == "adaptive_mfmc":
        return estimators.adaptive_mfmc(
            problem, n, cfg.candidate_fractions, cfg.big_m, trainer, seed
        )
    if method == "biased_mfmc":
        return estimators.biased_mfmc(problem, n, cfg.big_m, trainer, seed)
    if method == "lmc":
        lmc_cfg = LmcConfig(
            s_folds=cfg.s_folds,
            m=cfg.big_m,
            lambda_strategy=cfg.lambda_strategy,
            transform=cfg.transform,
        )
        res = lmc_run(problem, n, lmc_cfg, seed)
        return estimators.EstimateResult(
            mean=res.mean,
            variance=res.variance,
            budget_N=n,
            surrogate_eval_M=cfg.big_m,
            diagnostics=res.diagnostics,
        )
    if method == "pce":
        v_seed, _ = derive_seeds(seed, 2)
        v = sample(problem.distribution, n, v_seed)
        y = problem(v.inputs)
        family = (
            pce.LEGENDRE
            if problem.distribution.kind == "uniform"
            else pce.HERMITE
        )
        basis = pce.build_basis(problem.distribution.dim, cfg.pce_degree, family)
        model = pce.pce_fit(v.inputs, y, basis, cfg.lambda_strategy)
        mean, variance = pce.pce_moments(model)
        return estimators.EstimateResult(
            mean=mean, variance=variance, budget_N=n, surrogate_eval_M=0
        )
    raise ConfigError(f"unknown method {method!r}")


def run_experiment(cfg, problem=None, reference=None):
    """Run the full (method, budget, repeat) grid of a config.

    Repeat r of any method at any budget uses seed = base_seed + r, so all
    methods see the same data at the same repeat index. An instantiated
    `problem` (and its `reference`) may be injected, e.g. for counting
    true-model calls in tests; otherwise the config's id is looked up.
    """
    if problem is None:
        problem = make_problem(cfg.problem, cfg.dim)
    if reference is None:
        reference = problem.reference()
    records = []
    for method in cfg.methods:
        for n in cfg.budgets:
            for r in range(cfg.repeats):
                seed = cfg.base_seed + r
                start = time.perf_counter()
                est = _run_method(method, problem, n, cfg, seed)
                elapsed_ms = (time.perf_counter() - start) * 1e3
                rel_mean, rel_std, is_abs = relative_errors(
                    est.mean, est.variance, reference
                )
                records.append(
                    ConvergenceRecord(
                        problem=problem.name,
                        method=method,
                        N=n,
                        repeat_index=r,
                        mean_est=est.mean,
                        var_est=est.variance,
                        rel_err_mean=rel_mean,
                        rel_err_std=rel_std,
                        mean_err_is_absolute=is_abs,
                        chosen_n=est.chosen_n,
                        wall_time_ms=elapsed_ms,
                    )
                )
    records.sort(key=lambda rec: (rec.problem, rec.method, rec.N, rec.repeat_index))
    return records


# ---------------------------------------------------------------------------
# summaries
# ---------------------------------------------------------------------------


@dataclass
class SummaryRow:
    """Per (problem, method, N) group statistics over repeats."""

    problem: str
    method: str
    N: int
    repeats: int
    rel_err_mean_avg: float
    rel_err_mean_std: float
    rel_err_std_avg: float
    rel_err_std_std: float
    mean_est_avg: float
    mse_mean: float
    var_est_avg: float
    mse_var: float


SUMMARY_FIELDS = [f.name for f in fields(SummaryRow)]


def summarize(records, reference=None):
    """Group records by (problem, method, N) and aggregate.

    Reports mean/std (divisor n-1) of both relative errors, plus the mean
    and the empirical MSE of the raw estimates when a reference is given.
    Groups with fewer than 2 records are skipped with a warning.
    """
    groups = {}
    for rec in records:
        groups.setdefault((rec.problem, rec.method, rec.N), []).append(rec)
    rows = []
    for (problem, method, n), recs in sorted(groups.items()):
        if len(recs) < 2:
            warnings.warn(
                f"skipping group ({problem}, {method}, N={n}): "
                f"{len(recs)} record(s) < 2",
                stacklevel=2,
            )
            continue
        rel_m = np.array([r.rel_err_mean for r in recs])
        rel_s = np.array([r.rel_err_std for r in recs])
        means = np.array([r.mean_est for r in recs])
        variances = np.array([r.var_est for r in recs])
        mse_mean = (
            float(np.mean((means - reference.mean) ** 2)) if reference else float("nan")
        )
        mse_var = (
            float(np.mean((variances - reference.variance) ** 2))
            if reference
            else float("nan")
        )
        rows.append(
            SummaryRow(
                problem=problem,
                method=method,
                N=n,
                repeats=len(recs),
                rel_err_mean_avg=float(rel_m.mean()),
                rel_err_mean_std=float(rel_m.std(ddof=1)),
                rel_err_std_avg=float(rel_s.mean()),
                rel_err_std_std=float(rel_s.std(ddof=1)),
                mean_est_avg=float(means.mean()),
                mse_mean=mse_mean,
                var_est_avg=float(variances.mean()),
                mse_var=mse_var,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------


def _format_value(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _row_dicts(rows, include_timing):
    if not rows:
        return [], []
    names = [f.name for f in fields(rows[0])]
    if not include_timing and "wall_time_ms" in names:
        names = [n for n in names if n != "wall_time_ms"]
    return names, [{n: getattr(row, n) for n in names} for row in rows]


def _header_for(kind, include_timing):
    names = RECORD_FIELDS if kind == "records" else SUMMARY_FIELDS
    if not include_timing:
        names = [n for n in names if n != "wall_time_ms"]
    return names


def write_csv(rows, path, include_timing=False, kind="records"):
    """Write rows as CSV with '.' decimals and repr-exact floats.

    Timing is excluded by default so identical configs yield identical
    bytes; pass include_timing=True for cost reports.
    """
    names, dicts = _row_dicts(rows, include_timing)
    if not names:
        names = _header_for(kind, include_timing)
    lines = [",".join(names)]
    for d in dicts:
        lines.append(",".join(_format_value(d[n]) for n in names))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(rows, path, include_timing=False):
    """Write rows as a JSON array of objects with the CSV's keys."""
    _, dicts = _row_dicts(rows, include_timing)
    with open(path, "w") as fh:
        json.dump(dicts, fh, indent=1)
        fh.write("\n")


def read_csv(path):
    """Parse a records/summary CSV back into a list of dicts (typed floats)."""
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    header = lines[0].split(",")
    out = []
    for line in lines[1:]:
        row = {}
        for key, text in zip(header, line.split(",")):
            if text == "":
                row[key] = None
            elif text in ("true", "false"):
                row[key] = text == "true"
            else:
                try:
                    row[key] = int(text)
                except ValueError:
                    try:
                        row[key] = float(text)
                    except ValueError:
                        row[key] = text
        out.append(row)
    return out

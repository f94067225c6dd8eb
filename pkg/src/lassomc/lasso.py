"""Lasso linear surrogates trained by cyclic coordinate descent.

The model is ``s(x) = beta . (zeta(x) - input_offsets) + output_offset``
where ``zeta`` is an optional element-wise feature transform. Training
minimises

    L(beta) = 1/2 * sum_i (y_i - beta . x_i)^2 + lam * ||beta||_1

on transform-then-centered data (no 1/n factor, no variance scaling).
Soft-thresholding produces hard zeros, so ``lam >= lambda_max`` gives an
exactly-zero weight vector.

The descent cycles over all coordinates, then iterates the current active
set to convergence before the next full pass (the usual pathwise speedup);
the stopping rule binds on full passes: stop when the largest absolute
weight change in a full cyclic pass drops below ``tol``.
"""

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import ConvergenceError, ParameterError, ShapeError
from .sampling import center_matrix

# ---------------------------------------------------------------------------
# feature transforms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    """Pass inputs through unchanged."""

    def __call__(self, x):
        return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class AbsShift:
    """Map each coordinate to |x_i - shift| (folds a symmetric input in half)."""

    shift: float = 0.5

    def __call__(self, x):
        return np.abs(np.asarray(x, dtype=float) - self.shift)


IDENTITY = Identity()


# ---------------------------------------------------------------------------
# lambda selection strategies (used by LassoTrainer and the LMC config)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrossValidation:
    """Pick lambda by k-fold cross validation over the default grid."""

    folds: int = 5


@dataclass(frozen=True)
class SparsityTarget:
    """Pick the largest lambda whose fit has at most floor(fraction * n) nonzeros."""

    fraction: float = 0.95


@dataclass(frozen=True)
class FixedLambda:
    """Use a fixed regularisation value."""

    value: float = 0.0


@dataclass(frozen=True)
class TrainConfig:
    """Coordinate-descent and grid settings.

    `tol` of None resolves at fit time to 1e-8 * (1 + max|y|). The lambda
    grid, when not supplied, is 100 log-spaced values from lambda_max down
    to 1e-4 * lambda_max. CV fold shuffling uses its own seed, independent
    of all sampling seeds.
    """

    tol: float = None
    max_iter: int = 100_000
    lambda_grid: np.ndarray = None
    cv_folds: int = 5
    grid_size: int = 100
    grid_span: float = 1e-4
    cv_seed: int = 1_234_567

    def __post_init__(self):
        if self.tol is not None and self.tol <= 0:
            raise ParameterError("tol must be positive")
        if self.cv_folds < 2:
            raise ParameterError("cv_folds must be >= 2")
        if self.lambda_grid is not None:
            g = np.asarray(self.lambda_grid, dtype=float)
            if g.size == 0:
                raise ParameterError("lambda grid is empty")
            if g.size > 1 and not np.all(np.diff(g) < 0):
                raise ParameterError("lambda grid must be strictly descending")
            object.__setattr__(self, "lambda_grid", g)


DEFAULT_CONFIG = TrainConfig()


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------


@dataclass
class LassoModel:
    """Trained surrogate; callable on raw (untransformed) inputs."""

    beta: np.ndarray
    lam: float
    input_offsets: np.ndarray
    output_offset: float
    transform: object = IDENTITY
    n_sweeps: int = 0

    @property
    def nonzeros(self):
        return int(np.count_nonzero(self.beta))

    def predict(self, x):
        x = np.asarray(x, dtype=float)
        squeeze = x.ndim == 1
        z = self.transform(np.atleast_2d(x))
        if z.shape[1] != self.beta.size:
            raise ShapeError(
                f"model has {self.beta.size} features, inputs have {z.shape[1]}"
            )
        out = (z - self.input_offsets) @ self.beta + self.output_offset
        return out[0] if squeeze else out

    __call__ = predict


# ---------------------------------------------------------------------------
# coordinate descent core
# ---------------------------------------------------------------------------


@njit(cache=True)
def _cd_pass(gram, corr, beta, q, lam, active):
    """One cyclic pass over coordinates flagged in `active`.

    `q` carries gram @ beta and is updated in place. Constant (all-zero
    after centering) columns have gram[k, k] == 0 and are skipped, pinning
    their weight at 0. Returns the largest absolute weight change.
    """
    d = beta.shape[0]
    max_delta = 0.0
    for k in range(d):
        if not active[k]:
            continue
        gkk = gram[k, k]
        if gkk <= 0.0:
            continue
        rho = corr[k] - q[k] + gkk * beta[k]
        if rho > lam:
            new = (rho - lam) / gkk
        elif rho < -lam:
            new = (rho + lam) / gkk
        else:
            new = 0.0
        delta = new - beta[k]
        if delta != 0.0:
            beta[k] = new
            for j in range(d):
                q[j] += gram[j, k] * delta
            if abs(delta) > max_delta:
                max_delta = abs(delta)
    return max_delta


@njit(cache=True)
def _cd_solve(gram, corr, beta, q, lam, tol, max_iter):
    """Run passes until a full cyclic pass changes no weight by >= tol.

    Returns (sweeps_used, converged). Between full passes the nonzero set
    is iterated to convergence, which does not change the fixed point.
    """
    d = beta.shape[0]
    full = np.ones(d, dtype=np.bool_)
    active = np.empty(d, dtype=np.bool_)
    sweeps = 0
    while sweeps < max_iter:
        delta = _cd_pass(gram, corr, beta, q, lam, full)
        sweeps += 1
        if delta < tol:
            return sweeps, True
        for k in range(d):
            active[k] = beta[k] != 0.0
        while sweeps < max_iter:
            delta = _cd_pass(gram, corr, beta, q, lam, active)
            sweeps += 1
            if delta < tol:
                break
    return sweeps, False


def cd_objective_trace(z, yc, lam, cfg=DEFAULT_CONFIG):
    """Run the descent loop recording the loss after every pass.

    Mirrors `_cd_solve` (full pass, then active-set passes) but pauses to
    evaluate the objective, so invariants of the real iteration sequence
    can be checked. Returns (beta, [objective per pass]).
    """
    gram = z.T @ z
    corr = z.T @ yc
    d = z.shape[1]
    tol = resolve_tol(yc, cfg, z)
    beta = np.zeros(d)
    q = np.zeros(d)
    full = np.ones(d, dtype=np.bool_)
    active = np.empty(d, dtype=np.bool_)
    history = [objective(z, yc, beta, lam)]
    sweeps = 0
    while sweeps < cfg.max_iter:
        delta = _cd_pass(gram, corr, beta, q, float(lam), full)
        sweeps += 1
        history.append(objective(z, yc, beta, lam))
        if delta < tol:
            return beta, history
        np.not_equal(beta, 0.0, out=active)
        while sweeps < cfg.max_iter:
            delta = _cd_pass(gram, corr, beta, q, float(lam), active)
            sweeps += 1
            history.append(objective(z, yc, beta, lam))
            if delta < tol:
                break
    return beta, history


def _as_centered(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2:
        raise ShapeError(f"design matrix must be 2-d, got shape {x.shape}")
    if y.shape != (x.shape[0],):
        raise ShapeError(f"y has shape {y.shape}, expected ({x.shape[0]},)")
    return x, y


def lambda_max(x, y):
    """Smallest lambda that forces all weights to zero: max_k |sum_i x_ik y_i|.

    Expects centered data (as produced internally by `fit`).
    """
    x, y = _as_centered(x, y)
    return float(np.abs(x.T @ y).max()) if x.shape[1] else 0.0


def default_lambda_grid(lam_max, size=100, span=1e-4):
    """Log-spaced descending grid from lam_max down to span * lam_max."""
    if lam_max <= 0.0:
        return np.zeros(1)
    return np.geomspace(lam_max, span * lam_max, size)


def resolve_tol(y, cfg, z=None):
    """Stopping tolerance in weight units.

    Weights carry units of (output scale / feature scale), so the base
    1e-8 * (1 + max|y|) is divided by the RMS column scale of the centered
    design when one is supplied; on unit-scale features the two coincide.
    """
    if cfg.tol is not None:
        return cfg.tol
    tol = 1e-8 * (1.0 + float(np.abs(y).max()))
    if z is not None and z.size:
        col_ms = np.einsum("ij,ij->j", z, z) / max(z.shape[0], 1)
        scale = float(np.sqrt(col_ms.mean()))
        if scale > 0.0:
            tol /= scale
    return tol


def fit(x, y, lam, cfg=DEFAULT_CONFIG, transform=IDENTITY):
    """Fit a Lasso model at a single regularisation value.

    Inputs are transformed, then features and outputs are centered; the
    offsets are stored on the model so predictions act on raw inputs.
    """
    if lam < 0:
        raise ParameterError(f"lambda must be >= 0, got {lam}")
    x, y = _as_centered(np.atleast_2d(x), y)
    if x.shape[0] < 2:
        raise ParameterError("fitting needs at least 2 rows")
    z, in_off = center_matrix(transform(x))
    yc, out_off = center_matrix(y)
    beta, sweeps, ok, last = _solve_path(z, yc, [float(lam)], cfg)
    if not ok:
        raise ConvergenceError(
            f"coordinate descent did not converge in {cfg.max_iter} sweeps "
            f"(last weight change {last:.3e})",
            iterations=sweeps,
            last_change=last,
        )
    return LassoModel(
        beta=beta[0],
        lam=float(lam),
        input_offsets=in_off,
        output_offset=float(out_off),
        transform=transform,
        n_sweeps=sweeps,
    )


def _solve_path(z, yc, lams, cfg, warm=True):
    """Fit centered data over a descending lambda sequence with warm starts.

    Returns (betas, total_sweeps, converged, last_change).
    """
    gram = z.T @ z
    corr = z.T @ yc
    d = z.shape[1]
    tol = resolve_tol(yc, cfg, z)
    beta = np.zeros(d)
    q = np.zeros(d)
    betas = np.empty((len(lams), d))
    total = 0
    for i, lam in enumerate(lams):
        if not warm:
            beta[:] = 0.0
            q[:] = 0.0
        sweeps, ok = _cd_solve(gram, corr, beta, q, float(lam), tol, cfg.max_iter)
        total += sweeps
        if not ok:
            return betas, total, False, float(tol)
        betas[i] = beta
    return betas, total, True, 0.0


def fit_path(x, y, lams=None, cfg=DEFAULT_CONFIG, transform=IDENTITY, warm=True):
    """Fit the whole regularisation path; returns (lams, list of LassoModel)."""
    x, y = _as_centered(np.atleast_2d(x), y)
    z, in_off = center_matrix(transform(x))
    yc, out_off = center_matrix(y)
    if lams is None:
        lams = (
            cfg.lambda_grid
            if cfg.lambda_grid is not None
            else default_lambda_grid(lambda_max(z, yc), cfg.grid_size, cfg.grid_span)
        )
    lams = np.asarray(lams, dtype=float)
    betas, _, ok, last = _solve_path(z, yc, lams, cfg, warm=warm)
    if not ok:
        raise ConvergenceError(
            f"path fit did not converge in {cfg.max_iter} sweeps",
            iterations=cfg.max_iter,
            last_change=last,
        )
    models = [
        LassoModel(betas[i].copy(), float(lams[i]), in_off, float(out_off), transform)
        for i in range(len(lams))
    ]
    return lams, models


def predict(model, x):
    """Evaluate a trained model on raw inputs (rows)."""
    return model.predict(x)


def objective(z, yc, beta, lam):
    """Lasso loss on centered data: 1/2 ||y - Z beta||^2 + lam ||beta||_1."""
    r = yc - z @ beta
    return 0.5 * float(r @ r) + lam * float(np.abs(beta).sum())


def subgradient_gaps(z, yc, beta, lam):
    """Per-coordinate optimality residuals in natural units.

    For beta_k != 0 the stationarity equation pins beta_k; the gap is the
    distance (in beta units) from beta_k to the value the equation demands.
    For beta_k == 0 the condition is |rho_k| <= lam; the gap is the excess
    max(0, |rho_k| - lam). A converged fit has all gaps ~ tol.
    """
    z = np.asarray(z, dtype=float)
    yc = np.asarray(yc, dtype=float)
    rho = z.T @ (yc - z @ beta)
    x2 = np.einsum("ij,ij->j", z, z)
    gaps = np.empty(beta.size)
    for k in range(beta.size):
        if beta[k] != 0.0:
            if x2[k] <= 0.0:
                gaps[k] = abs(beta[k])
            else:
                gaps[k] = abs(rho[k] - lam * np.sign(beta[k])) / x2[k]
        else:
            gaps[k] = max(0.0, abs(rho[k]) - lam)
    return gaps


# ---------------------------------------------------------------------------
# lambda selection
# ---------------------------------------------------------------------------


def _grid_for(z, yc, cfg):
    if cfg.lambda_grid is not None:
        return cfg.lambda_grid
    return default_lambda_grid(lambda_max(z, yc), cfg.grid_size, cfg.grid_span)


def select_lambda_cv(x, y, cfg=DEFAULT_CONFIG, transform=IDENTITY):
    """Grid lambda minimising mean held-out squared error over k folds.

    Folds are contiguous blocks of a single seeded shuffle. Ties break
    toward the larger lambda (sparser model).
    """
    x, y = _as_centered(np.atleast_2d(x), y)
    n = x.shape[0]
    if cfg.cv_folds > n:
        raise ParameterError(f"cv_folds={cfg.cv_folds} exceeds {n} rows")
    z_all = transform(x)
    grid = _grid_for(center_matrix(z_all)[0], center_matrix(y)[0], cfg)
    order = np.random.Generator(np.random.Philox(key=cfg.cv_seed)).permutation(n)
    bounds = np.linspace(0, n, cfg.cv_folds + 1).astype(int)
    errors = np.zeros(grid.size)
    for f in range(cfg.cv_folds):
        held = order[bounds[f] : bounds[f + 1]]
        train = np.concatenate([order[: bounds[f]], order[bounds[f + 1] :]])
        zt, in_off = center_matrix(z_all[train])
        yt, out_off = center_matrix(y[train])
        betas, _, ok, last = _solve_path(zt, yt, grid, cfg)
        if not ok:
            raise ConvergenceError(
                "cross-validation path did not converge", last_change=last
            )
        preds = (z_all[held] - in_off) @ betas.T + out_off
        errors += np.mean((preds - y[held][:, None]) ** 2, axis=0)
    errors /= cfg.cv_folds
    return float(grid[int(np.argmin(errors))])


def select_lambda_sparsity(x, y, k, cfg=DEFAULT_CONFIG, transform=IDENTITY):
    """Grid lambda whose fit has the nonzero count closest to k from below.

    Scans the descending grid with warm starts until the nonzero count
    first exceeds k; among the fits seen, the best count wins and equal
    counts resolve to the smaller lambda (least shrinkage at the target
    sparsity). k = 0 returns lambda_max, whose fit is exactly null.
    """
    x, y = _as_centered(np.atleast_2d(x), y)
    d = transform(x[:1]).shape[1]
    if not 0 <= k <= d:
        raise ParameterError(f"target nonzero count {k} outside [0, {d}]")
    z, _ = center_matrix(transform(x))
    yc, _ = center_matrix(y)
    grid = _grid_for(z, yc, cfg)
    gram = z.T @ z
    corr = z.T @ yc
    tol = resolve_tol(yc, cfg, z)
    beta = np.zeros(d)
    q = np.zeros(d)
    best_lam, best_nnz = float(grid[0]), -1
    for lam in grid:
        sweeps, ok = _cd_solve(gram, corr, beta, q, float(lam), tol, cfg.max_iter)
        if not ok:
            raise ConvergenceError("sparsity scan did not converge")
        nnz = int(np.count_nonzero(beta))
        if nnz > k:
            break
        if nnz >= best_nnz:
            best_lam, best_nnz = float(lam), nnz
    return best_lam


# ---------------------------------------------------------------------------
# trainer facade used by the estimator strategies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LassoTrainer:
    """Callable (X, y) -> LassoModel bundling transform and lambda strategy."""

    strategy: object = field(default_factory=CrossValidation)
    transform: object = IDENTITY
    cfg: TrainConfig = DEFAULT_CONFIG

    def __call__(self, x, y):
        strat = self.strategy
        if isinstance(strat, FixedLambda):
            lam = strat.value
        elif isinstance(strat, SparsityTarget):
            if not 0 < strat.fraction:
                raise ParameterError("sparsity fraction must be positive")
            d = self.transform(np.atleast_2d(np.asarray(x)[:1])).shape[1]
            k = min(d, int(np.floor(strat.fraction * len(y))))
            lam = select_lambda_sparsity(x, y, k, self.cfg, self.transform)
        elif isinstance(strat, CrossValidation):
            cfg = self.cfg
            if strat.folds != cfg.cv_folds:
                cfg = TrainConfig(
                    tol=cfg.tol,
                    max_iter=cfg.max_iter,
                    lambda_grid=cfg.lambda_grid,
                    cv_folds=strat.folds,
                    grid_size=cfg.grid_size,
                    grid_span=cfg.grid_span,
                    cv_seed=cfg.cv_seed,
                )
            lam = select_lambda_cv(x, y, cfg, self.transform)
        else:
            raise ParameterError(f"unknown lambda strategy {strat!r}")
        return fit(x, y, lam, self.cfg, self.transform)


def zero_trainer(x, y):
    """Trainer returning the zero function (useful as a control)."""
    model = LassoModel(
        beta=np.zeros(np.atleast_2d(np.asarray(x)).shape[1]),
        lam=np.inf,
        input_offsets=np.zeros(np.atleast_2d(np.asarray(x)).shape[1]),
        output_offset=0.0,
    )
    return model

"""Benchmark problems: high-dimensional linear, Sobol product function, and
the FPUT oscillator chain, each bundled with its input distribution and
reference moments.

A problem is any callable object with a `name`, a `distribution`, a batch
``__call__(X) -> y`` over input rows, and a ``reference()`` returning the
true moments (analytic where available, otherwise a frozen large-sample
estimate shipped as a fixture).
"""

import importlib.resources
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._rk45 import rk45_integrate
from .errors import DomainError, ParameterError, ShapeError
from .sampling import normal_distribution, uniform_distribution

# ---------------------------------------------------------------------------
# reference moments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReferenceMoments:
    """True output mean/variance with the derivation recorded.

    `source` is "analytic" or "large-mc"; large-MC references carry the
    generating seed and sample count.
    """

    mean: float
    variance: float
    source: str = "analytic"
    seed: int = None
    samples: int = None

    @property
    def std(self):
        return float(np.sqrt(self.variance))


def write_reference_file(path, problem_id, ref):
    """Write a reference-moments fixture as plain key=value text."""
    lines = [
        f"problem={problem_id}",
        f"source={ref.source}",
        f"seed={'' if ref.seed is None else ref.seed}",
        f"samples={'' if ref.samples is None else ref.samples}",
        f"mean={ref.mean!r}",
        f"variance={ref.variance!r}",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_reference_file(path_or_text):
    """Parse a key=value fixture; returns (problem_id, ReferenceMoments)."""
    if hasattr(path_or_text, "splitlines") and "=" in path_or_text:
        text = path_or_text
    else:
        with open(path_or_text) as fh:
            text = fh.read()
    kv = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        kv[key.strip()] = value.strip()
    ref = ReferenceMoments(
        mean=float(kv["mean"]),
        variance=float(kv["variance"]),
        source=kv.get("source", "large-mc"),
        seed=int(kv["seed"]) if kv.get("seed") else None,
        samples=int(kv["samples"]) if kv.get("samples") else None,
    )
    return kv.get("problem", ""), ref


# ---------------------------------------------------------------------------
# linear problem
# ---------------------------------------------------------------------------

_LINEAR_HEAD = (1.0, 1 / 2, 1 / 5, 1 / 10, 1 / 20, 1 / 50)


def linear_weights(d):
    """Benchmark weight pattern (1, 1/2, 1/5, 1/10, 1/20, 1/50, 1/100, ...),
    truncated or padded with 1/100 to length d."""
    if d < 1:
        raise ParameterError("d must be >= 1")
    head = _LINEAR_HEAD[:d]
    return np.array(head + (0.01,) * (d - len(head)))


@dataclass(frozen=True)
class LinearProblem:
    """f(x) = alpha . x with standard-normal inputs."""

    alpha: np.ndarray
    name: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "alpha", np.atleast_1d(np.asarray(self.alpha, float)))

    @property
    def dim(self):
        return self.alpha.size

    @property
    def distribution(self):
        return normal_distribution(np.zeros(self.dim), 1.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ShapeError(f"inputs have {x.shape[-1]} columns, expected {self.dim}")
        return x @ self.alpha

    def reference(self):
        return ReferenceMoments(mean=0.0, variance=float(self.alpha @ self.alpha))


def linear_problem(d=400):
    return LinearProblem(alpha=linear_weights(d))


# ---------------------------------------------------------------------------
# Sobol product function
# ---------------------------------------------------------------------------

_SOBOL_HEAD = (1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)


def sobol_coefficients(d):
    """Benchmark coefficients (1, 2, 5, 10, 20, 50, 100, 500, ...), padded
    with 500 to length d."""
    if d < 1:
        raise ParameterError("d must be >= 1")
    head = _SOBOL_HEAD[:d]
    return np.array(head + (500.0,) * (d - len(head)))


@dataclass(frozen=True)
class SobolProblem:
    """f(x) = prod_i (|4 x_i - 2| + c_i) / (1 + c_i) on the unit cube.

    Symmetric about x = 0.5 in every coordinate, with unit mean and a
    closed-form variance.
    """

    c: np.ndarray
    name: str = "sobol"

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, float))
        if np.any(c < 0):
            raise ParameterError("Sobol coefficients must be nonnegative")
        object.__setattr__(self, "c", c)

    @property
    def dim(self):
        return self.c.size

    @property
    def distribution(self):
        return uniform_distribution(self.dim, 0.0, 1.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ShapeError(f"inputs have {x.shape[-1]} columns, expected {self.dim}")
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise DomainError("Sobol inputs must lie in [0, 1]")
        return np.prod((np.abs(4.0 * x - 2.0) + self.c) / (1.0 + self.c), axis=-1)

    def reference(self):
        variance = float(np.prod(1.0 / (3.0 * (1.0 + self.c) ** 2) + 1.0) - 1.0)
        return ReferenceMoments(mean=1.0, variance=variance)


def sobol_problem(d=400):
    return SobolProblem(c=sobol_coefficients(d))


def sobol_transform(x):
    """Fold the unit cube about its centre: element-wise |x - 0.5|."""
    return np.abs(np.asarray(x, dtype=float) - 0.5)


# ---------------------------------------------------------------------------
# FPUT oscillator chain
# ---------------------------------------------------------------------------


@njit(cache=True)
def _fput_rhs_jit(t, y, params):
    """Chain dynamics in first-order form; params = (k'_1..k'_P, alpha).

    Gaps l_j = x_j - x_{j-1} with pinned ends x_0 = 0, x_{P+1} = 1;
    acceleration_j = k'_j (l_{j+1} - l_j) + alpha k'_j (l_{j+1}^2 - l_j^2).
    """
    p = y.shape[0] // 2
    out = np.empty_like(y)
    alpha = params[p]
    for j in range(p):
        out[j] = y[p + j]
    for j in range(p):
        left = y[j - 1] if j > 0 else 0.0
        right = y[j + 1] if j < p - 1 else 1.0
        gap = y[j] - left
        gap_next = right - y[j]
        kp = params[j]
        out[p + j] = kp * (gap_next - gap) + alpha * kp * (
            gap_next * gap_next - gap * gap
        )
    return out


def fput_rhs(state, params):
    """Time-independent right-hand side on a 2P state (positions, velocities)."""
    state = np.asarray(state, dtype=float)
    params = np.asarray(params, dtype=float)
    if state.size % 2 != 0:
        raise ShapeError(f"state length {state.size} is not 2P")
    if params.size != state.size // 2 + 1:
        raise ShapeError(
            f"params length {params.size} != P + 1 = {state.size // 2 + 1}"
        )
    return _fput_rhs_jit(0.0, state, params)


def fput_initial_state(p):
    """Published starting point: x_j = j/(P+1), v_j = sin(3 pi x_j)/5."""
    x0 = np.arange(1, p + 1) / (p + 1)
    v0 = 0.2 * np.sin(3.0 * np.pi * x0)
    return np.concatenate([x0, v0])


def fput_energy(state, params):
    """Conserved energy: sum v_j^2 / (2 k'_j) + sum (l_j^2/2 + alpha l_j^3/3).

    The potential sum runs over all P+1 springs including the pinned ends.
    """
    state = np.asarray(state, dtype=float)
    params = np.asarray(params, dtype=float)
    p = state.size // 2
    x = state[:p]
    v = state[p:]
    kp = params[:p]
    alpha = params[p]
    gaps = np.diff(np.concatenate([[0.0], x, [1.0]]))
    kinetic = float(np.sum(v**2 / (2.0 * kp)))
    potential = float(np.sum(gaps**2 / 2.0 + alpha * gaps**3 / 3.0))
    return kinetic + potential


def fput_qoi(params, t_final=500.0, rtol=1e-6, atol=1e-9):
    """Final kinetic energy E_K(T) = sum v_j(T)^2 / 2 for one parameter draw.

    Masses are unity after folding them into the coupling constants, so the
    kinetic energy is the plain half-sum of squared velocities.
    """
    params = np.asarray(params, dtype=float)
    if np.any(params[:-1] <= 0):
        raise ParameterError("coupling constants must be positive")
    p = params.size - 1
    y0 = fput_initial_state(p)
    y = rk45_integrate(
        _fput_rhs_jit, y0, (0.0, t_final), rtol=rtol, atol=atol, params=params
    )
    return 0.5 * float(np.sum(y[p:] ** 2))


@dataclass(frozen=True)
class FputProblem:
    """UQ over the chain's couplings and nonlinearity: f(k', alpha) = E_K(T)."""

    p: int = 40
    t_final: float = 500.0
    sigma: float = 1e-3
    rtol: float = 1e-6
    atol: float = 1e-9
    name: str = "fput"

    def __post_init__(self):
        if self.p < 2:
            raise ParameterError("P must be >= 2")
        if self.t_final <= 0:
            raise ParameterError("final time must be positive")

    @property
    def dim(self):
        return self.p + 1

    @property
    def distribution(self):
        mean = np.concatenate([np.ones(self.p), [0.5]])
        return normal_distribution(mean, self.sigma)

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.dim:
            raise ShapeError(f"inputs have {x.shape[1]} columns, expected {self.dim}")
        return np.array(
            [fput_qoi(row, self.t_final, self.rtol, self.atol) for row in x]
        )

    def reference(self):
        text = (
            importlib.resources.files("lassomc")
            .joinpath("_data/fput_reference.txt")
            .read_text()
        )
        problem_id, ref = read_reference_file(text)
        expected = f"fput_p{self.p}_t{self.t_final:g}_sigma{self.sigma:g}"
        if problem_id != expected:
            raise ParameterError(
                f"shipped reference is for {problem_id!r}, not {expected!r}; "
                "regenerate with estimate_reference()"
            )
        return ref


def fput_problem(p=40, t_final=500.0, sigma=1e-3):
    return FputProblem(p=p, t_final=t_final, sigma=sigma)


def estimate_reference(problem, samples, seed, batch=1000, progress=None):
    """Estimate reference moments by a seeded large-MC run of the problem.

    Used once to freeze fixtures for problems without analytic moments.
    """
    from .estimators import mc_mean, mc_variance
    from .sampling import sample

    s = sample(problem.distribution, samples, seed)
    values = np.empty(samples)
    for start in range(0, samples, batch):
        stop = min(start + batch, samples)
        values[start:stop] = problem(s.inputs[start:stop])
        if progress is not None:
            progress(stop, samples)
    return ReferenceMoments(
        mean=mc_mean(values),
        variance=mc_variance(values),
        source="large-mc",
        seed=seed,
        samples=samples,
    )

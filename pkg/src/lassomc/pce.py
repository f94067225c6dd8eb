"""Truncated polynomial chaos expansions with sparsity-regularised fitting.

The basis collects all multivariate polynomials of total degree <= p built
from an orthogonal univariate family (Legendre for uniform inputs on
[0, 1], mapped internally to [-1, 1]; probabilists' Hermite for standard
normal inputs). Coefficients are fitted with the Lasso solver; the constant
term is carried by the centering offsets so shrinkage never biases the
mean. Output moments then read off the coefficients directly:
mean = constant coefficient, variance = sum of squared non-constant
coefficients weighted by the basis norms.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import lasso
from .errors import CapacityError, ParameterError, ShapeError

LEGENDRE = "legendre"
HERMITE = "hermite"


def basis_size(d, p):
    """Number of multivariate polynomials of total degree <= p: C(d+p, p)."""
    return math.comb(d + p, p)


def _multi_indices(d, p):
    """All length-d multi-indices with |alpha| <= p in graded lexicographic
    order (degree first, then lexicographic); the all-zero index comes first."""
    out = []

    def compose(remaining, slots, prefix):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for head in range(remaining, -1, -1):
            compose(remaining - head, slots - 1, prefix + (head,))

    for degree in range(p + 1):
        compose(degree, d, ())
    return np.array(out, dtype=np.int64)


@dataclass(frozen=True)
class PceBasis:
    """Tensorised orthogonal polynomial basis truncated by total degree."""

    d: int
    p: int
    family: str
    indices: np.ndarray
    norms: np.ndarray

    @property
    def size(self):
        return self.indices.shape[0]


def build_basis(d, p, family=LEGENDRE, cap=1_000_000):
    """Enumerate the basis for dimension d and maximum total degree p.

    Norms E[Psi^2] are exact: 1/(2k+1) per Legendre factor (uniform on
    [0, 1]), k! per Hermite factor (standard normal). Raises CapacityError
    when the basis would exceed `cap` elements.
    """
    if d < 1 or p < 0:
        raise ParameterError(f"need d >= 1 and p >= 0, got d={d}, p={p}")
    if family not in (LEGENDRE, HERMITE):
        raise ParameterError(f"unknown family {family!r}")
    size = basis_size(d, p)
    if size > cap:
        raise CapacityError(
            f"basis would have {size} elements, above the cap of {cap}"
        )
    indices = _multi_indices(d, p)
    if family == LEGENDRE:
        factor_norms = 1.0 / (2.0 * np.arange(p + 1) + 1.0)
    else:
        factor_norms = np.array([float(math.factorial(k)) for k in range(p + 1)])
    norms = np.prod(factor_norms[indices], axis=1)
    return PceBasis(d=d, p=p, family=family, indices=indices, norms=norms)


def _univariate_values(basis, x):
    """psi_k(x_i) for all degrees k <= p and dimensions, via recurrence.

    Returns an array of shape (p+1, n, d). Legendre inputs are mapped from
    [0, 1] to [-1, 1] first.
    """
    n, d = x.shape
    vals = np.empty((basis.p + 1, n, d))
    vals[0] = 1.0
    if basis.p == 0:
        return vals
    if basis.family == LEGENDRE:
        t = 2.0 * x - 1.0
        vals[1] = t
        for k in range(1, basis.p):
            vals[k + 1] = ((2 * k + 1) * t * vals[k] - k * vals[k - 1]) / (k + 1)
    else:
        vals[1] = x
        for k in range(1, basis.p):
            vals[k + 1] = x * vals[k] - k * vals[k - 1]
    return vals


def design_matrix(basis, x):
    """Evaluate every basis polynomial at every input row (n x P)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != basis.d:
        raise ShapeError(f"inputs have {x.shape[1]} columns, expected {basis.d}")
    uni = _univariate_values(basis, x)
    out = np.empty((x.shape[0], basis.size))
    for j, alpha in enumerate(basis.indices):
        col = uni[alpha[0], :, 0].copy()
        for i in range(1, basis.d):
            k = alpha[i]
            if k > 0:
                col *= uni[k, :, i]
        out[:, j] = col
    return out


@dataclass
class PceModel:
    """Fitted expansion; `coeffs[j]` multiplies basis polynomial j."""

    basis: PceBasis
    coeffs: np.ndarray

    def __post_init__(self):
        if len(self.coeffs) != self.basis.size:
            raise ShapeError(
                f"{len(self.coeffs)} coefficients for a basis of {self.basis.size}"
            )

    def __call__(self, x):
        return design_matrix(self.basis, x) @ self.coeffs


def pce_fit(x, y, basis, lambda_strategy=None, cfg=lasso.DEFAULT_CONFIG):
    """Fit expansion coefficients by Lasso regression on the design matrix.

    The constant column is excluded from the penalised problem; its
    coefficient is recovered from the centering offsets, so the fitted
    model reproduces s(x) = sum_j coeffs_j Psi_j(x) exactly.
    """
    if lambda_strategy is None:
        lambda_strategy = lasso.CrossValidation()
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    phi = design_matrix(basis, x)[:, 1:]
    trainer = lasso.LassoTrainer(strategy=lambda_strategy, cfg=cfg)
    model = trainer(phi, y)
    coeffs = np.empty(basis.size)
    # constant term: offset minus the centered features' contribution
    coeffs[0] = model.output_offset - model.input_offsets @ model.beta
    coeffs[1:] = model.beta
    return PceModel(basis=basis, coeffs=coeffs)


def pce_moments(model):
    """(mean, variance) of the expansion under its input distribution.

    The non-constant polynomials have zero mean, so the mean is the
    constant coefficient; orthogonality turns the variance into a
    norm-weighted sum of squared coefficients.
    """
    mean = float(model.coeffs[0])
    variance = float(np.sum(model.coeffs[1:] ** 2 * model.basis.norms[1:]))
    return mean, variance

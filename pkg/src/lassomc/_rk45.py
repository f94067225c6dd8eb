"""Adaptive Dormand-Prince 5(4) integration.

Two textually parallel cores share the same tableau, error norm, and PI
step controller: a plain-numpy loop for arbitrary Python right-hand sides,
and a numba-compiled loop for jitted right-hand sides of signature
``rhs(t, y, params)`` (used for the oscillator-chain workloads where the
per-step Python overhead would dominate). Local error per step is kept
below ``atol + rtol * |y|`` component-wise in the RMS sense.
"""

import numpy as np
from numba import njit

from .errors import IntegrationError

# Dormand-Prince 5(4) tableau (FSAL: the 7th stage is the next step's first).
C2, C3, C4, C5, C6 = 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

# PI step controller: factor = SAFETY * err^-KP * err_prev^KI, clamped.
SAFETY = 0.9
KP = 0.7 / 5.0
KI = 0.4 / 5.0
FAC_MAX = 10.0
FAC_MIN = 0.2
STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2


def _initial_step(f0, y0, t_span, rtol, atol):
    sc = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / sc) ** 2))
    d1 = np.sqrt(np.mean((f0 / sc) ** 2))
    h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    return min(h, t_span[1] - t_span[0])


def rk45_integrate(rhs, y0, t_span, rtol=1e-6, atol=1e-9, params=None, max_steps=10_000_000):
    """Integrate dy/dt = rhs(t, y) from t_span[0] to t_span[1]; return y(t1).

    When `params` is given and `rhs` is a numba dispatcher with signature
    ``rhs(t, y, params)``, the compiled core is used; otherwise the numpy
    loop runs. Raises IntegrationError on step-size underflow (stiffness)
    or when `max_steps` is exhausted.
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise IntegrationError(f"need t1 > t0, got [{t0}, {t1}]")
    if rtol <= 0 or atol <= 0:
        raise IntegrationError("tolerances must be positive")
    y0 = np.asarray(y0, dtype=float)
    if params is not None and hasattr(rhs, "signatures"):
        y, status, n_steps, t, h = _core_jit(
            rhs, y0, t0, t1, rtol, atol, np.asarray(params, dtype=float), max_steps
        )
    else:
        f = rhs if params is None else (lambda t, y: rhs(t, y, params))
        y, status, n_steps, t, h = _core_py(f, y0, t0, t1, rtol, atol, max_steps)
    if status == STATUS_UNDERFLOW:
        raise IntegrationError(
            f"step size underflow at t = {t:.6g} (h = {h:.3g}); system may be stiff",
            t=t,
            step=h,
            n_steps=n_steps,
        )
    if status == STATUS_MAX_STEPS:
        raise IntegrationError(
            f"exceeded {max_steps} steps at t = {t:.6g}", t=t, step=h, n_steps=n_steps
        )
    return y


def _core_py(rhs, y0, t0, t1, rtol, atol, max_steps):
    t = t0
    y = y0.copy()
    k1 = np.asarray(rhs(t, y), dtype=float)
    h = _initial_step(k1, y, (t0, t1), rtol, atol)
    err_prev = 1e-4
    n_steps = 0
    while t < t1:
        h = min(h, t1 - t)
        if h < 1e-14 * max(abs(t), 1.0):
            return y, STATUS_UNDERFLOW, n_steps, t, h
        k2 = rhs(t + C2 * h, y + h * (A21 * k1))
        k3 = rhs(t + C3 * h, y + h * (A31 * k1 + A32 * k2))
        k4 = rhs(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3))
        k5 = rhs(t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
        k6 = rhs(
            t + C6 * h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5)
        )
        y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
        k7 = np.asarray(rhs(t + h, y_new), dtype=float)
        e = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
        sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = np.sqrt(np.mean((e / sc) ** 2))
        n_steps += 1
        if err <= 1.0:
            t += h
            y = y_new
            k1 = k7
            fac = SAFETY * max(err, 1e-16) ** -KP * err_prev**KI
            h *= min(FAC_MAX, max(FAC_MIN, fac))
            err_prev = max(err, 1e-4)
        else:
            h *= max(FAC_MIN, SAFETY * err**-0.2)
        if n_steps > max_steps:
            return y, STATUS_MAX_STEPS, n_steps, t, h
    return y, STATUS_OK, n_steps, t, h


@njit(cache=True)
def _core_jit(rhs, y0, t0, t1, rtol, atol, params, max_steps):
    t = t0
    y = y0.copy()
    n = y.shape[0]
    k1 = rhs(t, y, params)
    # initial step heuristic, as in the numpy core
    d0 = 0.0
    d1 = 0.0
    for i in range(n):
        sc = atol + rtol * abs(y[i])
        d0 += (y[i] / sc) ** 2
        d1 += (k1[i] / sc) ** 2
    d0 = np.sqrt(d0 / n)
    d1 = np.sqrt(d1 / n)
    h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h = min(h, t1 - t0)
    err_prev = 1e-4
    n_steps = 0
    while t < t1:
        if h > t1 - t:
            h = t1 - t
        if h < 1e-14 * max(abs(t), 1.0):
            return y, STATUS_UNDERFLOW, n_steps, t, h
        k2 = rhs(t + C2 * h, y + h * (A21 * k1), params)
        k3 = rhs(t + C3 * h, y + h * (A31 * k1 + A32 * k2), params)
        k4 = rhs(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3), params)
        k5 = rhs(
            t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), params
        )
        k6 = rhs(
            t + C6 * h,
            y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
            params,
        )
        y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
        k7 = rhs(t + h, y_new, params)
        err = 0.0
        for i in range(n):
            e = h * (
                E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]
            )
            sc = atol + rtol * max(abs(y[i]), abs(y_new[i]))
            err += (e / sc) ** 2
        err = np.sqrt(err / n)
        n_steps += 1
        if err <= 1.0:
            t += h
            y = y_new
            k1 = k7
            fac = SAFETY * max(err, 1e-16) ** (-KP) * err_prev**KI
            h *= min(FAC_MAX, max(FAC_MIN, fac))
            err_prev = max(err, 1e-4)
        else:
            h *= max(FAC_MIN, SAFETY * err ** (-0.2))
        if n_steps > max_steps:
            return y, STATUS_MAX_STEPS, n_steps, t, h
    return y, STATUS_OK, n_steps, t, h

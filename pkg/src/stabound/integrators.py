"""Embedded Dormand-Prince 5(4) integrator with PI step control and dense output.

One integrator serves trajectories, transition matrices and the backward
weight-matrix sweep.  The continuous extension (quartic interpolant) lets a
single adaptive pass produce samples on arbitrarily fine output grids without
forcing the step sequence onto them.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import StiffnessError

# Butcher tableau of the Dormand-Prince 5(4) pair.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0)
_A = tuple(
    np.array(row)
    for row in (
        (1 / 5,),
        (3 / 40, 9 / 40),
        (44 / 45, -56 / 15, 32 / 9),
        (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
        (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    )
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b - b_hat: weights of the embedded 4th-order error estimate
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# dense-output weights (continuous extension of the pair)
_D = np.array(
    [
        -12715105075 / 11282082432,
        0.0,
        87487479700 / 32700410799,
        -10690763975 / 1880347072,
        701980252875 / 199316789632,
        -1453857185 / 822651844,
        69997945 / 29380423,
    ]
)

# PI controller constants (error exponents, safety factor, step-factor clamps)
_ALPHA = 0.7 / 5.0
_BETA = 0.4 / 5.0
_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 10.0


def _initial_step(f, t0, y0, f0, direction, rtol, atol):
    """Starting step size via the standard two-probe heuristic."""
    scale = atol + rtol * np.abs(y0)
    d0 = float(np.linalg.norm(y0 / scale) / math.sqrt(y0.size))
    d1 = float(np.linalg.norm(f0 / scale) / math.sqrt(y0.size))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = f(t0 + h0 * direction, y1)
    d2 = float(np.linalg.norm((f1 - f0) / scale) / math.sqrt(y0.size)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1)


def _interpolate(theta, h, y_old, y_new, k1, k7, dks):
    """Quartic continuous extension on one accepted step (theta in [0, 1])."""
    ydiff = y_new - y_old
    bspl = h * k1 - ydiff
    r4 = ydiff - h * k7 - bspl
    return y_old + theta * (ydiff + (1.0 - theta) * (bspl + theta * (r4 + (1.0 - theta) * dks)))


def solve_dense(f, t_eval, y0, rtol: float = 1e-9, atol: float = 1e-12) -> np.ndarray:
    """Integrate y' = f(t, y) and sample the solution at every point of ``t_eval``.

    ``t_eval`` must be monotone (increasing or decreasing) with t_eval[0] the
    initial time; backward integration is simply a decreasing ``t_eval``.
    Returns an array of shape (len(t_eval), len(y0)).

    Raises StiffnessError when the accepted step underflows, which for the
    smooth systems in scope signals an over-long horizon or a (near-)unstable
    problem rather than genuine stiffness.
    """
    ts = np.asarray(t_eval, dtype=float)
    y = np.array(y0, dtype=float).reshape(-1)
    if ts.ndim != 1 or ts.size < 1:
        raise ValueError("t_eval must be a non-empty 1-d sequence")
    if rtol <= 0.0 or atol <= 0.0:
        raise ValueError("rtol and atol must be positive")
    out = np.empty((ts.size, y.size))
    out[0] = y
    if ts.size == 1:
        return out
    diffs = np.diff(ts)
    direction = 1.0 if diffs[0] > 0 else -1.0
    if np.any(direction * diffs <= 0.0):
        raise ValueError("t_eval must be strictly monotone")

    t = float(ts[0])
    t_final = float(ts[-1])
    k1 = np.asarray(f(t, y), dtype=float)
    h = _initial_step(f, t, y, k1, direction, rtol, atol)
    h = min(h, abs(t_final - t))
    err_prev = 1.0
    next_idx = 1
    k = np.empty((7, y.size))

    h_floor = 1e-15 * (abs(t) + abs(t_final) + 1.0)
    while direction * (t_final - t) > 0.0:
        if h <= h_floor:
            raise StiffnessError(
                f"step size underflow at t = {t:.6g}; the problem is too stiff at the "
                "requested tolerance - try a smaller horizon or looser rtol/atol"
            )
        # land exactly on the final time instead of creeping up on it
        if h >= abs(t_final - t):
            hs = t_final - t
            t_new = t_final
        else:
            hs = h * direction
            t_new = t + hs
        k[0] = k1
        for i, row in enumerate(_A):
            yi = y + hs * (row @ k[: i + 1])
            k[i + 1] = f(t + _C[i + 1] * hs, yi)
        y_new = y + hs * (_B[:6] @ k[:6])
        k[6] = f(t_new, y_new)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.linalg.norm((hs * (_E @ k)) / scale) / math.sqrt(y.size))
        if err <= 1.0:
            # accept: emit dense-output samples inside (t, t_new]
            dks = hs * (_D @ k)
            while next_idx < ts.size and direction * (ts[next_idx] - t_new) <= 0.0:
                theta = (ts[next_idx] - t) / hs
                out[next_idx] = _interpolate(theta, hs, y, y_new, k[0], k[6], dks)
                next_idx += 1
            t, y, k1 = t_new, y_new, k[6].copy()
            factor = _SAFETY * (err if err > 0 else 1e-10) ** -_ALPHA * err_prev**_BETA
            h *= min(_FAC_MAX, max(_FAC_MIN, factor))
            err_prev = max(err, 1e-10)
        else:
            h *= max(_FAC_MIN, _SAFETY * err**-0.2)
    out[-1] = y
    return out

"""The time-varying weight matrix H(t) and its eigenvalue envelopes.

For a uniformly asymptotically stable system, the weight

    H(t) = integral over [t, inf) of Phi^T(tau, t) Phi(tau, t) dtau

is symmetric positive definite and satisfies the Lyapunov differential
equation H' + A^T(t) H + H A(t) = -I.  We compute it by one backward sweep
of that ODE from a truncation horizon T down to the grid start: a single
integration yields every sample, consistent with the defining identity to
integrator accuracy.  (Per-t quadrature of Phi^T Phi survives only as an
independent test oracle.)  For constant A the sweep collapses to the
algebraic Lyapunov equation A^T H + H A = -I.

The sweep integrates the packed upper triangle of H, so every sample is
symmetric by construction.  The sweep's default tolerances are tighter than
the trajectory defaults because downstream self-checks finite-difference the
samples, amplifying per-sample error by ~1/dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NotUasError, NumericalError
from .integrators import solve_dense
from .matrixops import as_square, pd_tolerance, sym_eig
from .systems import SystemSpec, TimeGrid, eval_A, resolve, transition_matrices

SWEEP_RTOL = 1e-11
SWEEP_ATOL = 1e-14

# Hard cap on ||H|| during the backward sweep; a weight this large means the
# underlying system is not (usefully) uniformly stable on the horizon.
MAX_WEIGHT_SCALE = 1e12


@dataclass(frozen=True)
class WeightTrajectory:
    """H(t) samples on a grid with per-sample extreme eigenvalues.

    ``tail_bound`` is the disclosed truncation error of the finite horizon:
    the computed H under-approximates the true weight by at most this much
    (in eigenvalue terms).
    """

    grid: TimeGrid
    h_samples: np.ndarray  # shape (len(grid), n, n), each symmetric PD
    lmin: np.ndarray
    lmax: np.ndarray
    horizon_t: float
    tail_bound: float

    def __post_init__(self):
        if self.h_samples.shape[0] != len(self.grid):
            raise ValueError("h_samples/grid length mismatch")
        if np.any(self.lmin > self.lmax):
            raise ValueError("lmin must not exceed lmax")
        self.h_samples.setflags(write=False)
        self.lmin.setflags(write=False)
        self.lmax.setflags(write=False)


class EigenEnvelope(NamedTuple):
    """Per-sample extreme eigenvalue curves of H(t) plus their grid extremes."""

    lmin: np.ndarray
    lmax: np.ndarray
    lmin_inf: float
    lmax_sup: float


def gramian_lti(a) -> np.ndarray:
    """The constant weight H solving A^T H + H A = -I for Hurwitz A.

    Solved as the Kronecker-product linear system in vec(H).  A non-Hurwitz
    matrix yields a singular system or a non-positive-definite H, both
    reported as the system not being UAS.
    """
    am = as_square(a, "A")
    n = am.shape[0]
    eye = np.eye(n)
    k = np.kron(eye, am.T) + np.kron(am.T, eye)
    try:
        vec_h = np.linalg.solve(k, -eye.flatten(order="F"))
    except np.linalg.LinAlgError as err:
        raise NotUasError(f"system not UAS: Lyapunov equation is singular ({err})") from err
    h = vec_h.reshape((n, n), order="F")
    h = 0.5 * (h + h.T)
    lmin = float(sym_eig(h).values[0])
    if lmin <= pd_tolerance(h):
        raise NotUasError(
            f"system not UAS: Lyapunov solution is not positive definite "
            f"(lambda_min = {lmin:.6e})"
        )
    residual = float(np.linalg.norm(am.T @ h + h @ am + eye))
    if residual > 1e-10:
        raise NumericalError(
            f"Lyapunov residual {residual:.3e} exceeds 1e-10; A is too ill-conditioned"
        )
    return h


def _triu_packing(n: int):
    iu = np.triu_indices(n)

    def pack(m: np.ndarray) -> np.ndarray:
        return m[iu]

    def unpack(v: np.ndarray) -> np.ndarray:
        m = np.zeros((n, n))
        m[iu] = v
        lower = m.T.copy()
        np.fill_diagonal(lower, 0.0)
        return m + lower

    return pack, unpack


def estimate_decay_rate(
    spec: SystemSpec,
    grid: TimeGrid,
    rtol: float = 1e-6,
    atol: float = 1e-9,
) -> float:
    """Pilot estimate of the exponential decay rate of ||Phi(t, t0)||.

    Least-squares slope of log ||Phi|| over the second half of a coarse
    sample of the grid; floored at 0.025 so the default horizon stays finite
    even when the pilot sees no decay.
    """
    spec = resolve(spec)
    ts = np.linspace(grid.t0, grid.t_end, min(len(grid), 33))
    phis = transition_matrices(spec, ts[1:], ts[0], rtol=rtol, atol=atol)
    norms = [float(np.linalg.norm(p, 2)) for p in phis]
    half = len(norms) // 2
    ts_fit = ts[1:][half:]
    logs = np.log(np.maximum(norms[half:], 1e-300))
    slope = float(np.polyfit(ts_fit, logs, 1)[0])
    return max(-slope, 0.025)


def default_horizon(spec: SystemSpec, grid: TimeGrid) -> float:
    """Default truncation horizon: t_end + max(10, 5 / estimated decay rate)."""
    lam_est = estimate_decay_rate(spec, grid)
    return grid.t_end + max(10.0, 5.0 / lam_est)


def gramian_ltv(
    spec: SystemSpec,
    grid: TimeGrid,
    horizon_t: float | None = None,
    rtol: float = SWEEP_RTOL,
    atol: float = SWEEP_ATOL,
) -> WeightTrajectory:
    """Weight trajectory H(t) on the grid by the backward Lyapunov sweep.

    Integrates H' = -A^T(t) H - H A(t) - I from H(horizon_t) = 0 down to the
    grid start.  The zero terminal condition keeps the computed H a rigorous
    under-approximation of the true weight; the truncation deficit is
    disclosed as ``tail_bound``, computed from the certificate implied by the
    sampled eigenvalue extremes.
    """
    spec = resolve(spec)
    if horizon_t is None:
        horizon_t = default_horizon(spec, grid)
    if horizon_t <= grid.t_end:
        raise ValueError(f"horizon_t = {horizon_t} must exceed the grid end {grid.t_end}")
    if grid.t0 < spec.t0:
        raise ValueError("grid starts before the system's initial time")
    n = spec.n
    pack, unpack = _triu_packing(n)
    eye = np.eye(n)

    def f(tau, v):
        if float(np.max(np.abs(v))) > MAX_WEIGHT_SCALE:
            raise NotUasError(
                f"weight matrix exceeded {MAX_WEIGHT_SCALE:.0e} during the backward sweep; "
                "system appears not UAS on this horizon",
                failing_time=float(tau),
            )
        h = unpack(v)
        p = eval_A(spec, tau).T @ h
        return pack(-(p + p.T) - eye)

    t_eval = np.concatenate(([horizon_t], grid.samples[::-1]))
    rows = solve_dense(f, t_eval, pack(np.zeros((n, n))), rtol=rtol, atol=atol)
    h_samples = np.array([unpack(v) for v in rows[1:][::-1]])

    m = len(grid)
    lmin = np.empty(m)
    lmax = np.empty(m)
    for k in range(m):
        values = sym_eig(h_samples[k]).values
        lmin[k], lmax[k] = float(values[0]), float(values[-1])
        if lmin[k] <= pd_tolerance(h_samples[k]):
            raise NotUasError(
                f"system not UAS on this horizon: H({grid.samples[k]:.6g}) is not "
                f"positive definite (lambda_min = {lmin[k]:.6e})",
                failing_time=float(grid.samples[k]),
            )
    gamma_sq = float(lmax.max() / lmin.min())
    lam_hat = 1.0 / (2.0 * float(lmax.max()))
    tail = gamma_sq * math.exp(-2.0 * lam_hat * (horizon_t - grid.t_end)) / (2.0 * lam_hat)
    return WeightTrajectory(
        grid=grid,
        h_samples=h_samples,
        lmin=lmin,
        lmax=lmax,
        horizon_t=float(horizon_t),
        tail_bound=tail,
    )


def constant_weight_trajectory(a, grid: TimeGrid) -> WeightTrajectory:
    """WeightTrajectory of a constant system via the algebraic Lyapunov solve.

    Fast path for constant A: every sample equals gramian_lti(A) exactly and
    the truncation tail is zero.
    """
    h = gramian_lti(a)
    values = sym_eig(h).values
    m = len(grid)
    return WeightTrajectory(
        grid=grid,
        h_samples=np.broadcast_to(h, (m, *h.shape)).copy(),
        lmin=np.full(m, float(values[0])),
        lmax=np.full(m, float(values[-1])),
        horizon_t=math.inf,
        tail_bound=0.0,
    )


def eigen_envelope(w: WeightTrajectory) -> EigenEnvelope:
    """Extreme-eigenvalue curves of the weight samples plus their grid extremes."""
    return EigenEnvelope(
        lmin=w.lmin,
        lmax=w.lmax,
        lmin_inf=float(w.lmin.min()),
        lmax_sup=float(w.lmax.max()),
    )


def _derivative_weights(ts: np.ndarray, k: int, width: int = 5) -> tuple[slice, np.ndarray]:
    """Weights of a degree-(width-1) local polynomial first derivative at ts[k]."""
    m = ts.size
    lo = min(max(k - width // 2, 0), m - width)
    window = slice(lo, lo + width)
    s = ts[window] - ts[k]
    vand = np.vander(s, width, increasing=True).T  # vand[p, j] = s_j^p
    rhs = np.zeros(width)
    rhs[1] = 1.0
    return window, np.linalg.solve(vand, rhs)


def lyapunov_residual(spec: SystemSpec, w: WeightTrajectory) -> float:
    """Self-check: max interior-sample residual of H' + A^T H + H A + I.

    H' is approximated by degree-4 local-polynomial differentiation of the
    samples, so the stencil truncation stays far below the sweep accuracy on
    reasonable grids.
    """
    spec = resolve(spec)
    ts = w.grid.samples
    m = ts.size
    if m < 3:
        raise ValueError("lyapunov_residual needs at least 3 grid samples")
    width = min(5, m)
    eye = np.eye(spec.n)
    worst = 0.0
    for k in range(1, m - 1):
        window, weights = _derivative_weights(ts, k, width)
        hdot = np.tensordot(weights, w.h_samples[window], axes=(0, 0))
        at = eval_A(spec, float(ts[k]))
        residual = hdot + at.T @ w.h_samples[k] + w.h_samples[k] @ at + eye
        worst = max(worst, float(np.linalg.norm(residual)))
    return worst

"""Dense symmetric linear algebra primitives.

Everything downstream (weight matrices, envelopes, certificates) reduces to a
handful of operations on small dense real matrices: a symmetric
eigendecomposition, induced and weighted norms, the positive-definite square
root, and the matrix exponential.  All functions are pure and deterministic:
identical inputs produce bit-identical outputs.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import (
    EigenConvergenceError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    NumericalError,
)

# Relative symmetry tolerance for inputs that claim to be symmetric.
SYM_TOL = 1e-9
# Jacobi iteration: sweep limit and off-diagonal stopping threshold
# (relative to the Frobenius norm of the input).
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-14


def pd_tolerance(h: np.ndarray) -> float:
    """Positive-definiteness threshold for eigenvalues of ``h``."""
    return 1e-12 * max(1.0, float(np.trace(h)))


def as_square(m, name: str = "matrix") -> np.ndarray:
    """Validate and return ``m`` as a float64 square matrix with finite entries."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"{name} must be square with n >= 1, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def as_symmetric(m, name: str = "matrix") -> np.ndarray:
    """Validate symmetry of ``m`` within SYM_TOL and return the symmetrized copy."""
    a = as_square(m, name)
    scale = max(1.0, float(np.linalg.norm(a)))
    skew = float(np.max(np.abs(a - a.T)))
    if skew > SYM_TOL * scale:
        raise NotSymmetricError(
            f"{name} is not symmetric: max |a_ij - a_ji| = {skew:.3e} "
            f"exceeds {SYM_TOL:.0e} * max(1, ||.||_F) = {SYM_TOL * scale:.3e}"
        )
    return 0.5 * (a + a.T)


class EigenDecomposition(NamedTuple):
    """Eigenvalues sorted ascending with matching orthonormal column eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


def sym_eig(s) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Deterministic: fixed sweep order, stable sort, and eigenvector sign
    canonicalization (first component of magnitude > 1e-12 is positive).

    Raises EigenConvergenceError if the off-diagonal mass has not dropped
    below JACOBI_OFF_TOL * ||S||_F after JACOBI_MAX_SWEEPS sweeps.
    """
    a = as_symmetric(s)
    n = a.shape[0]
    v = np.eye(n)
    fro = float(np.linalg.norm(a))

    def _off_diagonal_norm() -> float:
        od = a.copy()
        np.fill_diagonal(od, 0.0)
        return float(np.linalg.norm(od))

    if n > 1 and fro > 0.0:
        stop = JACOBI_OFF_TOL * fro
        for _ in range(JACOBI_MAX_SWEEPS):
            if _off_diagonal_norm() <= stop:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) <= 1e-300:
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if abs(theta) > 1e150:
                        t = 1.0 / (2.0 * theta)
                    else:
                        t = math.copysign(1.0, theta) / (
                            abs(theta) + math.sqrt(theta * theta + 1.0)
                        )
                    c = 1.0 / math.sqrt(t * t + 1.0)
                    sn = t * c
                    # A <- J^T A J on rows/columns p, q, then V <- V J.
                    ap, aq = a[:, p].copy(), a[:, q].copy()
                    a[:, p] = c * ap - sn * aq
                    a[:, q] = sn * ap + c * aq
                    ap, aq = a[p, :].copy(), a[q, :].copy()
                    a[p, :] = c * ap - sn * aq
                    a[q, :] = sn * ap + c * aq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    vp, vq = v[:, p].copy(), v[:, q].copy()
                    v[:, p] = c * vp - sn * vq
                    v[:, q] = sn * vp + c * vq
        else:
            off = _off_diagonal_norm()
            raise EigenConvergenceError(
                f"Jacobi iteration did not converge after {JACOBI_MAX_SWEEPS} sweeps "
                f"on a {n}x{n} matrix; off-diagonal residual {off:.3e}",
                residual=off,
            )
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    for j in range(n):
        col = vectors[:, j]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        if nz.size and col[nz[0]] < 0.0:
            vectors[:, j] = -col
    return EigenDecomposition(values, vectors)


def induced_norm2(m) -> float:
    """Induced 2-norm: sqrt of the largest eigenvalue of M^T M."""
    a = as_square(m)
    g = a.T @ a
    g = 0.5 * (g + g.T)
    lam = float(sym_eig(g).values[-1])
    return math.sqrt(max(lam, 0.0))


def _require_pd(h: np.ndarray, eig: EigenDecomposition, name: str) -> None:
    lmin = float(eig.values[0])
    if lmin <= pd_tolerance(h):
        raise NotPositiveDefiniteError(
            f"{name} is not positive definite: lambda_min = {lmin:.6e}",
            lambda_min=lmin,
        )


def weighted_vec_norm(x, h) -> float:
    """Weighted vector norm sqrt(x^T H x) for positive definite H."""
    hm = as_symmetric(h, "weight")
    xv = np.asarray(x, dtype=float).reshape(-1)
    if xv.shape[0] != hm.shape[0]:
        raise ValueError(f"vector length {xv.shape[0]} != weight dimension {hm.shape[0]}")
    _require_pd(hm, sym_eig(hm), "weight")
    q = float(xv @ hm @ xv)
    return math.sqrt(max(q, 0.0))


def pd_sqrt(h) -> np.ndarray:
    """Symmetric positive definite square root R with R @ R = H."""
    hm = as_symmetric(h, "matrix")
    eig = sym_eig(hm)
    _require_pd(hm, eig, "matrix")
    r = (eig.vectors * np.sqrt(eig.values)) @ eig.vectors.T
    return 0.5 * (r + r.T)


def weighted_induced_norm(m, h) -> float:
    """Induced matrix norm in the H-weighted geometry.

    Equals the induced 2-norm of H^(1/2) M H^(-1/2).
    """
    a = as_square(m)
    hm = as_symmetric(h, "weight")
    if a.shape != hm.shape:
        raise ValueError("matrix and weight dimensions differ")
    eig = sym_eig(hm)
    _require_pd(hm, eig, "weight")
    root = (eig.vectors * np.sqrt(eig.values)) @ eig.vectors.T
    inv_root = (eig.vectors / np.sqrt(eig.values)) @ eig.vectors.T
    return induced_norm2(root @ a @ inv_root)


def expm(a, t: float = 1.0) -> np.ndarray:
    """Matrix exponential e^(A t) by scaling-and-squaring with a Taylor kernel.

    The scaled matrix satisfies ||A t|| / 2^k <= 0.5, where the order-16
    truncated series is accurate to well below double roundoff.
    """
    am = as_square(a)
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    b = am * t
    n = b.shape[0]
    nrm = float(np.linalg.norm(b, 1))
    if nrm > 2.0**53:
        raise NumericalError(f"expm overflow: ||A t||_1 = {nrm:.3e} is too large to scale")
    squarings = max(0, int(math.ceil(math.log2(nrm / 0.5)))) if nrm > 0.5 else 0
    bs = b / (2.0**squarings)
    eye = np.eye(n)
    result = eye.copy()
    for k in range(16, 0, -1):
        result = eye + (bs @ result) / k
    for _ in range(squarings):
        result = result @ result
    if not np.all(np.isfinite(result)):
        raise NumericalError("expm overflow: non-finite entries after squaring")
    return result


def char_poly_eigs_2x2(a) -> tuple[complex, complex]:
    """Both (possibly complex) eigenvalues of a 2x2 matrix via its characteristic polynomial.

    Diagnostic helper for reports on small constant systems.
    """
    am = as_square(a)
    if am.shape[0] != 2:
        raise ValueError("char_poly_eigs_2x2 expects a 2x2 matrix")
    tr = float(am[0, 0] + am[1, 1])
    det = float(am[0, 0] * am[1, 1] - am[0, 1] * am[1, 0])
    disc = complex(tr * tr - 4.0 * det) ** 0.5
    return ((tr + disc) / 2.0, (tr - disc) / 2.0)

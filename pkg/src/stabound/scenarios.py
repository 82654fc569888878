"""Built-in demo systems with hand-derived closed forms.

Two systems with fully known propagators, weights and envelope exponents
serve as demos and as the independent oracles of the acceptance suite:

* ``example1_lti`` - a constant 2x2 rotation-plus-damping system (spectrum
  -1 +/- 3i) whose extreme-eigenvalue envelope of A^T + A is uninformative
  (upper bound constant) while the weight envelope certifies decay.
* ``example3_ltv`` - a genuinely time-varying 2x2 triangular system with a
  decaying coupling term; propagator, weight, eigenvalue curves and the
  envelope exponent antiderivatives are all available in closed form.

The oracle evaluators are deliberately plain transcriptions of the closed
forms, sharing no code with the numerical pipeline they validate.

``random_uas`` generates seeded Hurwitz systems (no closed forms) for
property tests: A = Q (diag(-d) + skew) Q^{-1}.  The inner matrix has
negative-definite symmetric part, hence is Hurwitz, and similarity
preserves the spectrum; a non-orthogonal Q still makes A non-normal, so
lambda_max[A^T + A] > 0 occurs for some seeds while the system stays UAS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .systems import SystemSpec

BUILTIN_IDS = ("example1_lti", "example3_ltv")


@dataclass(frozen=True)
class Scenario:
    """A demo system plus whatever closed-form oracles it has (None elsewhere)."""

    id: str
    spec: SystemSpec
    reference_x0: np.ndarray
    known_constants: dict[str, float]
    oracle_phi: Callable[[float, float], np.ndarray] | None = None
    oracle_h: Callable[[float], np.ndarray] | None = None
    oracle_eigs: Callable[[float], tuple[float, float]] | None = None
    oracle_bound_exponents: Callable[[float], tuple[float, float]] | None = None


def _example1_phi(t: float, tau: float) -> np.ndarray:
    s = t - tau
    c3, s3 = math.cos(3.0 * s), math.sin(3.0 * s)
    factor = math.exp(-s) / 3.0
    r10 = math.sqrt(10.0)
    return factor * np.array(
        [[3.0 * c3 + s3, r10 * s3], [-r10 * s3, 3.0 * c3 - s3]]
    )


def _example1() -> Scenario:
    r10 = math.sqrt(10.0)
    r11 = math.sqrt(11.0)
    a = np.array([[0.0, r10], [-r10, -2.0]])
    h = np.array([[3.0 / 5.0, r10 / 20.0], [r10 / 20.0, 0.5]])
    lmin = (11.0 - r11) / 20.0
    lmax = (11.0 + r11) / 20.0

    def oracle_h(t: float) -> np.ndarray:
        return h.copy()

    def oracle_eigs(t: float) -> tuple[float, float]:
        return (lmin, lmax)

    def oracle_bound_exponents(t: float) -> tuple[float, float]:
        # -1/2 integral of 1/lambda over [0, t] for the constant eigenvalues
        return (-10.0 * t / (11.0 - r11), -10.0 * t / (11.0 + r11))

    # ||A||_I = sqrt(lambda_max[A^T A]) with A^T A = [[10, 2 r10], [2 r10, 14]]
    op_norm = math.sqrt(12.0 + 2.0 * r11)
    return Scenario(
        id="example1_lti",
        spec=SystemSpec.constant(a),
        reference_x0=np.array([-4.0, 3.0]),
        known_constants={
            "L": op_norm,
            "gamma": math.sqrt(lmax / lmin),
            "lambda": 1.0 / (2.0 * lmax),
        },
        oracle_phi=_example1_phi,
        oracle_h=oracle_h,
        oracle_eigs=oracle_eigs,
        oracle_bound_exponents=oracle_bound_exponents,
    )


def _example3_phi(t: float, tau: float) -> np.ndarray:
    return np.array(
        [
            [math.exp(tau - t), math.exp(-t) / 3.0 - math.exp(3.0 * tau - 4.0 * t) / 3.0],
            [0.0, math.exp(3.0 * tau - 3.0 * t)],
        ]
    )


def _example3_h(t: float) -> np.ndarray:
    return np.array(
        [
            [0.5, math.exp(-t) / 10.0],
            [math.exp(-t) / 10.0, math.exp(-2.0 * t) / 40.0 + 1.0 / 6.0],
        ]
    )


def _example3_eigs(t: float) -> tuple[float, float]:
    # overflow-free rewrite of the discriminant: e^{-2t} sqrt(336 e^{2t} + 1600 e^{4t} + 9)
    # equals sqrt(336 e^{-2t} + 1600 + 9 e^{-4t}).
    center = math.exp(-2.0 * t) / 80.0 + 1.0 / 3.0
    spread = math.sqrt(336.0 * math.exp(-2.0 * t) + 1600.0 + 9.0 * math.exp(-4.0 * t)) / 240.0
    return (center - spread, center + spread)


def _example3_rho(t: float) -> float:
    r6 = math.sqrt(6.0)
    e2t = math.exp(2.0 * t)
    return math.sqrt((100.0 * e2t + 3.0 * r6 + 10.5) / (100.0 * e2t - 3.0 * r6 + 10.5))


def _example3_bound_exponents(t: float) -> tuple[float, float]:
    # antiderivatives of -1/2 * 1/lambda_{min,max}; the constants pin the
    # value 0 at t = 0
    r6 = math.sqrt(6.0)
    rho = _example3_rho(t)
    lower = (
        1.5 * math.log(rho - 1.0)
        - 2.5 * math.log(2.0 * r6 / 5.0 - rho + 1.4)
        + 0.5 * math.log((rho + 1.0) * (2.0 * r6 - rho + 5.0))
        + 3.2375954052
    )
    upper = (
        1.5 * math.log(rho + 1.0)
        - 2.5 * math.log(2.0 * r6 / 5.0 + rho + 1.4)
        + 0.5 * math.log((rho - 1.0) * (2.0 * r6 + rho + 5.0))
        + 2.1447615497
    )
    return (lower, upper)


def _example3() -> Scenario:
    lmin0, lmax0 = _example3_eigs(0.0)
    # ||A(0)||_I with A(0) = [[-1, 1], [0, -3]]: lambda_max[A^T A] = (11 + sqrt(85)) / 2
    op_norm = math.sqrt((11.0 + math.sqrt(85.0)) / 2.0)
    return Scenario(
        id="example3_ltv",
        spec=SystemSpec.expression([["-1", "exp(-t)"], ["0", "-3"]]),
        reference_x0=np.array([2.0, -1.0]),
        known_constants={
            "L": op_norm,
            "gamma": math.sqrt(lmax0 / lmin0),
            "lambda": 1.0 / (2.0 * lmax0),
        },
        oracle_phi=_example3_phi,
        oracle_h=_example3_h,
        oracle_eigs=_example3_eigs,
        oracle_bound_exponents=_example3_bound_exponents,
    )


_FACTORIES = {"example1_lti": _example1, "example3_ltv": _example3}


def builtin(scenario_id: str) -> Scenario:
    """Look up a built-in scenario by id; unknown ids list the available ones."""
    try:
        return _FACTORIES[scenario_id]()
    except KeyError:
        raise ValueError(
            f"unknown scenario {scenario_id!r}; available: {', '.join(BUILTIN_IDS)}"
        ) from None


def random_uas(n: int, seed: int) -> Scenario:
    """Seeded random UAS system of dimension n (1 <= n <= 8), no oracles.

    Deterministic per (n, seed).  Eigenvalues lie in [-3, -0.2] by
    construction; the similarity transform is redrawn until reasonably
    conditioned so the systems stay numerically benign.
    """
    if not 1 <= n <= 8:
        raise ValueError("dimension must be between 1 and 8")
    rng = np.random.default_rng(seed)
    d = rng.uniform(0.2, 3.0, n)
    inner = np.diag(-d)
    if n > 1:
        g = rng.standard_normal((n, n))
        inner = inner + 0.5 * (g - g.T)
    q = np.eye(n)
    if n > 1:
        for _ in range(100):
            q = np.eye(n) + 0.6 * rng.standard_normal((n, n))
            if np.linalg.cond(q) < 50.0:
                break
    a = np.linalg.solve(q.T, (q @ inner).T).T
    x0 = rng.standard_normal(n)
    return Scenario(
        id=f"random_uas_n{n}_seed{seed}",
        spec=SystemSpec.constant(a),
        reference_x0=x0,
        known_constants={"decay_min": float(d.min()), "decay_max": float(d.max())},
    )

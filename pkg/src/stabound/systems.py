"""System descriptions and initial-value problems for x' = A(t) x.

A system is either a constant matrix, a matrix of scalar expressions in t
(continuous on the analysis window, which is the caller's responsibility),
or a reference to a built-in demo scenario.  The solver machinery produces
solution trajectories and transition matrices on sample grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as _expr
from .errors import ExprDomainError
from .integrators import solve_dense
from .matrixops import as_square

DEFAULT_RTOL = 1e-9
DEFAULT_ATOL = 1e-12


@dataclass(frozen=True)
class SystemSpec:
    """Description of the system matrix A(t).

    Exactly one of ``a_const`` / ``a_exprs`` / ``builtin_id`` is populated,
    matching ``kind`` in {"constant", "expression", "builtin"}.
    """

    kind: str
    n: int
    a_const: np.ndarray | None = None
    a_exprs: tuple[tuple[_expr.Expr, ...], ...] | None = None
    builtin_id: str | None = None
    t0: float = 0.0

    def __post_init__(self):
        payloads = [self.a_const is not None, self.a_exprs is not None, self.builtin_id is not None]
        expected = {"constant": 0, "expression": 1, "builtin": 2}
        if self.kind not in expected:
            raise ValueError(f"unknown system kind {self.kind!r}")
        if payloads != [i == expected[self.kind] for i in range(3)]:
            raise ValueError(f"kind {self.kind!r} must populate exactly its own payload")
        if self.kind != "builtin" and self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.a_const is not None:
            self.a_const.setflags(write=False)

    @classmethod
    def constant(cls, a, t0: float = 0.0) -> "SystemSpec":
        am = as_square(a, "A")
        return cls(kind="constant", n=am.shape[0], a_const=am, t0=t0)

    @classmethod
    def expression(cls, entries, t0: float = 0.0) -> "SystemSpec":
        """Build from an n x n nest of expression strings or parsed ASTs."""
        rows = []
        for row in entries:
            rows.append(tuple(e if not isinstance(e, str) else _expr.parse(e) for e in row))
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise ValueError("expression matrix must be square with n >= 1")
        return cls(kind="expression", n=n, a_exprs=tuple(rows), t0=t0)

    @classmethod
    def builtin(cls, builtin_id: str, t0: float = 0.0) -> "SystemSpec":
        return cls(kind="builtin", n=0, builtin_id=builtin_id, t0=t0)


def resolve(spec: SystemSpec) -> SystemSpec:
    """Replace a builtin reference by the concrete spec it names."""
    if spec.kind != "builtin":
        return spec
    from .scenarios import builtin  # deferred: scenarios imports this module

    return builtin(spec.builtin_id).spec


def eval_A(spec: SystemSpec, t: float) -> np.ndarray:
    """The system matrix A(t); independent of t for constant systems."""
    spec = resolve(spec)
    if t < spec.t0:
        raise ValueError(f"t = {t} is below the system's initial time t0 = {spec.t0}")
    if spec.kind == "constant":
        return spec.a_const
    out = np.empty((spec.n, spec.n))
    for i, row in enumerate(spec.a_exprs):
        for j, e in enumerate(row):
            try:
                out[i, j] = _expr.evaluate(e, t)
            except ExprDomainError as err:
                raise ExprDomainError(f"A[{i}][{j}] at t={t}: {err}") from err
    if not np.all(np.isfinite(out)):
        raise ExprDomainError(f"A(t) has non-finite entries at t={t}")
    return out


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing sample times; at least two points."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("a time grid needs at least two samples")
        if not np.all(np.isfinite(s)):
            raise ValueError("grid samples must be finite")
        if np.any(np.diff(s) <= 0.0):
            raise ValueError("grid samples must be strictly increasing")
        object.__setattr__(self, "samples", s)
        s.setflags(write=False)

    @classmethod
    def uniform(cls, t0: float, t_end: float, num: int) -> "TimeGrid":
        if num < 2:
            raise ValueError("num must be >= 2")
        return cls(np.linspace(t0, t_end, num))

    @property
    def t0(self) -> float:
        return float(self.samples[0])

    @property
    def t_end(self) -> float:
        return float(self.samples[-1])

    def __len__(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of x' = A(t) x on a grid.

    Euclidean norms are recomputed from the states on access, never stored;
    weighted norms are attached by the analysis pipeline when a weight
    trajectory is available.
    """

    grid: TimeGrid
    states: np.ndarray  # shape (len(grid), n)
    norms_h: np.ndarray | None = field(default=None)

    def __post_init__(self):
        st = np.asarray(self.states, dtype=float)
        if st.shape[0] != len(self.grid):
            raise ValueError("states/grid length mismatch")
        object.__setattr__(self, "states", st)
        st.setflags(write=False)

    @property
    def norms_i(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


def solve_ivp(
    spec: SystemSpec,
    x0,
    grid: TimeGrid,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> Trajectory:
    """Integrate the system from x(t0) = x0, sampling on the grid."""
    spec = resolve(spec)
    x = np.asarray(x0, dtype=float).reshape(-1)
    if x.shape[0] != spec.n:
        raise ValueError(f"x0 has length {x.shape[0]}, system dimension is {spec.n}")
    if grid.t0 < spec.t0:
        raise ValueError("grid starts before the system's initial time")

    def f(t, y):
        return eval_A(spec, t) @ y

    states = solve_dense(f, grid.samples, x, rtol=rtol, atol=atol)
    return Trajectory(grid=grid, states=states)


def transition_matrices(
    spec: SystemSpec,
    ts,
    tau: float,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> np.ndarray:
    """Transition matrices mapping the state at ``tau`` to each time in ``ts``.

    ``ts`` must be ascending with ts[0] >= tau; one integration of the matrix
    initial-value problem (columns stacked into a single system so they share
    step-size control) produces all of them.  Returns shape (len(ts), n, n).
    """
    spec = resolve(spec)
    ts = np.asarray(ts, dtype=float)
    if ts.size and ts[0] < tau:
        raise ValueError("all sample times must satisfy t >= tau")
    n = spec.n
    eye = np.eye(n)
    if ts.size == 0:
        return np.empty((0, n, n))
    prepend = ts[0] > tau
    t_eval = np.concatenate(([tau], ts)) if prepend else ts

    def f(t, y):
        return (eval_A(spec, t) @ y.reshape(n, n)).reshape(-1)

    rows = solve_dense(f, t_eval, eye.reshape(-1), rtol=rtol, atol=atol)
    phis = rows.reshape(-1, n, n)
    return phis[1:] if prepend else phis


def transition_matrix(
    spec: SystemSpec,
    t: float,
    tau: float,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> np.ndarray:
    """The transition matrix for a single (t, tau) pair, t >= tau >= t0.

    Reversed-order propagators (first time >= second) are always obtained by
    forward integration from the second argument, never by matrix inversion.
    """
    spec = resolve(spec)
    if t < tau:
        raise ValueError("transition_matrix requires t >= tau")
    if tau < spec.t0:
        raise ValueError("tau is below the system's initial time")
    if t == tau:
        return np.eye(spec.n)
    return transition_matrices(spec, [t], tau, rtol=rtol, atol=atol)[0]

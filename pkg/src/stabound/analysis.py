"""End-to-end analysis pipeline: system in, CSV envelopes and report out.

The pipeline chain is: evaluate A on the grid, build the weight trajectory
(algebraic solve for constant systems, backward sweep otherwise), form all
envelopes, integrate the reference trajectory when an initial state is
given, extract and verify the decay certificate, and run the self-checks.
Everything is deterministic per configuration: the CSV is byte-identical
across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    BoundEnvelope,
    Certificate,
    LogMeasureCriterion,
    SimplifiedBounds,
    certificate_from_H,
    log_measure_check,
    main_bounds_euclidean,
    main_bounds_weighted,
    operator_norm_bounds,
    operator_norm_sup,
    rugh_bounds,
    simplified_bounds,
    verify_certificate,
)
from .errors import ConfigError, ExprError
from .gramian import (
    WeightTrajectory,
    constant_weight_trajectory,
    gramian_ltv,
    lyapunov_residual,
)
from .matrixops import char_poly_eigs_2x2, weighted_vec_norm
from .systems import (
    DEFAULT_ATOL,
    DEFAULT_RTOL,
    SystemSpec,
    TimeGrid,
    Trajectory,
    resolve,
    solve_ivp,
)

CSV_HEADER = (
    "t,norm_x_I,lower_rugh,upper_rugh,lower_main,upper_main,"
    "norm_x_H,lower_main_H,upper_main_H,lambda_min_H,lambda_max_H"
)

# how many grid points (per axis) the certificate verification sweep uses
_PAIR_GRID_SIZE = 20


def system_from_json(obj) -> SystemSpec:
    """Build a SystemSpec from the JSON system schema.

    Accepts a dict or a JSON string of one of:
      {"kind": "constant",   "A": [[...numbers...], ...]}
      {"kind": "expression", "A": [["-1", "exp(-t)"], ...]}
      {"kind": "builtin",    "id": "example3_ltv"}
    """
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as err:
            raise ConfigError(f"system JSON does not parse: {err}") from err
    if not isinstance(obj, dict):
        raise ConfigError("system description must be a JSON object")
    kind = obj.get("kind")
    if kind == "constant":
        if "A" not in obj:
            raise ConfigError('constant system needs an "A" matrix')
        try:
            return SystemSpec.constant(obj["A"])
        except (ValueError, TypeError) as err:
            raise ConfigError(f'bad "A" matrix: {err}') from err
    if kind == "expression":
        if "A" not in obj:
            raise ConfigError('expression system needs an "A" matrix of strings')
        rows = obj["A"]
        try:
            return SystemSpec.expression(rows)
        except ExprError as err:
            raise ConfigError(f"bad expression entry: {err}") from err
        except (ValueError, TypeError) as err:
            raise ConfigError(f'bad "A" matrix: {err}') from err
    if kind == "builtin":
        if "id" not in obj:
            raise ConfigError('builtin system needs an "id"')
        return SystemSpec.builtin(str(obj["id"]))
    raise ConfigError(f'system "kind" must be constant, expression or builtin, got {kind!r}')


@dataclass
class AnalysisConfig:
    """Everything run_analyze needs; validated on construction."""

    system: SystemSpec
    t_end: float
    t0: float = 0.0
    num_samples: int = 501
    horizon_t: float | None = None
    x0: np.ndarray | None = None
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    gamma_tilde: float | None = None
    lambda_tilde: float | None = None

    def __post_init__(self):
        if self.num_samples < 2:
            raise ConfigError("num_samples must be >= 2")
        if not self.t_end > self.t0:
            raise ConfigError("t_end must exceed t0")
        if self.horizon_t is not None and not self.horizon_t > self.t_end:
            raise ConfigError("horizon_t must exceed t_end")
        if (self.gamma_tilde is None) != (self.lambda_tilde is None):
            raise ConfigError("gamma_tilde and lambda_tilde must be given together")
        if self.x0 is not None:
            self.x0 = np.asarray(self.x0, dtype=float).reshape(-1)

    def grid(self) -> TimeGrid:
        return TimeGrid.uniform(self.t0, self.t_end, self.num_samples)


@dataclass
class AnalysisReport:
    """Machine-readable pipeline summary (serialize with ``report_to_json``)."""

    certificate: Certificate
    certificate_margin: float
    L: float
    tail_bound: float
    lyapunov_residual: float
    horizon_t: float
    simplified: SimplifiedBounds
    envelope_summary: dict[str, dict[str, float]]
    log_measure: LogMeasureCriterion | None = field(default=None)
    system_eigenvalues: list[complex] | None = field(default=None)


@dataclass
class AnalysisResult:
    """Everything the pipeline produced, for callers that want the arrays too."""

    csv_text: str
    report: AnalysisReport
    weights: WeightTrajectory
    envelopes: dict[str, BoundEnvelope]
    trajectory: Trajectory | None


def _envelope_summary(env: BoundEnvelope, norms: np.ndarray | None) -> dict[str, float]:
    summary = {
        "lower_start": float(env.lower[0]),
        "lower_end": float(env.lower[-1]),
        "upper_start": float(env.upper[0]),
        "upper_end": float(env.upper[-1]),
    }
    if norms is not None:
        summary["min_lower_margin"] = float(np.min(norms - env.lower))
        summary["min_upper_margin"] = float(np.min(env.upper - norms))
    return summary


def _fmt(x: float) -> str:
    return "%.17g" % x


def _pair_grid(grid: TimeGrid) -> TimeGrid:
    if len(grid) <= _PAIR_GRID_SIZE:
        return grid
    idx = np.unique(np.linspace(0, len(grid) - 1, _PAIR_GRID_SIZE).round().astype(int))
    return TimeGrid(grid.samples[idx])


def run_analyze(cfg: AnalysisConfig) -> AnalysisResult:
    """Run the full pipeline for one configuration.

    Raises NotUasError when the weight construction shows the system is not
    uniformly asymptotically stable, and ConfigError for bad configurations.
    """
    spec = resolve(cfg.system)
    if spec.t0 > cfg.t0:
        spec = SystemSpec(
            kind=spec.kind,
            n=spec.n,
            a_const=None if spec.a_const is None else spec.a_const.copy(),
            a_exprs=spec.a_exprs,
            builtin_id=None,
            t0=cfg.t0,
        )
    grid = cfg.grid()

    if spec.kind == "constant":
        weights = constant_weight_trajectory(spec.a_const, grid)
    else:
        weights = gramian_ltv(spec, grid, horizon_t=cfg.horizon_t)

    x0_norm = 1.0 if cfg.x0 is None else float(np.linalg.norm(cfg.x0))
    L = operator_norm_sup(spec, grid)
    envelopes = {
        "rugh": rugh_bounds(spec, x0_norm, grid),
        "operator_norm": operator_norm_bounds(spec, x0_norm, grid, L),
        "main": main_bounds_euclidean(weights, x0_norm),
    }
    trajectory = None
    norms_i = None
    norms_h = None
    if cfg.x0 is not None:
        if cfg.x0.shape[0] != spec.n:
            raise ConfigError(f"x0 has length {cfg.x0.shape[0]}, system dimension is {spec.n}")
        envelopes["main_weighted"] = main_bounds_weighted(weights, cfg.x0)
        trajectory = solve_ivp(spec, cfg.x0, grid, rtol=cfg.rtol, atol=cfg.atol)
        norms_i = trajectory.norms_i
        norms_h = np.array(
            [weighted_vec_norm(s, h) for s, h in zip(trajectory.states, weights.h_samples)]
        )
        trajectory = Trajectory(grid=grid, states=trajectory.states, norms_h=norms_h)

    certificate = certificate_from_H(weights)
    margin = verify_certificate(spec, certificate, _pair_grid(grid))
    residual = lyapunov_residual(spec, weights)

    log_measure = None
    if cfg.gamma_tilde is not None:
        log_measure = log_measure_check(spec, grid, cfg.gamma_tilde, cfg.lambda_tilde)

    summary = {
        name: _envelope_summary(
            env, norms_h if name == "main_weighted" else norms_i
        )
        for name, env in envelopes.items()
    }
    eigs = None
    if spec.kind == "constant" and spec.n == 2:
        eigs = list(char_poly_eigs_2x2(spec.a_const))

    report = AnalysisReport(
        certificate=certificate,
        certificate_margin=margin,
        L=L,
        tail_bound=weights.tail_bound,
        lyapunov_residual=residual,
        horizon_t=weights.horizon_t,
        simplified=simplified_bounds(weights, x0_norm),
        envelope_summary=summary,
        log_measure=log_measure,
        system_eigenvalues=eigs,
    )

    nan = float("nan")
    lines = [CSV_HEADER]
    main_env = envelopes["main"]
    rugh_env = envelopes["rugh"]
    weighted_env = envelopes.get("main_weighted")
    for k, t in enumerate(grid.samples):
        row = [
            t,
            norms_i[k] if norms_i is not None else nan,
            rugh_env.lower[k],
            rugh_env.upper[k],
            main_env.lower[k],
            main_env.upper[k],
            norms_h[k] if norms_h is not None else nan,
            weighted_env.lower[k] if weighted_env is not None else nan,
            weighted_env.upper[k] if weighted_env is not None else nan,
            weights.lmin[k],
            weights.lmax[k],
        ]
        lines.append(",".join(_fmt(v) for v in row))
    csv_text = "\n".join(lines) + "\n"

    return AnalysisResult(
        csv_text=csv_text,
        report=report,
        weights=weights,
        envelopes=envelopes,
        trajectory=trajectory,
    )


def report_to_json(report: AnalysisReport) -> str:
    """Serialize a report deterministically (sorted keys, null for absences)."""

    def _cert(c: Certificate | None):
        if c is None:
            return None
        return {"gamma": c.gamma, "lambda": c.lam, "method": c.method}

    payload = {
        "certificate": _cert(report.certificate),
        "certificate_margin": report.certificate_margin,
        "L": report.L,
        "tail_bound": report.tail_bound,
        "lyapunov_residual": report.lyapunov_residual,
        "horizon_t": report.horizon_t,
        "simplified_bounds": {
            "lower_coef": report.simplified.lower_coef,
            "lower_rate": report.simplified.lower_rate,
            "upper_coef": report.simplified.upper_coef,
            "upper_rate": report.simplified.upper_rate,
        },
        "envelope_summary": report.envelope_summary,
        "log_measure": None
        if report.log_measure is None
        else {
            "gamma_tilde": report.log_measure.gamma_tilde,
            "lambda_tilde": report.log_measure.lambda_tilde,
            "satisfied": report.log_measure.satisfied,
            "worst_margin": report.log_measure.worst_margin,
            "implied_certificate": _cert(report.log_measure.certificate),
        },
        "system_eigenvalues": None
        if report.system_eigenvalues is None
        else [{"re": z.real, "im": z.imag} for z in report.system_eigenvalues],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"

"""Rigorous solution-norm envelopes and decay certificates for x' = A(t) x.

Given a uniformly asymptotically stable linear system - constant,
expression-valued, or a built-in demo - the package constructs the
Gramian-type weight matrix H(t), evaluates lower and upper envelopes on the
Euclidean and weighted norms of all solutions, and extracts (gamma, lambda)
decay certificates.
"""

from .bounds import (
    BoundEnvelope,
    Certificate,
    LogMeasureCriterion,
    SimplifiedBounds,
    certificate_from_H,
    log_measure_check,
    main_bounds_euclidean,
    main_bounds_weighted,
    norm_conversion_bounds,
    operator_norm_bounds,
    operator_norm_sup,
    rugh_bounds,
    simplified_bounds,
    verify_certificate,
)
from .errors import (
    ConfigError,
    EigenConvergenceError,
    ExprDomainError,
    ExprError,
    ExprSyntaxError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    NotUasError,
    NumericalError,
    StaboundError,
    StiffnessError,
)
from .gramian import (
    EigenEnvelope,
    WeightTrajectory,
    constant_weight_trajectory,
    default_horizon,
    eigen_envelope,
    gramian_lti,
    gramian_ltv,
    lyapunov_residual,
)
from .matrixops import (
    EigenDecomposition,
    expm,
    induced_norm2,
    pd_sqrt,
    sym_eig,
    weighted_induced_norm,
    weighted_vec_norm,
)
from .scenarios import Scenario, builtin, random_uas
from .systems import (
    SystemSpec,
    TimeGrid,
    Trajectory,
    eval_A,
    solve_ivp,
    transition_matrices,
    transition_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BoundEnvelope",
    "Certificate",
    "ConfigError",
    "EigenConvergenceError",
    "EigenDecomposition",
    "EigenEnvelope",
    "ExprDomainError",
    "ExprError",
    "ExprSyntaxError",
    "LogMeasureCriterion",
    "NotPositiveDefiniteError",
    "NotSymmetricError",
    "NotUasError",
    "NumericalError",
    "Scenario",
    "SimplifiedBounds",
    "StaboundError",
    "StiffnessError",
    "SystemSpec",
    "TimeGrid",
    "Trajectory",
    "WeightTrajectory",
    "builtin",
    "certificate_from_H",
    "constant_weight_trajectory",
    "default_horizon",
    "eigen_envelope",
    "eval_A",
    "expm",
    "gramian_lti",
    "gramian_ltv",
    "induced_norm2",
    "log_measure_check",
    "lyapunov_residual",
    "main_bounds_euclidean",
    "main_bounds_weighted",
    "norm_conversion_bounds",
    "operator_norm_bounds",
    "operator_norm_sup",
    "pd_sqrt",
    "random_uas",
    "rugh_bounds",
    "simplified_bounds",
    "solve_ivp",
    "sym_eig",
    "transition_matrices",
    "transition_matrix",
    "verify_certificate",
    "weighted_induced_norm",
    "weighted_vec_norm",
]

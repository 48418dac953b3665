"""Public Python API for betactl.

Import data functions and numerical operations for programmatic use.
CLI behavior is unchanged; this module returns the same data without
formatting or printing.

Usage:
    from betactl.api import beta_eval, ray_via_krull, RaySpec
    reconstruction = ray_via_krull(RaySpec(1.0), [0.5, 1.5, 2.5])
"""

# --- Commands (dicts in, dicts out) ---
from betactl.commands.betatype import compare_generators
from betactl.commands.certify import (
    certify,
    certify_concavity,
    certify_final_corollary,
    certify_geometric,
    certify_limit,
    certify_log_convexity,
)
from betactl.commands.converge import convergence_report, emit_convergence_report
from betactl.commands.evaluate import evaluate, evaluate_grid
from betactl.commands.ray import reconstruct
from betactl.commands.scan import scan_surface

# --- Entry point ---
from betactl.config import RunConfig

# --- Beta-type functions ---
from betactl.core.betatype import (
    Generator,
    GeneratorPair,
    beta_type_eval,
    builtin_generator,
    equality_test,
    fit_exponential,
    ratio_cocycle_residual,
    is_gamma_generator,
)

# --- Convexity ---
from betactl.core.convexity import (
    Direction2,
    builtin_surface,
    corollary_certificate,
    directional_scan,
    directional_second_derivative,
    geometric_convexity_via_transform,
    hessian_form,
    is_geometrically_affine,
    jensen_geometric_check,
    scale_invariance_check,
)

# --- Solvers ---
from betactl.core.geo import GeoProblem, gm_converge, gm_eval, iter_approximants
from betactl.core.krull import (
    KrullProblem,
    SolverResult,
    check_shape,
    krull_eval,
    krull_eval_shifted,
    krull_terms,
    limit_check,
)

# --- Oracles ---
from betactl.core.oracle import (
    QuadratureConfig,
    beta_eval,
    beta_moment_eval,
    beta_recurrence_residual,
    beta_via_gamma,
    gamma_eval,
    gamma_recurrence_residual,
    log_beta_eval,
    log_gamma_eval,
    scaled_beta_moments,
)

# --- Beta ray ---
from betactl.core.ray import (
    F1_ray,
    F2_ray,
    F_ray,
    G_ray,
    P_poly,
    RaySpec,
    initial_condition,
    ray_oracle,
    ray_recurrence_residual,
    ray_via_gm,
    ray_via_krull,
)
from betactl.main import run

__all__ = [
    # Oracles
    "QuadratureConfig",
    "beta_eval",
    "beta_moment_eval",
    "beta_recurrence_residual",
    "beta_via_gamma",
    "gamma_eval",
    "gamma_recurrence_residual",
    "log_beta_eval",
    "log_gamma_eval",
    "scaled_beta_moments",
    # Solvers
    "GeoProblem",
    "KrullProblem",
    "SolverResult",
    "check_shape",
    "gm_converge",
    "gm_eval",
    "iter_approximants",
    "krull_eval",
    "krull_eval_shifted",
    "krull_terms",
    "limit_check",
    # Beta ray
    "F1_ray",
    "F2_ray",
    "F_ray",
    "G_ray",
    "P_poly",
    "RaySpec",
    "initial_condition",
    "ray_oracle",
    "ray_recurrence_residual",
    "ray_via_gm",
    "ray_via_krull",
    # Beta-type functions
    "Generator",
    "GeneratorPair",
    "beta_type_eval",
    "builtin_generator",
    "equality_test",
    "fit_exponential",
    "ratio_cocycle_residual",
    "is_gamma_generator",
    # Convexity
    "Direction2",
    "builtin_surface",
    "corollary_certificate",
    "directional_scan",
    "directional_second_derivative",
    "geometric_convexity_via_transform",
    "hessian_form",
    "is_geometrically_affine",
    "jensen_geometric_check",
    "scale_invariance_check",
    # Commands
    "certify",
    "certify_concavity",
    "certify_final_corollary",
    "certify_geometric",
    "certify_limit",
    "certify_log_convexity",
    "compare_generators",
    "convergence_report",
    "emit_convergence_report",
    "evaluate",
    "evaluate_grid",
    "reconstruct",
    "scan_surface",
    # Entry point
    "RunConfig",
    "run",
]

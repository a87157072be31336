"""Verification suites.

Checks are organized by suite and registered through a central registry; importing
this package registers all of them.
"""

from .averaging import (
    averaging_bound,
    averaging_constant,
    averaging_eigen_identity,
    averaging_self_adjoint,
    averaging_spectrum_mapping,
)
from .base import (
    CheckContext,
    CheckDefinition,
    CheckOutcome,
    CheckRecord,
    CheckStatus,
    ResidualReport,
    Suite,
    get_all_checks,
    get_check,
    get_checks_by_suite,
    run_checks,
)
from .dalembert import (
    dalembert_cc2,
    dalembert_eigen_action,
    dalembert_half_angle,
    dalembert_reflection,
    dalembert_shift_bound,
    dalembert_symmetry,
)
from .discrete import (
    discrete_eigen_residual,
    discrete_extremal_values,
    discrete_orthonormality,
    discrete_reconstruction,
    discrete_self_adjoint,
)
from .gamma import (
    gamma_band_count,
    gamma_cross_orthogonality,
    gamma_dirichlet_dimensions,
    gamma_kappa_inversion,
    gamma_normalization,
    gamma_orientation,
    gamma_second_derivative,
    gamma_source_p_value,
    gamma_unitarity,
    gamma_vertex_conditions,
)
from .wave import (
    wave_averaging_consistency,
    wave_constant_velocity,
    wave_eigen_velocity,
    wave_second_order,
    wave_zero_velocity,
)

__all__ = [
    # Base
    "CheckContext",
    "CheckDefinition",
    "CheckOutcome",
    "CheckRecord",
    "CheckStatus",
    "ResidualReport",
    "Suite",
    "get_all_checks",
    "get_check",
    "get_checks_by_suite",
    "run_checks",
    # Discrete
    "discrete_eigen_residual",
    "discrete_orthonormality",
    "discrete_self_adjoint",
    "discrete_reconstruction",
    "discrete_extremal_values",
    # Gamma
    "gamma_kappa_inversion",
    "gamma_source_p_value",
    "gamma_unitarity",
    "gamma_cross_orthogonality",
    "gamma_normalization",
    "gamma_vertex_conditions",
    "gamma_second_derivative",
    "gamma_orientation",
    "gamma_dirichlet_dimensions",
    "gamma_band_count",
    # Averaging
    "averaging_constant",
    "averaging_eigen_identity",
    "averaging_self_adjoint",
    "averaging_bound",
    "averaging_spectrum_mapping",
    # d'Alembert
    "dalembert_eigen_action",
    "dalembert_cc2",
    "dalembert_half_angle",
    "dalembert_symmetry",
    "dalembert_reflection",
    "dalembert_shift_bound",
    # Wave
    "wave_zero_velocity",
    "wave_eigen_velocity",
    "wave_constant_velocity",
    "wave_averaging_consistency",
    "wave_second_order",
]

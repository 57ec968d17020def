"""Holomorphic quantization on flat manifolds via tangent-space Gaussian
integration: reproducing-kernel Hilbert spaces of holomorphic functions,
Gauss-Hermite quadrature, ladder operators, and path-integral propagators,
with the circle as the fully validated reference model."""

__version__ = "0.1.0"

from .errors import FactorizationError, QuadratureError, ValidationError
from .geometry import (
    FlatChart,
    TangentComplex,
    chart_from_dict,
    chart_from_json,
    chart_to_dict,
    chart_to_json,
    complexify,
    exp_map,
    make_chart,
    norm_sq,
    volume_factor,
)
from .quadrature import (
    DEFAULT_ORDER,
    QuadratureRule,
    gaussian_rule,
    hermite_rule,
    integrate_tangent,
    tangent_blocks,
)
from .hilbert import (
    BasisSpec,
    GramData,
    HoloState,
    KernelRep,
    bargmann_monomial_basis,
    gram_matrix,
    inner_product,
    inner_product_exponential,
    operator_kernel,
    orthonormal_series_kernel,
    orthonormalize,
    alternating_ordering,
    project,
    project_coeffs,
    reproducing_kernel,
    state_norm,
)
from .cylinder import (
    DEFAULT_N,
    HeatKernelParams,
    calibrate_heat_kernel,
    cylinder_basis,
    cylinder_chart,
    gram_closed,
    heat_kernel_formula,
    heat_rho,
    heat_rho_winding,
)
from .operators import (
    OperatorMatrix,
    adjointness_residual,
    hamiltonian_free,
    ladder_lower,
    ladder_raise,
    to_orthonormal_frame,
)
from .propagator import (
    PropagatorConfig,
    evolve,
    evolve_exact,
    greens_spectral,
    greens_winding,
    infinitesimal_step,
    step_matrix,
)
from .validation import CriterionResult, run_criteria

__all__ = [
    "__version__",
    "ValidationError",
    "QuadratureError",
    "FactorizationError",
    "FlatChart",
    "TangentComplex",
    "make_chart",
    "complexify",
    "exp_map",
    "norm_sq",
    "volume_factor",
    "chart_to_dict",
    "chart_from_dict",
    "chart_to_json",
    "chart_from_json",
    "QuadratureRule",
    "DEFAULT_ORDER",
    "hermite_rule",
    "gaussian_rule",
    "integrate_tangent",
    "tangent_blocks",
    "BasisSpec",
    "GramData",
    "KernelRep",
    "HoloState",
    "bargmann_monomial_basis",
    "inner_product",
    "inner_product_exponential",
    "gram_matrix",
    "orthonormalize",
    "alternating_ordering",
    "reproducing_kernel",
    "orthonormal_series_kernel",
    "operator_kernel",
    "project",
    "project_coeffs",
    "state_norm",
    "DEFAULT_N",
    "HeatKernelParams",
    "cylinder_chart",
    "cylinder_basis",
    "gram_closed",
    "heat_rho",
    "heat_rho_winding",
    "heat_kernel_formula",
    "calibrate_heat_kernel",
    "OperatorMatrix",
    "ladder_lower",
    "ladder_raise",
    "hamiltonian_free",
    "to_orthonormal_frame",
    "adjointness_residual",
    "PropagatorConfig",
    "step_matrix",
    "infinitesimal_step",
    "evolve",
    "evolve_exact",
    "greens_winding",
    "greens_spectral",
    "CriterionResult",
    "run_criteria",
]

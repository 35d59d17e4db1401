"""Phase-space toolkit for superoscillating Gaussian superpositions.

Builds cat states and superoscillating combs of displaced squeezed
Gaussians, evaluates their Wigner distributions exactly through closed-form
pairwise kernels, validates against a direct-quadrature oracle, and
measures interference structure scales (tile area, recovered oscillation
strength, patch area, overspill and displacement sensitivity).
"""

from .superosc import (
    CoeffTable,
    SuperoscParams,
    eval_f_direct,
    eval_f_fourier,
    fourier_coeffs,
    local_expansion,
    phase_gradient,
)
from .states import (
    GaussianComponent,
    PhysicalConstants,
    StateSpec,
    build_cat,
    build_psi,
    eval_psi,
    norm_squared,
    state_from_text,
    state_to_text,
)
from .wigner import (
    GridWindow,
    MixtureSpec,
    MixtureTerm,
    PhaseSpaceGrid,
    compass_mixture,
    cross_state,
    eval_grid,
    eval_mixture,
    eval_wigner,
    finest_fringe,
    marginal_x,
    overlap,
    pair_kernel,
    purity,
    suggested_window,
    total_integral,
    wigner_bound,
)
from .oracle import QuadratureSpec, default_quadrature, norm_quadrature, wigner_quadrature
from .analysis import (
    OverspillResult,
    ScaleReport,
    central_cut_crossings,
    displacement_sensitivity,
    half_overlap_displacement,
    overspill_check,
    superosc_scale,
    zurek_scale,
)

__version__ = "0.1.0"

__all__ = [
    "CoeffTable",
    "GaussianComponent",
    "GridWindow",
    "MixtureSpec",
    "MixtureTerm",
    "OverspillResult",
    "PhaseSpaceGrid",
    "PhysicalConstants",
    "QuadratureSpec",
    "ScaleReport",
    "StateSpec",
    "SuperoscParams",
    "build_cat",
    "build_psi",
    "central_cut_crossings",
    "compass_mixture",
    "cross_state",
    "default_quadrature",
    "displacement_sensitivity",
    "eval_f_direct",
    "eval_f_fourier",
    "eval_grid",
    "eval_mixture",
    "eval_psi",
    "eval_wigner",
    "finest_fringe",
    "fourier_coeffs",
    "half_overlap_displacement",
    "local_expansion",
    "marginal_x",
    "norm_quadrature",
    "norm_squared",
    "overlap",
    "overspill_check",
    "pair_kernel",
    "phase_gradient",
    "purity",
    "state_from_text",
    "state_to_text",
    "suggested_window",
    "superosc_scale",
    "total_integral",
    "wigner_bound",
    "wigner_quadrature",
    "zurek_scale",
]

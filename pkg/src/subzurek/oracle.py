"""Brute-force Wigner transform by direct quadrature of the defining integral.

This is the validation path for the closed-form engine: everything here is
computed from

    W(x,p) = (1/pi hbar) int psi*(x+y) psi(x-y) e^{2ipy/hbar} dy

by composite Simpson quadrature, with no reference to the pairwise kernel.
Deliberately slow and simple; windows and sample counts follow printed
criteria instead of adaptivity so failures are auditable.

For shared-width Gaussian superpositions the integrand's y-support is set by
the component centers and width alone: each (j,k) product term is a width-xi
Gaussian centered at (a_j - a_k)/2, so a half-width of max|center| + 8 xi
puts the truncated tails below 1e-16 of peak (e^{-64}).  The oscillation
rate is 2|p|/hbar from the transform phase plus O(1/xi) from the envelopes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import StateSpec, eval_psi

# Simpson panels per oscillation period demanded by the resolution criterion;
# the safety factor pushes the h^4 truncation error to ~1e-10 absolute.
_PANELS_PER_PERIOD = 16
_SAFETY = 16
_MAX_PANELS = 4_000_000


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration window half-width and even Simpson panel count."""

    y_halfwidth: float
    n_points: int

    def __post_init__(self):
        if not (self.y_halfwidth > 0.0) or not math.isfinite(self.y_halfwidth):
            raise ValueError(f"y_halfwidth must be positive, got {self.y_halfwidth}")
        if self.n_points < 2 or self.n_points % 2 != 0:
            raise ValueError(f"n_points must be a positive even panel count, got {self.n_points}")


def _envelope_rate(state: StateSpec) -> float:
    # fourth-root-of-f'''' effective rate of the width-xi Gaussian factors
    return 4.0 / state.xi


def required_panels(state: StateSpec, p: float, y_halfwidth: float) -> int:
    """Panel count from the fringe-resolution criterion, with safety margin."""
    rate = 2.0 * abs(p) / state.constants.hbar + _envelope_rate(state)
    base = int(math.ceil(_PANELS_PER_PERIOD * y_halfwidth * rate / math.pi))
    n = base * _SAFETY
    n += n % 2
    n = max(n, 64)
    if n > _MAX_PANELS:
        raise ValueError(
            f"resolution criterion demands {n} panels (p={p}, window={y_halfwidth}); "
            "point is outside the oracle's practical regime"
        )
    return n


def default_quadrature(state: StateSpec, p: float = 0.0) -> QuadratureSpec:
    """Window max|center| + 8 xi; panel count from the fringe criterion."""
    yh = float(np.max(np.abs(state.centers))) + 8.0 * state.xi
    return QuadratureSpec(y_halfwidth=yh, n_points=required_panels(state, p, yh))


def _check_window(state: StateSpec, quad: QuadratureSpec) -> None:
    # integrand envelope at the window edge, relative to peak: the nearest
    # (j,k) Gaussian center in y is at most max|center| from the edge
    spread = quad.y_halfwidth - float(np.max(np.abs(state.centers)))
    if spread <= 0.0 or math.exp(-(spread**2) / (state.xi**2)) > 1e-16:
        raise ValueError(
            f"quadrature window {quad.y_halfwidth} too narrow: integrand tail "
            "exceeds 1e-16 of peak at the boundary"
        )


def _simpson(values: np.ndarray, h: float):
    weights = np.ones(values.shape[-1])
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return (values @ weights) * (h / 3.0)


def wigner_quadrature_parts(
    state: StateSpec, x: float, p: float, quad: QuadratureSpec | None = None
) -> tuple[float, float]:
    """(real, imaginary) Simpson estimates of the transform integral.

    The imaginary part is a pure diagnostic; it cancels analytically.
    """
    if quad is None:
        quad = default_quadrature(state, p)
    else:
        minimum = required_panels(state, p, quad.y_halfwidth) // _SAFETY
        if quad.n_points < minimum:
            raise ValueError(
                f"n_points={quad.n_points} below the fringe-resolution minimum "
                f"{minimum} for p={p}"
            )
    _check_window(state, quad)
    hbar = state.constants.hbar
    y = np.linspace(-quad.y_halfwidth, quad.y_halfwidth, quad.n_points + 1)
    integrand = (
        np.conj(eval_psi(state, x + y))
        * eval_psi(state, x - y)
        * np.exp(2j * p * y / hbar)
    )
    h = 2.0 * quad.y_halfwidth / quad.n_points
    total = _simpson(integrand, h) / (math.pi * hbar)
    return float(np.real(total)), float(np.imag(total))


def wigner_quadrature(
    state: StateSpec, x: float, p: float, quad: QuadratureSpec | None = None
) -> float:
    """Real part of the quadrature Wigner transform at one phase-space point."""
    return wigner_quadrature_parts(state, x, p, quad)[0]


def norm_quadrature(state: StateSpec, quad: QuadratureSpec | None = None) -> float:
    """Simpson integral of |psi(x)|^2; window must cover all components +-8 xi."""
    required = float(np.max(np.abs(state.centers))) + 8.0 * state.xi
    if quad is None:
        n = required_panels(state, 0.0, required)
        quad = QuadratureSpec(y_halfwidth=required, n_points=n)
    elif quad.y_halfwidth < required:
        raise ValueError(
            f"norm window {quad.y_halfwidth} < required {required} (all components +-8 xi)"
        )
    y = np.linspace(-quad.y_halfwidth, quad.y_halfwidth, quad.n_points + 1)
    dens = np.abs(eval_psi(state, y)) ** 2
    h = 2.0 * quad.y_halfwidth / quad.n_points
    return float(_simpson(dens, h))

"""Closed-form Wigner engine for shared-width Gaussian superpositions.

For psi = sum_j c_j s(x - a_j) with s a width-xi Gaussian, the transform
W(x,p) = (1/pi hbar) int psi*(x+y) psi(x-y) e^{2ipy/hbar} dy evaluates in
closed form pair by pair.  Substituting the Gaussians and integrating:

    W(x,p) = sum_{j,k} conj(c_j) c_k K_{jk}(x,p),
    K_{jk}(x,p) = (1/pi hbar) e^{-(x-(a_j+a_k)/2)^2/xi^2}
                  e^{-p^2 xi^2/hbar^2} e^{i p (a_j-a_k)/hbar},

i.e. each ordered pair contributes a Gaussian spot halfway between the two
centers times a plane wave in p whose frequency is the center separation;
the conjugated coefficient's center enters the phase with the + sign (this
is fixed by the e^{+2ipy/hbar} convention above and is what the quadrature
oracle reproduces).  A two-component cat with real weights 1/sqrt2
collapses the sum to the familiar three terms: half-weight spots at the two
centers plus a full-amplitude cos(2 p dx / hbar) interference ridge at the
midpoint.

The pair structure makes grid evaluation separable: each pair is a rank-1
outer product of an x-envelope vector and a p-phase vector.  The separable
path and the literal pointwise path are both kept and must agree to 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import GaussianComponent, PhysicalConstants, StateSpec

IDENTITY = "identity"
QUARTER_TURN = "quarter_turn"
_ROTATIONS = (IDENTITY, QUARTER_TURN)

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class GridWindow:
    """Endpoint-inclusive rectangular (x,p) sampling lattice.

    Sample (i,j) sits at x = x_min + i*(x_max-x_min)/(nx-1),
    p = p_min + j*(p_max-p_min)/(np-1).
    """

    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    np: int

    def __post_init__(self):
        for v in (self.x_min, self.x_max, self.p_min, self.p_max):
            if not math.isfinite(v):
                raise ValueError("grid bounds must be finite")
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValueError("grid window must have positive extent on both axes")
        if self.nx < 2 or self.np < 2:
            raise ValueError("grid needs at least 2 samples per axis")

    def x_coords(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def p_coords(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np)


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """A GridWindow plus the row-major (nx, np) value buffer."""

    window: GridWindow
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.window.nx, self.window.np):
            raise ValueError(
                f"value buffer shape {self.values.shape} does not match "
                f"(nx, np) = ({self.window.nx}, {self.window.np})"
            )

    def x_coords(self) -> np.ndarray:
        return self.window.x_coords()

    def p_coords(self) -> np.ndarray:
        return self.window.p_coords()


@dataclass(frozen=True)
class MixtureTerm:
    state: StateSpec
    weight: float
    rotation: str = IDENTITY

    def __post_init__(self):
        if self.rotation not in _ROTATIONS:
            raise ValueError(f"rotation must be one of {_ROTATIONS}, got {self.rotation!r}")
        if self.weight < 0.0:
            raise ValueError(f"mixture weights must be non-negative, got {self.weight}")


@dataclass(frozen=True)
class MixtureSpec:
    """Incoherent mixture of Wigner distributions, optionally quarter-turned."""

    terms: tuple[MixtureTerm, ...]

    def __post_init__(self):
        if len(self.terms) == 0:
            raise ValueError("mixture must have at least one term")
        total = sum(t.weight for t in self.terms)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"mixture weights sum to {total!r}, expected 1")

    @property
    def constants(self) -> PhysicalConstants:
        return self.terms[0].state.constants


def cross_state(state: StateSpec) -> MixtureSpec:
    """Balanced mixture of W_state with its quarter-turn: W+(x,p) = [W(x,p)+W(-p,x)]/2."""
    return MixtureSpec(
        terms=(
            MixtureTerm(state, 0.5, IDENTITY),
            MixtureTerm(state, 0.5, QUARTER_TURN),
        )
    )


def compass_mixture(L: float, xi: float, constants: PhysicalConstants | None = None) -> MixtureSpec:
    """Four-armed reference mixture with extents L = P: a two-component cat of
    separation L crossed with its own quarter-turn.

    Serves as the non-superoscillating baseline in sensitivity comparisons.
    """
    from .states import build_cat

    return cross_state(build_cat(L / 2.0, xi, constants))


def rotate_point(x, p):
    """Quarter-turn of the evaluation point: (x, p) -> (-p, x).

    Evaluating W at the returned point realizes the rotated distribution
    W'(x,p) = W(-p, x).  Four applications return the original point exactly.
    """
    return -p, x


def _common_xi(state: StateSpec) -> float:
    return state.xi  # raises on mixed widths


def pair_kernel(
    comp_a: GaussianComponent,
    comp_b: GaussianComponent,
    x,
    p,
    constants: PhysicalConstants,
) -> complex:
    """Ordered-pair kernel; comp_b is the conjugated side.

    Returns coeff_a * conj(coeff_b) * (1/pi hbar) * e^{-(x-(a+b)/2)^2/xi^2}
    * e^{-p^2 xi^2/hbar^2} * e^{i p (b-a)/hbar} with a, b the two centers.
    Summed over all ordered pairs of a state this yields the real W(x,p).
    Hermitian symmetry: kernel(a,b) = conj(kernel(b,a)).
    """
    if comp_a.xi != comp_b.xi:
        raise ValueError(f"pair kernel needs equal widths, got {comp_a.xi} and {comp_b.xi}")
    xi = comp_a.xi
    hbar = constants.hbar
    a, b = comp_a.center, comp_b.center
    mid = 0.5 * (a + b)
    envelope = np.exp(-((x - mid) ** 2) / (xi * xi)) * np.exp(-(p * p) * xi * xi / (hbar * hbar))
    phase = np.exp(1j * p * (b - a) / hbar)
    return comp_a.coeff * np.conj(comp_b.coeff) * envelope * phase / (math.pi * hbar)


def _pair_sum_complex(state: StateSpec, x, p):
    """Full ordered-pair kernel sum, complex; the imaginary part must cancel."""
    xi = _common_xi(state)
    hbar = state.constants.hbar
    centers = state.centers
    coeffs = state.coeffs
    xs = np.asarray(x, dtype=float)
    ps = np.asarray(p, dtype=float)
    acc = np.zeros(np.broadcast(xs, ps).shape, dtype=complex)
    gp = np.exp(-(ps * ps) * xi * xi / (hbar * hbar))
    n = len(centers)
    for j in range(n):
        for k in range(n):
            a, b = centers[j], centers[k]
            w = coeffs[j] * np.conj(coeffs[k])
            acc = acc + w * np.exp(-((xs - 0.5 * (a + b)) ** 2) / (xi * xi)) * gp * np.exp(
                1j * ps * (b - a) / hbar
            )
    return acc / (math.pi * hbar)


def eval_wigner(state: StateSpec, x, p):
    """W(x,p) for a shared-width Gaussian superposition, exact closed form.

    Exploits Hermitian pair symmetry: diagonal terms plus twice the real part
    of each j < k term; O(m^2/2) kernel evaluations for m components.
    Scalars in, float out; arrays broadcast.
    """
    xi = _common_xi(state)
    hbar = state.constants.hbar
    centers = state.centers
    coeffs = state.coeffs
    xs = np.asarray(x, dtype=float)
    ps = np.asarray(p, dtype=float)
    acc = np.zeros(np.broadcast(xs, ps).shape)
    gp = np.exp(-(ps * ps) * xi * xi / (hbar * hbar))
    m = len(centers)
    for j in range(m):
        aj, cj = centers[j], coeffs[j]
        acc = acc + abs(cj) ** 2 * np.exp(-((xs - aj) ** 2) / (xi * xi)) * gp
        for k in range(j + 1, m):
            ak, ck = centers[k], coeffs[k]
            w = cj * np.conj(ck)  # pair (j,k); k conjugated, phase +p*(a_k - a_j)
            arg = ps * (ak - aj) / hbar
            osc = 2.0 * (np.real(w) * np.cos(arg) - np.imag(w) * np.sin(arg))
            acc = acc + np.exp(-((xs - 0.5 * (aj + ak)) ** 2) / (xi * xi)) * gp * osc
    acc = acc / (math.pi * hbar)
    if acc.ndim == 0:
        return float(acc)
    return acc


def eval_mixture(mix: MixtureSpec, x, p):
    """Weighted sum of term evaluations; quarter-turn terms evaluate at (-p, x)."""
    acc = None
    for term in mix.terms:
        if term.rotation == QUARTER_TURN:
            xe, pe = rotate_point(x, p)
        else:
            xe, pe = x, p
        val = term.weight * eval_wigner(term.state, xe, pe)
        acc = val if acc is None else acc + val
    return acc


def wigner_bound(constants: PhysicalConstants) -> float:
    """|W| <= 1/(pi hbar) for any normalized pure state."""
    return 1.0 / (math.pi * constants.hbar)


# ---------------------------------------------------------------------------
# grid evaluation

def _state_grid_separable(state: StateSpec, xs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """Rank-1 accumulation: per-pair x-envelope (outer) p-phase vectors.

    Summation order is fixed (j, then k > j) so output is deterministic.
    """
    xi = _common_xi(state)
    hbar = state.constants.hbar
    centers = state.centers
    coeffs = state.coeffs
    gp = np.exp(-(ps * ps) * xi * xi / (hbar * hbar))
    out = np.zeros((xs.size, ps.size))
    m = len(centers)
    for j in range(m):
        aj, cj = centers[j], coeffs[j]
        ex = np.exp(-((xs - aj) ** 2) / (xi * xi))
        out += np.outer(ex, (abs(cj) ** 2) * gp)
        for k in range(j + 1, m):
            ak, ck = centers[k], coeffs[k]
            w = cj * np.conj(ck)
            arg = ps * (ak - aj) / hbar
            osc = 2.0 * (np.real(w) * np.cos(arg) - np.imag(w) * np.sin(arg))
            ex = np.exp(-((xs - 0.5 * (aj + ak)) ** 2) / (xi * xi))
            out += np.outer(ex, osc * gp)
    return out / (math.pi * hbar)


def _source_grid_separable(source, xs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    if isinstance(source, StateSpec):
        return _state_grid_separable(source, xs, ps)
    out = np.zeros((xs.size, ps.size))
    for term in source.terms:
        if term.rotation == QUARTER_TURN:
            # values[i, l] = W(-p_l, x_i): evaluate on the swapped lattice and
            # transpose back; the separable form needs no monotone axes.
            block = _state_grid_separable(term.state, -ps, xs).T
        else:
            block = _state_grid_separable(term.state, xs, ps)
        out += term.weight * block
    return out


def _source_grid_pointwise(source, xs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    # direct kernel-sum evaluation per point (row-vectorized); no rank-1
    # factorization, so it rounds independently of the separable path
    evaluate = eval_wigner if isinstance(source, StateSpec) else eval_mixture
    out = np.empty((xs.size, ps.size))
    for i, xv in enumerate(xs):
        out[i, :] = evaluate(source, float(xv), ps)
    return out


def eval_grid(source, window: GridWindow, method: str = "separable") -> PhaseSpaceGrid:
    """Fill the lattice with W values for a StateSpec or MixtureSpec.

    method="separable" (default) uses the rank-1 fast path; "pointwise"
    evaluates every sample independently.  The two agree to 1e-12 absolute.
    """
    if not isinstance(source, (StateSpec, MixtureSpec)):
        raise TypeError(f"source must be StateSpec or MixtureSpec, got {type(source)}")
    xs = window.x_coords()
    ps = window.p_coords()
    if method == "separable":
        values = _source_grid_separable(source, xs, ps)
    elif method == "pointwise":
        values = _source_grid_pointwise(source, xs, ps)
    else:
        raise ValueError(f"unknown grid method {method!r}")
    return PhaseSpaceGrid(window=window, values=values)


def eval_cut(source, axis: str, coords: np.ndarray):
    """1-D cut through the origin: axis 'p' varies p at x=0, 'x' varies x at p=0."""
    evaluate = eval_wigner if isinstance(source, StateSpec) else eval_mixture
    coords = np.asarray(coords, dtype=float)
    if axis == "p":
        return evaluate(source, 0.0, coords)
    if axis == "x":
        return evaluate(source, coords, 0.0)
    raise ValueError(f"cut axis must be 'x' or 'p', got {axis!r}")


# ---------------------------------------------------------------------------
# integrals on grids

def _trapz2d(values: np.ndarray, xs: np.ndarray, ps: np.ndarray) -> float:
    return float(np.trapezoid(np.trapezoid(values, ps, axis=1), xs))


def marginal_x(grid: PhaseSpaceGrid, state: StateSpec, envelope_tol: float = 1e-14) -> np.ndarray:
    """Position marginal int W dp per x-column (trapezoidal).

    For an adequate p-window this equals |psi(x)|^2.  The window check uses
    the analytic momentum envelope e^{-p^2 xi^2 / hbar^2} at the boundary.
    """
    xi = state.xi
    hbar = state.constants.hbar
    # both boundaries must sit in the momentum tail; the nearer one is worst
    p_edge = min(abs(grid.window.p_min), abs(grid.window.p_max))
    envelope = math.exp(-(p_edge**2) * xi * xi / (hbar * hbar))
    if envelope > envelope_tol:
        raise ValueError(
            f"p-window too narrow: boundary envelope {envelope:.3e} > {envelope_tol:.1e}"
        )
    return np.trapezoid(grid.values, grid.p_coords(), axis=1)


def total_integral(grid: PhaseSpaceGrid) -> float:
    """int int W dx dp (1 for a normalized state on an adequate window)."""
    return _trapz2d(grid.values, grid.x_coords(), grid.p_coords())


def overlap(grid_a: PhaseSpaceGrid, grid_b: PhaseSpaceGrid, constants: PhysicalConstants) -> float:
    """Phase-space overlap 2 pi hbar int int W_a W_b dx dp on a shared lattice.

    For pure states this equals |<a|b>|^2; the self-overlap is the purity.
    """
    if grid_a.window != grid_b.window:
        raise ValueError("overlap requires identical grid lattices")
    xs = grid_a.x_coords()
    ps = grid_a.p_coords()
    return 2.0 * math.pi * constants.hbar * _trapz2d(grid_a.values * grid_b.values, xs, ps)


def purity(source, window: GridWindow, constants: PhysicalConstants | None = None) -> float:
    """Self-overlap 2 pi hbar int int W^2 over the given window."""
    if constants is None:
        constants = source.constants
    grid = eval_grid(source, window)
    return overlap(grid, grid, constants)


# ---------------------------------------------------------------------------
# scales and window helpers

def finest_fringe(L: float, alpha: float, constants: PhysicalConstants) -> float:
    """Expected finest interference spacing h/(2 L alpha) along p."""
    if L <= 0:
        raise ValueError(f"extent L must be positive, got {L}")
    return constants.h / (2.0 * L * max(alpha, 1.0))


def integration_samples(width: float, max_rate: float, envelope_width: float) -> int:
    """Trapezoid sample count for integrals of Gaussian-enveloped fringes.

    Superoscillations are not high frequencies: the integrand's true band
    limit is max_rate (center separation L/hbar for W itself, 2L/hbar for
    W*W products), and the trapezoid rule on a Gaussian-enveloped
    band-limited integrand converges once the sampling rate beats that
    limit, no matter how fine the local structure looks.  envelope_width is
    the Gaussian factor's width along the integration axis (xi in x,
    hbar/xi in p; divide by sqrt2 for squared integrands); the 11/width
    margin pushes the envelope-spectrum aliasing below ~1e-12.
    """
    rate = max_rate + 11.0 / envelope_width
    return int(math.ceil(width * rate / (2.0 * math.pi))) * 2 + 1


def suggested_window(source, tail_sigmas: float = 6.0) -> GridWindow:
    """Window covering every component and the momentum envelope of a source.

    Quarter-turn terms map their x-extent onto the p-axis, so both axes take
    the union of direct and rotated requirements.  Sample counts are not set
    here (callers apply their own resolution rule); placeholders of 2 are
    used and must be overridden.
    """
    x_lo = math.inf
    x_hi = -math.inf
    p_half = 0.0
    for term in source.terms if isinstance(source, MixtureSpec) else [
        MixtureTerm(source, 1.0, IDENTITY)
    ]:
        st = term.state
        xi = st.xi
        hbar = st.constants.hbar
        lo = float(st.centers.min()) - tail_sigmas * xi
        hi = float(st.centers.max()) + tail_sigmas * xi
        ph = tail_sigmas * hbar / xi
        if term.rotation == QUARTER_TURN:
            p_half = max(p_half, max(abs(lo), abs(hi)))
            x_lo = min(x_lo, -ph)
            x_hi = max(x_hi, ph)
        else:
            x_lo = min(x_lo, lo)
            x_hi = max(x_hi, hi)
            p_half = max(p_half, ph)
    return GridWindow(x_min=x_lo, x_max=x_hi, p_min=-p_half, p_max=p_half, nx=2, np=2)

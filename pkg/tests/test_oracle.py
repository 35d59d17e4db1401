import math

import numpy as np
import pytest

from subzurek.oracle import (
    QuadratureSpec,
    _simpson,
    default_quadrature,
    norm_quadrature,
    wigner_quadrature,
    wigner_quadrature_parts,
)
from subzurek.states import (
    GaussianComponent,
    PhysicalConstants,
    StateSpec,
    build_cat,
    build_psi,
    eval_psi,
)
from subzurek.superosc import SuperoscParams
from subzurek.wigner import eval_wigner


def single_gaussian(xi=1.0):
    return StateSpec(
        components=(GaussianComponent(0.0, xi, 1.0 + 0j),),
        constants=PhysicalConstants(),
        normalized=True,
    )


class TestQuadratureSpec:
    def test_rejects_odd_panel_count(self):
        with pytest.raises(ValueError):
            QuadratureSpec(y_halfwidth=10.0, n_points=101)

    def test_rejects_nonpositive_window(self):
        with pytest.raises(ValueError):
            QuadratureSpec(y_halfwidth=0.0, n_points=100)

    def test_too_narrow_window_rejected(self):
        cat = build_cat(3.0, 1.0)
        with pytest.raises(ValueError, match="narrow"):
            wigner_quadrature(cat, 0.0, 0.0, QuadratureSpec(4.0, 4096))

    def test_below_resolution_floor_rejected(self):
        cat = build_cat(3.0, 1.0)
        with pytest.raises(ValueError, match="resolution"):
            wigner_quadrature(cat, 0.0, 2.0, QuadratureSpec(11.0, 64))


class TestWignerQuadrature:
    def test_single_gaussian_peak(self):
        val = wigner_quadrature(single_gaussian(), 0.0, 0.0)
        assert abs(val - 1.0 / math.pi) <= 1e-10

    def test_cat_matches_printed_closed_form(self):
        # three-term cat expression at (0, pi/6): interference phase is
        # cos(2 * (pi/6) * 3) = cos(pi) = -1
        dx, xi = 3.0, 1.0
        cat = build_cat(dx, xi)
        p = math.pi / 6.0
        g = lambda x, pp: math.exp(-x * x / xi**2 - pp * pp * xi**2) / math.pi
        printed = (0.5 * (g(-dx, p) + g(dx, p)) + g(0.0, p) * math.cos(2 * p * dx)) / (
            1.0 + math.exp(-(dx**2) / xi**2)
        )
        assert abs(wigner_quadrature(cat, 0.0, p) - printed) <= 1e-8

    def test_fig2b_random_points_match_closed_form(self):
        st = build_psi(SuperoscParams(12, 10.0), 3.0, 0.25)
        rng = np.random.default_rng(404)
        for _ in range(15):
            x = float(rng.uniform(-19, 19))
            p = float(rng.uniform(-14, 14))
            assert abs(eval_wigner(st, x, p) - wigner_quadrature(st, x, p)) <= 1e-8

    def test_imaginary_part_is_diagnostic_noise(self):
        st = build_psi(SuperoscParams(8, 10.0), 3.0, 0.25)
        re, im = wigner_quadrature_parts(st, 1.3, -2.1)
        assert abs(im) <= 1e-12 * max(1.0, abs(re))


class TestConvergence:
    def test_doubling_from_default_is_stable(self):
        for state, pt in (
            (build_cat(3.0, 1.0), (0.7, 1.3)),
            (build_psi(SuperoscParams(8, 10.0), 3.0, 0.25), (1.0, 2.0)),
        ):
            x, p = pt
            d = default_quadrature(state, p)
            v1 = wigner_quadrature(state, x, p, d)
            v2 = wigner_quadrature(state, x, p, QuadratureSpec(d.y_halfwidth, 2 * d.n_points))
            assert abs(v1 - v2) <= 1e-10

    def test_error_reduction_per_doubling_above_roundoff(self):
        # Gaussian-enveloped integrands converge faster than h^4 once the
        # oscillation is resolved (tail-free windows leave pure aliasing
        # error); each doubling above roundoff gains far more than the
        # h^4 factor 16 demands
        cat = build_cat(3.0, 1.0)
        x, p = 0.7, 5.0

        def raw(n):
            y = np.linspace(-11.0, 11.0, n + 1)
            f = np.conj(eval_psi(cat, x + y)) * eval_psi(cat, x - y) * np.exp(2j * p * y)
            w = np.ones(n + 1)
            w[1:-1:2] = 4.0
            w[2:-1:2] = 2.0
            return float(np.real(np.sum(w * f)) * (22.0 / n) / 3.0 / math.pi)

        ref = raw(2**17)
        err_coarse = abs(raw(64) - ref)
        err_fine = abs(raw(128) - ref)
        assert err_coarse > 1e-12  # above roundoff
        assert err_coarse / err_fine >= 12.0

    def test_simpson_core_is_fourth_order(self):
        # on an integrand with boundary-dominated error the classic h^4
        # ratio ~16 appears cleanly
        exact = math.e - 1.0
        errs = []
        for n in (16, 32, 64):
            xs = np.linspace(0.0, 1.0, n + 1)
            errs.append(abs(_simpson(np.exp(xs), 1.0 / n) - exact))
        assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.05)
        assert errs[1] / errs[2] == pytest.approx(16.0, rel=0.05)


class TestNormQuadrature:
    def test_normalized_single_gaussian(self):
        assert abs(norm_quadrature(single_gaussian()) - 1.0) <= 1e-10

    def test_coincident_unit_coefficients_give_four(self):
        # psi = 2 s(x), so the integral is 4 <s|s> = 4
        st = StateSpec(
            components=(
                GaussianComponent(0.0, 1.0, 1.0 + 0j),
                GaussianComponent(0.0, 1.0, 1.0 + 0j),
            ),
        )
        assert abs(norm_quadrature(st) - 4.0) <= 1e-10

    def test_fig1_matches_closed_form(self):
        from subzurek.states import norm_squared

        st = build_psi(SuperoscParams(8, 10.0), 3.0, 0.25)
        q = norm_quadrature(st)
        assert abs(q - norm_squared(st)) <= 1e-8 * q

    def test_window_criterion_enforced(self):
        st = build_cat(6.0, 1.0)
        with pytest.raises(ValueError, match="window"):
            norm_quadrature(st, QuadratureSpec(8.0, 4096))

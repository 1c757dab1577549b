import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holderforms.grids import GridField, c_theta_norm, make_weierstrass
from holderforms.mollify import (
    Mollifier,
    _discrete_kernel_1d,
    deta_l1,
    discrete_kernel_mass,
    eta,
    grad_supnorm,
    mollify,
    normalization_constant,
    verify_regularization,
)


def periodic_noise(seed, n=257):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(n)
    vals[-1] = vals[0]
    return GridField((0.0,), (1.0,), (n,), (True,), vals)


class TestKernelNormalization:
    @pytest.mark.parametrize("n", [1, 2])
    def test_analytic_unit_mass(self, n):
        # quadrature of A * exp(1/(|x|^2-1)) over the unit ball
        A = normalization_constant(n)
        if n == 1:
            t, w = np.polynomial.legendre.leggauss(400)
            x = 0.5 * (t + 1.0) * 2.0 - 1.0
            mass = float(np.sum(w * eta(x, 1)))
        else:
            t, w = np.polynomial.legendre.leggauss(400)
            r = 0.5 * (t + 1.0)
            g = eta(np.stack([r, np.zeros_like(r)], axis=-1), 2)
            mass = float(2.0 * math.pi * 0.5 * np.sum(w * g * r))
        assert abs(mass - 1.0) <= 1e-8

    def test_1d_constant_value(self):
        # int_{-1}^{1} exp(1/(x^2-1)) dx = 0.443994, so A = 1/0.443994
        assert normalization_constant(1) == pytest.approx(2.25228362104358,
                                                          rel=1e-10)

    def test_eta_vanishes_outside_support(self):
        assert eta(np.array([1.0, -1.2, 3.0]), 1).tolist() == [0.0, 0.0, 0.0]

    def test_deta_1d_closed_form(self):
        # |eta'| integrates to 2 eta(0) in one dimension
        want = 2.0 * float(eta(np.array([0.0]), 1)[0])
        assert abs(deta_l1(1) - want) <= 1e-6

    def test_deta_2d_positive_and_finite(self):
        v = deta_l1(2)
        assert 0.0 < v < 10.0

    @pytest.mark.parametrize("h,eps", [(1 / 256, 0.02), (1 / 256, 0.05),
                                       (1 / 1024, 0.1), (1 / 4096, 0.03)])
    def test_discrete_mass_exactly_one(self, h, eps):
        w = _discrete_kernel_1d(h, eps)
        assert discrete_kernel_mass(w) == 1.0

    def test_mollifier_bundle(self):
        m = Mollifier(1)
        assert m.A == pytest.approx(normalization_constant(1))
        assert m.deta_l1 == pytest.approx(deta_l1(1))


class TestMollify:
    def test_constant_field_is_fixed(self):
        f = GridField((0.0,), (1.0,), (129,), (True,), np.full(129, 3.5))
        g = mollify(f, 0.05)
        np.testing.assert_array_equal(g.values, 3.5)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 100), eps=st.sampled_from([0.02, 0.05, 0.1]))
    def test_sup_never_grows(self, seed, eps):
        f = periodic_noise(seed)
        g = mollify(f, eps)
        assert np.max(np.abs(g.values)) <= np.max(np.abs(f.values))

    def test_smooth_field_converges_as_eps_shrinks(self):
        n = 1025
        x = np.linspace(0.0, 1.0, n)
        f = GridField((0.0,), (1.0,), (n,), (True,), np.sin(2 * np.pi * x))
        errs = [np.max(np.abs(mollify(f, e).values - f.values))
                for e in (0.2, 0.1, 0.05)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 0.05

    def test_nonperiodic_output_shrinks_to_interior(self):
        n = 513
        x = np.linspace(0.0, 1.0, n)
        f = GridField((0.0,), (1.0,), (n,), (False,), x ** 2)
        g = mollify(f, 0.1)
        h = 1.0 / (n - 1)
        assert g.lo[0] >= 0.1 - h
        assert g.hi[0] <= 0.9 + h

    def test_nonperiodic_epsilon_too_large_rejected(self):
        f = GridField((0.0,), (1.0,), (65,), (False,),
                      np.linspace(0.0, 1.0, 65))
        with pytest.raises(ValueError):
            mollify(f, 0.6)

    def test_2d_constant_field_is_fixed(self):
        vals = np.full((65, 65), -1.25)
        f = GridField((0.0, 0.0), (1.0, 1.0), (65, 65), (True, True), vals)
        g = mollify(f, 0.05)
        np.testing.assert_allclose(g.values, -1.25, atol=1e-12)

    def test_kink_smoothing_bound(self):
        # |x - 1/2| is Lipschitz; mollification moves it by at most eps
        n = 1025
        x = np.linspace(0.0, 1.0, n)
        f = GridField((0.0,), (1.0,), (n,), (True,), np.abs(x - 0.5))
        g = mollify(f, 0.1)
        xs = np.linspace(g.lo[0], g.hi[0], 200)
        assert np.max(np.abs(g.evaluate(xs) - np.abs(xs - 0.5))) <= 0.1


class TestGradSupnorm:
    def test_linear_ramp(self):
        n = 129
        x = np.linspace(0.0, 1.0, n)
        f = GridField((0.0,), (1.0,), (n,), (False,), 3.0 * x)
        assert grad_supnorm(f) == pytest.approx(3.0, rel=1e-10)

    def test_sine_derivative(self):
        n = 2049
        x = np.linspace(0.0, 1.0, n)
        f = GridField((0.0,), (1.0,), (n,), (True,), np.sin(2 * np.pi * x))
        assert grad_supnorm(f) == pytest.approx(2 * np.pi, rel=1e-4)


class TestRegularizationBounds:
    def test_weierstrass_all_three_bounds(self):
        u = make_weierstrass(0.5, 2, 8, 4096)
        reports = verify_regularization(u, 0.5, [0.02, 0.05, 0.1])
        for r in reports:
            assert r.pass_b, r
            assert r.pass_c, r
            assert r.pass_d, r

    def test_measured_error_scales_like_sqrt_eps(self):
        u = make_weierstrass(0.5, 2, 8, 4096)
        r1, r2 = verify_regularization(u, 0.5, [0.025, 0.1])
        # quadrupling eps should roughly double the sup error, never more
        assert r2.measured_c <= 2.5 * r1.measured_c

    def test_frozen_norm_is_respected(self):
        u = make_weierstrass(0.5, 2, 6, 1024)
        est = c_theta_norm(u, 0.5)
        reports = verify_regularization(u, 0.5, [0.05], norm=est)
        assert reports[0].bound_c == pytest.approx(est.cnorm * 0.05 ** 0.5)

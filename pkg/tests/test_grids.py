import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holderforms.grids import (
    GridField,
    UnderResolvedError,
    extend_constant_y,
    holder_seminorm,
    c_theta_norm,
    load_csv,
    make_weierstrass,
    save_csv,
    weierstrass_callable,
)


def linear_field(n=33, periodic=False):
    x = np.linspace(0.0, 1.0, n)
    return GridField((0.0,), (1.0,), (n,), (periodic,), 2.0 * x - 0.5)


class TestGridField:
    def test_bilinear_is_exact_on_linear_data(self):
        f = linear_field()
        pts = np.array([0.0, 0.1234, 0.5, 0.999, 1.0])
        np.testing.assert_allclose(f.evaluate(pts), 2.0 * pts - 0.5,
                                   atol=1e-14)

    def test_scalar_like_queries(self):
        f = linear_field()
        assert f.evaluate(np.array([0.25]))[0] == pytest.approx(0.0)

    def test_periodic_wrap(self):
        n = 65
        x = np.linspace(0.0, 1.0, n)
        vals = np.sin(2 * np.pi * x)
        f = GridField((0.0,), (1.0,), (n,), (True,), vals)
        a = f.evaluate(np.array([0.1]))
        b = f.evaluate(np.array([1.1]))
        assert a == pytest.approx(b, abs=1e-12)

    def test_periodic_endpoint_mismatch_rejected(self):
        vals = np.linspace(0.0, 1.0, 17)  # endpoints differ
        with pytest.raises(ValueError):
            GridField((0.0,), (1.0,), (17,), (True,), vals)

    def test_out_of_window_query_rejected(self):
        f = linear_field()
        with pytest.raises(ValueError):
            f.evaluate(np.array([1.5]))

    def test_distance_uses_shortest_wrap(self):
        n = 33
        f = GridField((0.0,), (1.0,), (n,), (True,), np.zeros(n))
        d = f.distance(np.array([[0.05]]), np.array([[0.95]]))
        assert d[0] == pytest.approx(0.1)

    def test_2d_bilinear_matches_tensor_polynomial(self):
        nx, ny = 21, 17
        x = np.linspace(0.0, 1.0, nx)[:, None]
        y = np.linspace(0.0, 2.0, ny)[None, :]
        vals = 3.0 * x + 0.5 * y - x * y
        f = GridField((0.0, 0.0), (1.0, 2.0), (nx, ny), (False, False), vals)
        pts = np.array([[0.3, 0.7], [0.95, 1.9], [0.0, 0.0]])
        want = 3.0 * pts[:, 0] + 0.5 * pts[:, 1] - pts[:, 0] * pts[:, 1]
        np.testing.assert_allclose(f.evaluate(pts), want, atol=1e-13)


class TestHolderSeminorm:
    def test_lipschitz_line_has_unit_slope(self):
        f = linear_field(129)
        est = holder_seminorm(f, 1.0)
        assert est.seminorm == pytest.approx(2.0, rel=1e-12)

    def test_theta_must_be_in_range(self):
        f = linear_field()
        for bad in (0.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                holder_seminorm(f, bad)

    def test_root_singularity_seminorm(self):
        # f(x) = sqrt(x) has H_{1/2} = 1, attained at pairs touching 0
        n = 513
        x = np.linspace(0.0, 1.0, n)
        f = GridField((0.0,), (1.0,), (n,), (False,), np.sqrt(x))
        est = holder_seminorm(f, 0.5)
        assert est.seminorm == pytest.approx(1.0, rel=1e-9)

    def test_monotone_under_pair_refinement(self):
        f = make_weierstrass(0.5, 2, 6, 512)
        rng = np.random.default_rng(7)
        pairs = rng.integers(0, f.values.size, size=(200, 2))
        coarse = holder_seminorm(f, 0.5, pairs=pairs).seminorm
        more = rng.integers(0, f.values.size, size=(2000, 2))
        refined = holder_seminorm(f, 0.5,
                                  pairs=np.vstack([pairs, more])).seminorm
        assert refined >= coarse

    def test_cnorm_is_sup_plus_seminorm(self):
        f = linear_field(65)
        est = c_theta_norm(f, 1.0)
        assert est.cnorm == pytest.approx(est.supnorm + est.seminorm)

    @settings(max_examples=25, deadline=None)
    @given(scale=st.floats(0.1, 50.0), seed=st.integers(0, 10))
    def test_scale_equivariance(self, scale, seed):
        rng = np.random.default_rng(seed)
        vals = rng.standard_normal(64)
        f = GridField((0.0,), (1.0,), (64,), (False,), vals)
        g = GridField((0.0,), (1.0,), (64,), (False,), scale * vals)
        a = holder_seminorm(f, 0.7).seminorm
        b = holder_seminorm(g, 0.7).seminorm
        assert b == pytest.approx(scale * a, rel=1e-12)


class TestWeierstrass:
    def test_value_at_origin_is_the_cosine_sum(self):
        w = weierstrass_callable(0.5, 2, 8)
        want = sum(2.0 ** (-0.5 * k) for k in range(8))
        assert w(np.array([0.0]))[0] == pytest.approx(want, abs=1e-14)

    def test_grid_agrees_with_callable_on_nodes(self):
        f = make_weierstrass(0.5, 2, 6, 256)
        w = weierstrass_callable(0.5, 2, 6)
        x = np.linspace(0.0, 1.0, 256)
        np.testing.assert_allclose(f.values, w(x), atol=1e-12)

    def test_underresolved_grid_rejected(self):
        with pytest.raises(UnderResolvedError):
            make_weierstrass(0.5, 2, 8, 64)

    def test_periodicity(self):
        w = weierstrass_callable(0.4, 3, 4)
        x = np.array([0.13, 0.57])
        np.testing.assert_allclose(w(x), w(x + 1.0), atol=1e-12)

    def test_seminorm_stable_under_resolution_doubling(self):
        a = holder_seminorm(make_weierstrass(0.5, 2, 8, 1024), 0.5).seminorm
        b = holder_seminorm(make_weierstrass(0.5, 2, 8, 2048), 0.5).seminorm
        assert abs(a - b) / b < 0.1


class TestExtendConstantY:
    def test_constant_in_second_coordinate(self):
        f = make_weierstrass(0.5, 2, 5, 128)
        g = extend_constant_y(f, 9)
        pts_lo = np.array([[0.3, 0.1]])
        pts_hi = np.array([[0.3, 0.9]])
        assert g.evaluate(pts_lo)[0] == pytest.approx(g.evaluate(pts_hi)[0],
                                                      abs=1e-12)

    def test_rejects_2d_input(self):
        f = make_weierstrass(0.5, 2, 5, 128)
        g = extend_constant_y(f, 5)
        with pytest.raises(ValueError):
            extend_constant_y(g, 5)


class TestCsvRoundTrip:
    def test_1d_exact(self, tmp_path):
        f = make_weierstrass(0.5, 2, 6, 300)
        p = tmp_path / "w.csv"
        save_csv(f, p)
        g = load_csv(p)
        assert g.resolution == f.resolution
        assert g.periodic == f.periodic
        np.testing.assert_array_equal(g.values, f.values)

    def test_2d_exact(self, tmp_path):
        rng = np.random.default_rng(3)
        vals = rng.standard_normal((12, 7))
        f = GridField((0.0, -1.0), (2.0, 1.0), (12, 7), (False, False), vals)
        p = tmp_path / "f.csv"
        save_csv(f, p)
        g = load_csv(p)
        assert g.lo == f.lo and g.hi == f.hi
        np.testing.assert_array_equal(g.values, f.values)

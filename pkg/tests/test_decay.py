import math

import numpy as np
import pytest

from holderforms.chains import curve_length, green_area
from holderforms.decay import (
    LinearModel,
    USRectangle,
    choose_strip_count,
    cut_strips,
    decay_bound_series,
    iterate_rectangle,
)
from holderforms.experiments import analytic_weierstrass_form


MODEL = LinearModel(1.5, 0.4)
RECT = USRectangle((0.05, 0.05), 0.4, 0.1)


class TestLinearModel:
    def test_rates_validated(self):
        with pytest.raises(ValueError):
            LinearModel(0.9, 0.4)  # expansion must exceed 1
        with pytest.raises(ValueError):
            LinearModel(1.5, 1.1)  # contraction must be below 1

    def test_from_matrix_diagonal(self):
        m = LinearModel.from_matrix(np.diag([2.0, 0.25]))
        assert m.mu == pytest.approx(2.0)
        assert m.nu == pytest.approx(0.25)


class TestRectangleIteration:
    def test_exact_geometric_scaling(self):
        r3 = iterate_rectangle(MODEL, RECT, 3)
        assert r3.u_len == pytest.approx(0.4 * 1.5 ** 3, rel=1e-14)
        assert r3.s_len == pytest.approx(0.1 * 0.4 ** 3, rel=1e-14)

    def test_area_contracts_when_det_below_one(self):
        r5 = iterate_rectangle(MODEL, RECT, 5)
        assert r5.area == pytest.approx(RECT.area * (1.5 * 0.4) ** 5,
                                        rel=1e-12)

    def test_overflow_guard(self):
        with pytest.raises(OverflowError):
            iterate_rectangle(MODEL, RECT, 200)

    def test_boundary_curve_matches_analytic_length(self):
        r2 = iterate_rectangle(MODEL, RECT, 2)
        c = r2.boundary_curve()
        assert curve_length(c) == pytest.approx(r2.boundary_length,
                                                rel=1e-10)
        assert abs(green_area(c)) == pytest.approx(r2.area, rel=1e-10)


class TestStrips:
    def test_partition_preserves_area(self):
        r = iterate_rectangle(MODEL, RECT, 3)
        strips = cut_strips(r, 17)
        total = math.fsum(s.area for s in strips)
        assert total == pytest.approx(r.area, rel=1e-12)

    def test_strips_are_cut_along_the_expanding_side(self):
        r = iterate_rectangle(MODEL, RECT, 3)
        strips = cut_strips(r, 10)
        assert all(s.u_len == pytest.approx(r.u_len / 10) for s in strips)
        assert all(s.s_len == pytest.approx(r.s_len) for s in strips)

    def test_strip_count_band(self):
        for k in range(2, 9):
            sc = choose_strip_count(k, MODEL, RECT, sigma=0.5, c1=1.0)
            assert sc.admissible
            assert sc.n0 < sc.n < 2 * sc.n0

    def test_small_k_is_inadmissible(self):
        # before the contraction kicks in the strips stay too tall
        sc = choose_strip_count(0, MODEL, RECT, sigma=0.5, c1=1.0)
        assert not sc.admissible


@pytest.fixture(scope="module")
def series():
    alpha = analytic_weierstrass_form(0.5, 2, 8)
    return decay_bound_series(alpha, MODEL, RECT, theta=0.5,
                              k_range=range(0, 6), sigma=0.5)


class TestDecaySeries:

    def test_inadmissible_steps_reported(self, series):
        assert series.skipped_k == (0, 1)

    def test_telescoping_identity(self, series):
        for s in series.steps:
            assert abs(s.lhs_sum - s.lhs_whole) <= 1e-8

    def test_bounds_decrease(self, series):
        bounds = [s.bound for s in series.steps]
        assert all(b < a for a, b in zip(bounds, bounds[1:]))

    def test_consecutive_ratios_near_predicted(self, series):
        for r in series.consecutive_ratios():
            assert abs(r - series.predicted_rate) / series.predicted_rate < 0.15

    def test_strips_pass_smallness(self, series):
        for s in series.steps:
            assert s.strip_boundary_max < 0.5
            assert s.strip_diameter_max < 0.5

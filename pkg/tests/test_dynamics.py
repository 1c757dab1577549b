import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holderforms.dynamics import (
    CAT_MAP,
    ToralAutomorphism,
    accessibility_criterion,
    anosov_section_criterion,
    companion_matrix,
    improved_section_exponent,
    pisot_example,
    spectral_rates,
    standard_holder_bound,
    toral_automorphism,
)
from holderforms.experiments import cat_map_conjugates


GOLDEN = (3.0 + math.sqrt(5.0)) / 2.0  # larger cat-map eigenvalue


class TestToralAutomorphism:
    def test_cat_map_eigenvalues(self):
        A = toral_automorphism(CAT_MAP)
        mods = sorted(abs(e) for e in A.eigenvalues())
        assert mods[1] == pytest.approx(GOLDEN, abs=1e-12)
        assert mods[0] == pytest.approx(1.0 / GOLDEN, abs=1e-12)

    def test_inverse_reciprocal_duality(self):
        A = toral_automorphism(CAT_MAP)
        fw = sorted(abs(e) for e in A.eigenvalues())
        bw = sorted(abs(e) for e in A.inverse().eigenvalues())
        assert fw[0] * bw[1] == pytest.approx(1.0, abs=1e-12)
        assert fw[1] * bw[0] == pytest.approx(1.0, abs=1e-12)

    def test_non_unimodular_rejected(self):
        with pytest.raises(ValueError):
            toral_automorphism([[2, 0], [0, 1]])

    def test_non_integer_rejected(self):
        with pytest.raises((ValueError, TypeError)):
            toral_automorphism([[1.5, 0.0], [0.0, 1.0]])

    def test_eigenvalue_product_is_det(self):
        A = toral_automorphism([[3, 1], [2, 1]])
        prod = np.prod(A.eigenvalues())
        assert abs(prod) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 500))
    def test_conjugates_share_the_cat_spectrum(self, seed):
        M = cat_map_conjugates(seed, 1)[0]
        mods = sorted(abs(e) for e in toral_automorphism(M).eigenvalues())
        assert mods[1] == pytest.approx(GOLDEN, abs=1e-9)


class TestSpectralRates:
    def test_cat_map_rates(self):
        r = spectral_rates(toral_automorphism(CAT_MAP))
        assert r.lambda_u == pytest.approx(GOLDEN, abs=1e-12)
        assert r.lambda_s == pytest.approx(1.0 / GOLDEN, abs=1e-12)
        assert r.dims == (1, 0, 1)
        assert r.m_c == 1.0 and r.M_c == 1.0

    def test_mu_nu_conventions(self):
        r = spectral_rates(toral_automorphism(CAT_MAP))
        assert r.mu == pytest.approx(r.lambda_u)
        assert r.nu == pytest.approx(r.lambda_s)

    def test_pisot_companion_has_one_dim_center_free_splitting(self):
        r = spectral_rates(companion_matrix(0, -1, -1))
        ds, dc, du = r.dims
        assert du == 1 and ds == 2 and dc == 0


class TestCriteria:
    def test_section_criterion_monotone_in_theta(self):
        r = spectral_rates(toral_automorphism(CAT_MAP))
        v1 = anosov_section_criterion(r, 0.2).value
        v2 = anosov_section_criterion(r, 0.8).value
        assert v2 < v1  # nu < 1, so larger theta helps

    def test_section_criterion_threshold_value(self):
        r = spectral_rates(toral_automorphism(CAT_MAP))
        rep = anosov_section_criterion(r, 0.5)
        tt = rep.theta_threshold
        assert r.mu * r.nu ** tt == pytest.approx(1.0, abs=1e-9)

    def test_unimodular_obstruction(self):
        # mu nu = 1 for area-preserving 2x2 maps, so mu nu^theta > 1 on (0,1)
        for M in cat_map_conjugates(0, 10):
            r = spectral_rates(toral_automorphism(M))
            for theta in (0.05, 0.5, 0.95):
                assert not anosov_section_criterion(r, theta).holds

    def test_theta_out_of_range_rejected(self):
        r = spectral_rates(toral_automorphism(CAT_MAP))
        for bad in (0.0, 1.0, -0.5):
            with pytest.raises(ValueError):
                anosov_section_criterion(r, bad)

    def test_accessibility_ell_validation(self):
        r = spectral_rates(companion_matrix(0, -1, -1))
        with pytest.raises(ValueError):
            accessibility_criterion(r, 0.5, ell=1)  # dim E^c = 0 here

    def test_improved_exponent(self):
        assert improved_section_exponent(0.5) == pytest.approx(2.0 / 3.0)
        with pytest.raises(ValueError):
            improved_section_exponent(0.0)


class TestPisotExample:
    def test_root_of_the_cubic(self):
        p = pisot_example()
        assert abs(p.xi ** 3 - p.xi - 1.0) <= 1e-9
        assert p.xi == pytest.approx(1.3247179572, abs=1e-9)

    def test_unimodularity(self):
        p = pisot_example()
        assert p.det == 1
        assert abs(p.xi * p.eta ** 2 - 1.0) <= 1e-9

    def test_thresholds_coincide_at_half(self):
        p = pisot_example()
        assert p.accessibility_threshold == pytest.approx(0.5, abs=1e-9)
        assert p.standard_theta == pytest.approx(0.5, abs=1e-9)

    def test_standard_bound_consistency(self):
        p = pisot_example()
        assert standard_holder_bound(p.rates) == pytest.approx(
            p.standard_theta, abs=1e-12)

"""Numerical verifiers for a boundary-integral inequality for Holder forms
and the derived rate criteria for hyperbolic dynamics."""

__version__ = "0.1.0"

from .grids import (
    GridField, HolderEstimate, make_weierstrass, weierstrass_callable,
    holder_seminorm, c_theta_norm,
)
from .mollify import Mollifier, normalization_constant, deta_l1, mollify, \
    verify_regularization
from .chains import (
    OneForm, ParamCurve, ParamDisk, Segment, curve_length, curve_diameter,
    disk_area, integrate_one_form, integrate_two_form, exterior_derivative,
)
from .inequality import (
    c_theta_constant, theta_bracket, eps_star, eps_sweep,
    isoperimetric_constant, isoperimetric_check, verify_main_inequality,
    mollification_split_check,
)
from .dynamics import (
    ToralAutomorphism, SpectralRates, companion_matrix, spectral_rates,
    anosov_section_criterion, accessibility_criterion, standard_holder_bound,
    pisot_example,
)
from .decay import LinearModel, USRectangle, iterate_rectangle, cut_strips, \
    choose_strip_count, decay_bound_series

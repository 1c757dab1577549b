"""Boundary-integral inequality machinery for Holder one-forms on small disks.

Covers the theta-dependent constant, the epsilon-sweep bound and its
closed-form minimizer, the mollification-split estimate, the flat planar
isoperimetric inequality, and the end-to-end family verifier that reports an
empirical constant (the abstract constants are non-constructive, so the
supremum ratio is reported, never asserted against a target).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grids import GridField, c_theta_norm, DEFAULT_SLACK
from .mollify import deta_l1, mollify
from .chains import (
    OneForm,
    ParamDisk,
    ChainMeasures,
    measure_disk,
    integrate_one_form,
    integrate_two_form,
    exterior_derivative,
)

__all__ = [
    "InequalityReport",
    "EpsSweep",
    "SplitCheck",
    "IsoperimetricReport",
    "theta_bracket",
    "c_theta_constant",
    "eps_star",
    "eps_sweep",
    "closed_form_minimum",
    "isoperimetric_constant",
    "isoperimetric_check",
    "one_form_cnorm",
    "mollify_one_form",
    "mollification_split_check",
    "verify_main_inequality",
]


def theta_bracket(theta: float) -> float:
    """((1-t)/t)^t + (t/(1-t))^(1-t); equals 2 at t = 1/2, >= 1 on (0,1)."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must be strictly inside (0,1)")
    r = (1.0 - theta) / theta
    return r ** theta + (1.0 / r) ** (1.0 - theta)


def c_theta_constant(theta: float, deta: float | None = None) -> float:
    """max{1, ||d eta||_L1} times the theta bracket (planar kernel default)."""
    if deta is None:
        deta = deta_l1(2)
    return max(1.0, deta) * theta_bracket(theta)


def eps_star(area: float, length: float, theta: float) -> float:
    """Minimizer (1-theta)|D| / (theta |dD|) of the epsilon bound."""
    if length <= 0.0:
        raise ValueError("boundary length must be positive")
    return (1.0 - theta) * area / (theta * length)


def closed_form_minimum(cnorm: float, area: float, length: float,
                        theta: float, deta: float | None = None) -> float:
    """Value of the swept bound at its minimizer."""
    return (c_theta_constant(theta, deta) * cnorm * theta_bracket(theta)
            * length ** (1.0 - theta) * area ** theta)


@dataclass(frozen=True)
class EpsSweep:
    epsilons: np.ndarray
    bounds: np.ndarray
    argmin_index: int

    @property
    def argmin(self) -> float:
        return float(self.epsilons[self.argmin_index])

    @property
    def min_value(self) -> float:
        return float(self.bounds[self.argmin_index])


def eps_sweep(cnorm: float, area: float, length: float, theta: float,
              eps_grid, deta: float | None = None) -> EpsSweep:
    """Evaluate C(theta) cnorm (|dD| eps^theta + |D| eps^(theta-1)) per eps."""
    eps = np.asarray(eps_grid, dtype=float)
    if eps.size == 0 or np.any(eps <= 0.0) or np.any(np.diff(eps) <= 0.0):
        raise ValueError("eps grid must be positive and strictly increasing")
    pref = c_theta_constant(theta, deta) * cnorm
    bounds = pref * (length * eps ** theta + area * eps ** (theta - 1.0))
    return EpsSweep(eps, bounds, int(np.argmin(bounds)))


def isoperimetric_constant(n: int) -> float:
    """C_n = 1 / (n^n omega_n)^(1/(n-1)); C_2 = 1/(4 pi)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if n == 2:
        omega = math.pi
    elif n == 3:
        omega = 4.0 * math.pi / 3.0
    else:
        omega = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)
    return 1.0 / (n ** n * omega) ** (1.0 / (n - 1.0))


@dataclass(frozen=True)
class IsoperimetricReport:
    length: float
    area: float
    bound: float        # C_2 * length^2
    holds: bool
    equality_gap: float  # bound - area


def isoperimetric_check(length: float, area: float,
                        tol: float = 1e-9) -> IsoperimetricReport:
    """Flat planar check |D| <= |dD|^2 / (4 pi)."""
    bound = isoperimetric_constant(2) * length * length
    return IsoperimetricReport(length, area, bound,
                               area <= bound + tol, bound - area)


def one_form_cnorm(alpha: OneForm, theta: float | None = None,
                   seed: int = 0) -> float:
    """Max over grid components of the sampled C^theta norm."""
    theta = alpha.theta if theta is None else theta
    comps = alpha.grid_components()
    if not comps:
        raise ValueError("cnorm needs grid-sampled components; pass an "
                         "explicit cnorm for analytic forms")
    return max(c_theta_norm(c, theta, seed=seed).cnorm for c in comps)


def mollify_one_form(alpha: OneForm, epsilon: float) -> OneForm:
    def m(c):
        if c is None:
            return None
        if not isinstance(c, GridField):
            raise ValueError("can only mollify grid-sampled components")
        return mollify(c, epsilon)
    return OneForm(m(alpha.a1), m(alpha.a2), alpha.theta)


@dataclass(frozen=True)
class SplitCheck:
    """The subtract-and-add estimate, instantiated and measured."""

    epsilon: float
    lhs: float               # |int_dD alpha|
    term_boundary: float     # |int_dD (alpha - alpha_eps)|
    term_interior: float     # |int_D d alpha_eps|
    bound_boundary: float    # |dD| cnorm eps^theta
    bound_interior: float    # |D| ||d eta||_L1 cnorm eps^(theta-1)
    quad_tol: float
    slack: float

    @property
    def chain_holds(self) -> bool:
        return self.lhs <= self.term_boundary + self.term_interior + self.quad_tol

    @property
    def boundary_bound_holds(self) -> bool:
        return self.term_boundary <= self.bound_boundary * self.slack

    @property
    def interior_bound_holds(self) -> bool:
        return self.term_interior <= self.bound_interior * self.slack


def mollification_split_check(alpha: OneForm, disk: ParamDisk, epsilon: float,
                              theta: float | None = None,
                              cnorm: float | None = None,
                              slack: float = DEFAULT_SLACK,
                              quad_tol: float = 1e-5,
                              seed: int = 0) -> SplitCheck:
    theta = alpha.theta if theta is None else theta
    if cnorm is None:
        cnorm = one_form_cnorm(alpha, theta, seed=seed)
    alpha_eps = mollify_one_form(alpha, epsilon)
    bnd = disk.boundary()
    lhs = abs(integrate_one_form(alpha, bnd, tol=quad_tol))
    diff = OneForm(
        _component_diff(alpha.a1, alpha_eps.a1),
        _component_diff(alpha.a2, alpha_eps.a2),
        theta,
    )
    term_boundary = abs(integrate_one_form(diff, bnd, tol=quad_tol))
    term_interior = abs(integrate_two_form(exterior_derivative(alpha_eps), disk,
                                           tol=quad_tol))
    meas = measure_disk(disk)
    return SplitCheck(
        epsilon=epsilon,
        lhs=lhs,
        term_boundary=term_boundary,
        term_interior=term_interior,
        bound_boundary=meas.length * cnorm * epsilon ** theta,
        bound_interior=meas.area * deta_l1(2) * cnorm * epsilon ** (theta - 1.0),
        quad_tol=quad_tol,
        slack=slack,
    )


def _component_diff(a, b):
    if a is None and b is None:
        return None
    if isinstance(a, GridField) and isinstance(b, GridField):
        if (a.lo, a.hi, a.resolution) == (b.lo, b.hi, b.resolution):
            return a - b
        # mollified component may live on a shrunk grid; compare via evaluators
        return lambda pts, a=a, b=b: a.evaluate(pts) - b.evaluate(pts)
    fa = (lambda pts: np.zeros(pts.shape[:-1])) if a is None else (
        a.evaluate if isinstance(a, GridField) else a)
    fb = (lambda pts: np.zeros(pts.shape[:-1])) if b is None else (
        b.evaluate if isinstance(b, GridField) else b)
    return lambda pts: np.asarray(fa(pts), dtype=float) - np.asarray(
        fb(pts), dtype=float)


@dataclass(frozen=True)
class InequalityReport:
    """Per-disk comparison |int_dD alpha| vs cnorm |dD|^(1-theta) |D|^theta."""

    disk_id: str
    measures: ChainMeasures
    theta: float
    cnorm: float
    lhs: float
    eps_star: float
    rhs_shape: float
    ratio: float
    skipped: bool
    empirical_k: float  # running max ratio over the family so far

    def csv_row(self):
        return [self.disk_id, self.measures.length, self.measures.area,
                self.measures.diameter, self.lhs, self.rhs_shape, self.ratio,
                self.eps_star, int(self.skipped)]


def verify_main_inequality(alpha: OneForm, family, theta: float | None = None,
                           smallness_sigma: float = 0.5,
                           cnorm: float | None = None,
                           seed: int = 0,
                           quad_tol: float = 1e-8):
    """Apply the main-inequality comparison to a family of disks.

    ``family`` is a sequence of (disk_id, ParamDisk) pairs or bare disks.
    Disks failing the smallness filter max(diam, |dD|) < sigma are reported
    as skipped, mirroring the smallness hypothesis of the estimate.
    """
    theta = alpha.theta if theta is None else theta
    if cnorm is None:
        cnorm = one_form_cnorm(alpha, theta, seed=seed)
    if cnorm <= 0.0:
        raise ValueError("cnorm must be positive")
    reports = []
    emp_k = 0.0
    for idx, item in enumerate(family):
        disk_id, disk = item if isinstance(item, tuple) else (f"disk{idx}", item)
        meas = measure_disk(disk)
        skipped = max(meas.diameter, meas.length) >= smallness_sigma
        if skipped:
            reports.append(InequalityReport(disk_id, meas, theta, cnorm,
                                            math.nan, math.nan, math.nan,
                                            math.nan, True, emp_k))
            continue
        lhs = abs(integrate_one_form(alpha, disk.boundary(), tol=quad_tol))
        rhs_shape = meas.length ** (1.0 - theta) * meas.area ** theta
        if rhs_shape > 0.0:
            ratio = lhs / (cnorm * rhs_shape)
        else:
            # degenerate disk: ratio meaningful only if lhs vanishes too
            ratio = 0.0 if lhs <= quad_tol else math.inf
        if not math.isfinite(ratio):
            raise ArithmeticError(
                f"non-finite ratio for {disk_id}: lhs={lhs}, rhs={rhs_shape}")
        emp_k = max(emp_k, ratio)
        reports.append(InequalityReport(
            disk_id, meas, theta, cnorm, lhs,
            eps_star(meas.area, meas.length, theta),
            rhs_shape, ratio, False, emp_k,
        ))
    return reports

"""Batch experiment runner: every verifier as a subcommand.

Each run writes CSV (and, on request, SVG) artifacts into the output
directory, prints one PASS/FAIL line per assertion, and exits 0 iff all
assertions passed.  Identical config + seed gives byte-identical CSVs.

Config files are INI-style; command-line flags override config values.
The output directory can also be set via the HOLDERFORMS_OUTDIR
environment variable (flag > config > env > default).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .grids import make_weierstrass, c_theta_norm
from .mollify import (
    normalization_constant, deta_l1, eta, verify_regularization,
)
from .chains import (
    OneForm, circle, polygon, rectangle_disk, unit_disk,
    integrate_one_form, green_area, curve_length,
)
from .inequality import (
    theta_bracket, c_theta_constant, eps_star, eps_sweep, closed_form_minimum,
    isoperimetric_check, mollification_split_check, verify_main_inequality,
    one_form_cnorm,
)
from .dynamics import (
    spectral_rates, toral_automorphism, anosov_section_criterion,
    accessibility_criterion, standard_holder_bound, pisot_example,
)
from .decay import LinearModel, USRectangle, decay_bound_series
from .experiments import (
    weierstrass_form, analytic_weierstrass_form, dyadic_square_family,
    family_scale_slope, random_convex_polygon_vertices,
)
from . import svgplot

SUBCOMMANDS = ("mollify-check", "stokes-check", "inequality", "isoperimetric",
               "criteria", "pisot", "decay")

KNOWN_KEYS = {
    "common": {"seed", "slack", "sigma", "outdir"},
    "form": {"theta", "base", "terms", "resolution"},
    "disks": {"j_min", "j_max", "anchors"},
    "matrix": {"entries", "theta", "ell", "extra_center_dims"},
    "decay": {"mu", "nu", "k_min", "k_max", "u_len", "s_len", "c1"},
    "mollify": {"epsilons"},
}


class ConfigError(ValueError):
    pass


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


class Checks:
    """Collect PASS/FAIL assertions and print them as they arrive."""

    def __init__(self):
        self.failures = 0

    def check(self, name: str, ok: bool, detail: str = ""):
        tag = "PASS" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        print(f"{tag} {name}{suffix}")
        if not ok:
            self.failures += 1
        return ok


def load_config(path: str | None) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    if path:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        cp.read(path)
        for section in cp.sections():
            if section not in KNOWN_KEYS:
                raise ConfigError(f"unknown config section [{section}]")
            for key in cp[section]:
                if key not in KNOWN_KEYS[section]:
                    raise ConfigError(
                        f"unknown key '{key}' in section [{section}]")
    return cp


def cfg_get(cp, section, key, cast, default, override=None):
    if override is not None:
        return override
    if cp.has_option(section, key):
        raw = cp.get(section, key)
        try:
            return cast(raw)
        except ValueError as exc:
            raise ConfigError(f"[{section}] {key}: {exc}") from exc
    return default


def _positive(name, value):
    if value <= 0:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


def _theta_open(name, value):
    if not 0.0 < value < 1.0:
        raise ConfigError(f"{name} must lie in (0,1), got {value}")
    return value


# --- subcommands -----------------------------------------------------------

def run_mollify_check(args, cp, outdir: Path, checks: Checks) -> None:
    theta = _theta_open("theta", cfg_get(cp, "form", "theta", float, 0.5,
                                         args.theta))
    base = int(cfg_get(cp, "form", "base", int, 2))
    terms = int(cfg_get(cp, "form", "terms", int, 8))
    res = _positive("resolution", cfg_get(cp, "form", "resolution", int, 2048,
                                          args.resolution))
    eps_raw = cfg_get(cp, "mollify", "epsilons", str, "0.02 0.05 0.1")
    epsilons = [float(x) for x in eps_raw.split()]
    slack = cfg_get(cp, "common", "slack", float, 1.05)

    for n in (1, 2):
        a = normalization_constant(n)
        checks.check(f"mollifier-normalization-{n}d", a > 0.0, f"A={a:.6f}")
    u = make_weierstrass(theta, base, terms, res)
    reports = verify_regularization(u, theta, epsilons, slack=slack,
                                    seed=args.seed)
    write_csv(outdir / "regularization.csv",
              ["epsilon", "measured_c", "bound_c", "measured_d", "bound_d",
               "pass_c", "pass_d"],
              [r.csv_row() for r in reports])
    for r in reports:
        checks.check(f"sup-bound-eps={r.epsilon:g}", r.pass_b,
                     f"sup|u_eps|={r.measured_b:.6g} <= sup|u|={r.sup_u:.6g}")
        checks.check(f"approx-bound-eps={r.epsilon:g}", r.pass_c,
                     f"{r.measured_c:.6g} <= {r.bound_c * slack:.6g}")
        checks.check(f"derivative-bound-eps={r.epsilon:g}", r.pass_d,
                     f"{r.measured_d:.6g} <= {r.bound_d * slack:.6g}")


def run_stokes_check(args, cp, outdir: Path, checks: Checks) -> None:
    rows = []
    x_dy = OneForm(None, lambda p: p[..., 0], 1.0)
    val = integrate_one_form(x_dy, circle((0.0, 0.0), 1.0))
    err = abs(val - math.pi)
    rows.append(["x_dy_unit_circle", val, math.pi, err])
    checks.check("stokes-oracle-x-dy", err <= 1e-6, f"|pi - {val:.10f}|={err:.2e}")

    theta = _theta_open("theta", cfg_get(cp, "form", "theta", float, 0.5,
                                         args.theta))
    res = _positive("resolution", cfg_get(cp, "form", "resolution", int, 4096,
                                          args.resolution))
    alpha = weierstrass_form(theta, resolution=res)
    disk = rectangle_disk((0.3, 0.3), (0.5, 0.5))
    split = mollification_split_check(alpha, disk, epsilon=0.05,
                                      seed=args.seed)
    from .chains import exterior_derivative, integrate_two_form
    from .inequality import mollify_one_form
    a_eps = mollify_one_form(alpha, 0.05)
    lhs = integrate_one_form(a_eps, disk.boundary(), tol=1e-6)
    rhs = integrate_two_form(exterior_derivative(a_eps), disk, tol=1e-6)
    err2 = abs(lhs - rhs)
    rows.append(["mollified_weierstrass_stokes", lhs, rhs, err2])
    checks.check("stokes-mollified-weierstrass", err2 <= 1e-5,
                 f"|{lhs:.8g} - {rhs:.8g}|={err2:.2e}")
    checks.check("split-chain", split.chain_holds,
                 f"lhs={split.lhs:.4g} <= {split.term_boundary:.4g}+"
                 f"{split.term_interior:.4g}")
    write_csv(outdir / "stokes.csv",
              ["case", "value", "reference", "abs_error"], rows)


def run_inequality(args, cp, outdir: Path, checks: Checks) -> None:
    theta = _theta_open("theta", cfg_get(cp, "form", "theta", float, 0.5,
                                         args.theta))
    base = int(cfg_get(cp, "form", "base", int, 2))
    terms = int(cfg_get(cp, "form", "terms", int, 8))
    res = _positive("resolution", cfg_get(cp, "form", "resolution", int, 2048,
                                          args.resolution))
    j_min = int(cfg_get(cp, "disks", "j_min", int, 2))
    j_max = int(cfg_get(cp, "disks", "j_max", int, 8))
    anchors = int(cfg_get(cp, "disks", "anchors", int, 8))
    sigma = cfg_get(cp, "common", "sigma", float, 0.5, args.sigma)

    alpha = weierstrass_form(theta, base, terms, res)
    family = dyadic_square_family(range(j_min, j_max + 1), anchors)
    reports = verify_main_inequality(alpha, family, theta=theta,
                                     smallness_sigma=sigma, seed=args.seed)
    write_csv(outdir / "inequality.csv",
              ["disk_id", "length", "area", "diameter", "lhs", "rhs_shape",
               "ratio", "eps_star", "skipped"],
              [r.csv_row() for r in reports])
    emp_k = max(r.empirical_k for r in reports)
    checks.check("empirical-K-finite", math.isfinite(emp_k) and emp_k > 0.0,
                 f"K={emp_k:.4f}")
    slope, per_scale = family_scale_slope(reports)
    checks.check("scale-slope", slope <= 0.1, f"slope={slope:.4f}")
    if args.svg:
        js = sorted(per_scale)
        svgplot.line_plot(outdir / "inequality_ratio.svg",
                          [2.0 ** (-j) for j in js],
                          [per_scale[j] for j in js],
                          title="ratio vs disk size", xlabel="r",
                          ylabel="ratio", logx=True, logy=True)


def run_isoperimetric(args, cp, outdir: Path, checks: Checks) -> None:
    rows = []
    c = circle((0.0, 0.0), 1.0)
    rep = isoperimetric_check(curve_length(c), green_area(c))
    rows.append(["unit_disk", rep.length, rep.area, rep.bound,
                 rep.equality_gap])
    checks.check("isoperimetric-disk-equality", abs(rep.equality_gap) <= 1e-6,
                 f"gap={rep.equality_gap:.2e}")
    rng = np.random.default_rng(args.seed)
    for i in range(10):
        verts = random_convex_polygon_vertices(rng, n_vertices=5 + i % 5)
        curve = polygon(verts)
        rep = isoperimetric_check(curve_length(curve),
                                  abs(green_area(curve)))
        rows.append([f"polygon{i}", rep.length, rep.area, rep.bound,
                     rep.equality_gap])
        checks.check(f"isoperimetric-polygon{i}",
                     rep.holds and rep.equality_gap > 1e-6,
                     f"area={rep.area:.4f} < bound={rep.bound:.4f}")
    write_csv(outdir / "isoperimetric.csv",
              ["case", "length", "area", "bound", "gap"], rows)


def run_criteria(args, cp, outdir: Path, checks: Checks) -> None:
    entries_raw = cfg_get(cp, "matrix", "entries", str, "2 1 1 1",
                          args.matrix)
    entries = [int(x) for x in entries_raw.split()]
    n = int(round(math.sqrt(len(entries))))
    if n * n != len(entries):
        raise ConfigError("matrix entries must form a square matrix "
                          "(row-major)")
    theta = _theta_open("theta", cfg_get(cp, "matrix", "theta", float, 0.5,
                                         args.theta))
    ell = int(cfg_get(cp, "matrix", "ell", int, 0, args.ell))
    extra = int(cfg_get(cp, "matrix", "extra_center_dims", int, 0,
                        args.extra_center_dims))
    A = toral_automorphism(np.array(entries).reshape(n, n))
    rates = spectral_rates(A, extra_center_dims=extra)
    print(f"rates: lambda_u={rates.lambda_u} m_u={rates.m_u} "
          f"lambda_s={rates.lambda_s} m_s={rates.m_s} "
          f"m_c={rates.m_c} dims={rates.dims}")
    rows = []
    reports = []
    if rates.dims[2] and rates.dims[0]:
        rep = anosov_section_criterion(rates, theta)
        reports.append(rep)
        rows.append(rep.csv_row())
        checks.check("anosov-section-evaluated", math.isfinite(rep.value),
                     f"value={rep.value:.6g} holds={rep.holds}")
    if ell > 0:
        rep = accessibility_criterion(rates, theta, ell)
        reports.append(rep)
        rows.append(rep.csv_row())
        checks.check("accessibility-evaluated", math.isfinite(rep.value),
                     f"value={rep.value:.6g} holds={rep.holds}")
    std = standard_holder_bound(rates)
    rows.append(["standard_holder_bound", std, "", theta, std, int(0 < std <= 1)])
    checks.check("standard-holder-bound", 0.0 <= std <= 1.0,
                 f"theta_std={std:.6g}")
    for rep in reports:
        print(f"{rep.name}: value={rep.value:.12g} holds={rep.holds} "
              f"theta*={rep.theta_threshold}")
    write_csv(outdir / "criteria.csv",
              ["name", "value", "holds", "theta", "theta_threshold",
               "threshold_in_range"], rows)


def run_pisot(args, cp, outdir: Path, checks: Checks) -> None:
    rep = pisot_example()
    print(f"xi={rep.xi:.10f} eta={rep.eta:.10f}")
    print(f"accessibility threshold = {rep.accessibility_threshold:.12f}")
    print(f"standard Holder bound   = {rep.standard_theta:.12f}")
    checks.check("pisot-unimodular", rep.unimodular_residual <= 1e-9,
                 f"|xi eta^2 - 1|={rep.unimodular_residual:.2e}")
    checks.check("pisot-thresholds-coincide", rep.thresholds_coincide,
                 f"|{rep.accessibility_threshold:.12f} - "
                 f"{rep.standard_theta:.12f}| <= 1e-9")
    checks.check("pisot-threshold-half",
                 abs(rep.accessibility_threshold - 0.5) <= 1e-9,
                 f"theta*={rep.accessibility_threshold:.12f}")
    write_csv(outdir / "pisot.csv",
              ["xi", "eta", "det", "unimodular_residual",
               "accessibility_threshold", "standard_theta"],
              [[rep.xi, rep.eta, rep.det, rep.unimodular_residual,
                rep.accessibility_threshold, rep.standard_theta]])


def run_decay(args, cp, outdir: Path, checks: Checks) -> None:
    mu = _positive("mu", cfg_get(cp, "decay", "mu", float, 1.5, args.mu))
    nu = _positive("nu", cfg_get(cp, "decay", "nu", float, 0.4, args.nu))
    theta = _theta_open("theta", cfg_get(cp, "form", "theta", float, 0.5,
                                         args.theta))
    sigma = _positive("sigma", cfg_get(cp, "common", "sigma", float, 0.5,
                                       args.sigma))
    k_min = int(cfg_get(cp, "decay", "k_min", int, 0))
    k_max = int(cfg_get(cp, "decay", "k_max", int, 8, args.k_max))
    u_len = _positive("u_len", cfg_get(cp, "decay", "u_len", float, 0.4))
    s_len = _positive("s_len", cfg_get(cp, "decay", "s_len", float, 0.1))
    c1 = _positive("c1", cfg_get(cp, "decay", "c1", float, 1.0))
    terms = int(cfg_get(cp, "form", "terms", int, 6))

    model = LinearModel(mu, nu)
    rect = USRectangle((0.05, 0.05), u_len, s_len)
    alpha = analytic_weierstrass_form(theta, terms=terms)
    sampled = weierstrass_form(theta, terms=terms,
                               resolution=max(512, 4 * 2 ** (terms - 1)))
    cnorm = one_form_cnorm(sampled, theta, seed=args.seed)
    fam_reports = verify_main_inequality(
        sampled, dyadic_square_family(range(2, 7), 4), theta=theta,
        smallness_sigma=sigma, seed=args.seed)
    k_emp = max(r.empirical_k for r in fam_reports)

    series = decay_bound_series(alpha, model, rect, theta,
                                range(k_min, k_max + 1), sigma,
                                c1=c1, k_emp=k_emp, cnorm=cnorm)
    write_csv(outdir / "decay.csv",
              ["k", "n_strips", "bound", "ratio_to_previous",
               "predicted_rate"], series.csv_rows())
    for s in series.steps:
        checks.check(f"strip-band-k={s.k}", s.n0 < s.n < 2 * s.n0,
                     f"N0={s.n0:.2f} N={s.n}")
        checks.check(f"strip-smallness-k={s.k}",
                     max(s.strip_boundary_max, s.strip_diameter_max) < sigma,
                     f"max boundary {s.strip_boundary_max:.4f}")
        checks.check(f"telescoping-k={s.k}",
                     abs(s.lhs_sum - s.lhs_whole) <= 1e-8,
                     f"|{s.lhs_sum:.10g} - {s.lhs_whole:.10g}|="
                     f"{abs(s.lhs_sum - s.lhs_whole):.2e}")
    fitted = series.fitted_rate
    predicted = series.predicted_rate
    checks.check("decay-rate",
                 abs(fitted - predicted) <= 0.1 * predicted,
                 f"fitted={fitted:.4f} predicted={predicted:.4f}")
    if args.svg:
        svgplot.line_plot(outdir / "decay_bound.svg",
                          [s.k for s in series.steps],
                          [s.bound for s in series.steps],
                          title="telescoped bound vs k", xlabel="k",
                          ylabel="bound", logy=True)


RUNNERS = {
    "mollify-check": run_mollify_check,
    "stokes-check": run_stokes_check,
    "inequality": run_inequality,
    "isoperimetric": run_isoperimetric,
    "criteria": run_criteria,
    "pisot": run_pisot,
    "decay": run_decay,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="holderforms",
        description="Desk-scale verifiers for the Holder-form boundary "
                    "inequality and its dynamical rate criteria.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None)
        sp.add_argument("--outdir", default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--svg", action="store_true")
        sp.add_argument("--theta", type=float, default=None)
        sp.add_argument("--sigma", type=float, default=None)
        sp.add_argument("--resolution", type=int, default=None)
        if name == "criteria":
            sp.add_argument("--matrix", default=None,
                            help="row-major integer entries")
            sp.add_argument("--ell", type=int, default=None)
            sp.add_argument("--extra-center-dims", type=int, default=None,
                            dest="extra_center_dims")
        if name == "decay":
            sp.add_argument("--mu", type=float, default=None)
            sp.add_argument("--nu", type=float, default=None)
            sp.add_argument("--k-max", type=int, default=None, dest="k_max")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cp = load_config(args.config)
        args.seed = int(cfg_get(cp, "common", "seed", int, 0, args.seed))
        outdir = Path(
            args.outdir
            or cfg_get(cp, "common", "outdir", str, None)
            or os.environ.get("HOLDERFORMS_OUTDIR", "holderforms-out"))
        outdir.mkdir(parents=True, exist_ok=True)
        checks = Checks()
        RUNNERS[args.command](args, cp, outdir, checks)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if checks.failures:
        print(f"{checks.failures} assertion(s) failed")
        return 1
    print("all assertions passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())

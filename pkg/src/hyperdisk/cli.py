"""hyperdisk <area> <subcommand> [flags]

Areas: ``fourier``, ``radon euclid``, ``radon hyp``, ``eigen``.  Every run
writes a JSON report (schema report-v1) with the resolved config into
``--out``; the exit status is 0 iff all checks pass, 1 if a tolerance
check fails and 2 for invalid input.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import eigen, fourier, io
from . import radon_euclid as re_
from . import radon_hyp as rh
from .config import RunConfig, load_config
from .geometry import point_at_distance
from .quadrature import disk_quadrature

log = logging.getLogger("hyperdisk")

FOURIER_SUBCOMMANDS = ("forward", "inverse", "roundtrip", "plancherel", "range-check")
RADON_SUBCOMMANDS = ("forward", "invert-d1", "invert-frac", "invert-bc", "invert-abel", "compare")
EIGEN_KINDS = ("exponential", "spherical", "poisson", "two-atom", "plane-wave", "constant")

DEFAULT_TOL = {
    "fourier roundtrip": 1e-2,
    "fourier plancherel": 1e-2,
    "fourier range-check": 1e-7,
    "radon euclid forward": 1e-6,
    "radon euclid invert-d1": 1e-3,
    "radon euclid invert-frac": 1e-2,
    "radon euclid compare": 2e-2,
    "radon hyp forward": 1e-6,
    "radon hyp invert-d1": 1e-2,
    "radon hyp invert-abel": 1e-2,
    "radon hyp invert-bc": 2e-2,
    "radon hyp compare": 1e-2,  # d1 vs Abel; the BC route gets 3x this
    "eigen": 1e-4,
}


class UsageError(Exception):
    pass


def _tol(cfg, key):
    return cfg.tol if cfg.tol > 0 else DEFAULT_TOL[key]


def _out(cfg):
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _center(cfg):
    return complex(cfg.center_re, cfg.center_im)


# --- fourier ----------------------------------------------------------------


def _test_function(cfg):
    kind = cfg.test_fn
    center = _center(cfg) if kind == "mobius-translated-bump" else 0j
    return fourier.TestFunction(kind, cfg.r0, center, cfg.width)


def _sample_points(radius, n=9):
    s = np.linspace(-radius, radius, n)
    z = (s[None, :] + 1j * s[:, None]).ravel()
    return z[np.abs(z) <= radius * (1 + 1e-12)]


def _spectral(f, cfg, lam_max=None, dlam=None):
    quad = disk_quadrature(cfg.n_r, cfg.n_theta, f.support_radius)
    sd = fourier.spectral_data(f, lam_max or cfg.lam_max, dlam or cfg.dlam, cfg.n_boundary, quad, cfg.threads)
    return sd, quad


def _rel_err(rec, ref):
    scale = max(float(np.max(np.abs(ref))), 1e-300)
    return float(np.max(np.abs(rec - ref))) / scale if np.max(np.abs(ref)) > 0 else float(np.max(np.abs(rec)))


def cmd_fourier(sub, cfg, args):
    out = _out(cfg)
    key = f"fourier {sub}"
    metrics, checks = {}, {}
    f = _test_function(cfg)
    if sub == "forward":
        sd, _ = _spectral(f, cfg)
        io.write_spectral(out / "spectral.csv", sd)
        metrics["max_abs"] = float(np.max(np.abs(sd.values)))
        metrics["conjugate_symmetry"] = float(np.max(np.abs(sd.values[::-1] - np.conj(sd.values))))
        checks["finite"] = bool(np.all(np.isfinite(sd.values)))
    elif sub == "inverse":
        if not args.spectral:
            raise UsageError("fourier inverse needs --spectral FILE (from 'fourier forward')")
        sd = io.read_spectral(args.spectral)
        grid = re_.ImageGrid(32, f.support_radius)
        rec = np.real(fourier.fourier_inverse(sd, grid.points.ravel())).reshape(grid.n, grid.n)
        io.write_grid_function(out / "reconstruction.csv", re_.GridFunction(grid, rec, cfg.r0))
        metrics["max_abs"] = float(np.max(np.abs(rec)))
        checks["finite"] = bool(np.all(np.isfinite(rec)))
    elif sub == "roundtrip":
        z = _sample_points(f.support_radius)
        ref = f(z)
        rows = []
        for mult in (1, 2):
            sd, _ = _spectral(f, cfg, cfg.lam_max * mult, cfg.dlam / mult)
            err = _rel_err(np.real(fourier.fourier_inverse(sd, z)), ref)
            rows.append({"lam_max": cfg.lam_max * mult, "dlam": cfg.dlam / mult, "linf_rel_error": err})
        metrics["convergence"] = rows
        metrics["linf_rel_error"] = rows[0]["linf_rel_error"]
        with (out / "convergence.csv").open("w") as fh:
            fh.write("lam_max,dlam,linf_rel_error\n")
            for r in rows:
                fh.write(f"{r['lam_max']},{r['dlam']},{r['linf_rel_error']:.6e}\n")
        checks["linf_rel_error"] = rows[0]["linf_rel_error"] < _tol(cfg, key)
        checks["decreases_under_refinement"] = rows[1]["linf_rel_error"] <= rows[0]["linf_rel_error"] or rows[0]["linf_rel_error"] == 0
    elif sub == "plancherel":
        sd, quad = _spectral(f, cfg)
        metrics["defect"] = fourier.plancherel_defect(f, sd, quad)
        checks["defect"] = metrics["defect"] < _tol(cfg, key)
    elif sub == "range-check":
        sd, _ = _spectral(f, cfg)
        lam = sd.lam[int(np.argmin(np.abs(sd.lam - cfg.lam)))]
        metrics["lambda"] = float(lam)
        metrics["functional_equation"] = fourier.functional_equation_residual(sd, lam, 0.3)
        metrics["coefficient_condition"] = fourier.coefficient_condition_residual(sd, lam, cfg.k)
        tol = _tol(cfg, key)
        checks["functional_equation"] = metrics["functional_equation"] < tol
        checks["coefficient_condition"] = metrics["coefficient_condition"] < tol
    return key, metrics, checks


# --- radon ------------------------------------------------------------------


def _euclid_setup(cfg):
    phantom = re_.EuclidPhantom(cfg.phantom or "gaussian", cfg.radius, _center(cfg))
    p_max = max(cfg.p_max, phantom.support)
    sino = re_.sinogram(phantom, cfg.n_omega, p_max, cfg.dp, support=phantom.support)
    return phantom, sino


def _euclid_points(phantom):
    return phantom.center + _sample_points(min(2.0, phantom.support))


def cmd_radon_euclid(sub, cfg, args):
    out = _out(cfg)
    key = f"radon euclid {sub}"
    metrics, checks = {}, {}
    if sub in ("invert-bc", "invert-abel"):
        raise UsageError(f"radon euclid has no {sub}; use invert-d1, invert-frac or compare")
    phantom, sino = _euclid_setup(cfg)
    peak = max(phantom.peak, 1e-300)
    if sub == "forward":
        io.write_sinogram(out / "sinogram.csv", sino)
        exact = phantom.chord(sino.theta[:, None], sino.p[None, :])
        metrics["max_abs"] = float(np.max(np.abs(sino.values)))
        if exact is not None:
            metrics["max_error_vs_closed_form"] = float(np.max(np.abs(sino.values - exact)))
            checks["closed_form"] = metrics["max_error_vs_closed_form"] < _tol(cfg, key)
        else:
            checks["finite"] = True
        return key, metrics, checks
    need_frac = sub in ("invert-frac", "compare")
    grid = re_.ImageGrid(cfg.grid_n, cfg.half_width)
    if need_frac:
        need = cfg.half_width * cfg.padding * math.sqrt(2)
        if sino.p_max < need:
            sino = re_.sinogram(phantom, cfg.n_omega, need + cfg.dp, cfg.dp, support=phantom.support)
        rec = re_.invert_fractional(sino, grid, cfg.padding)
        rec = re_.GridFunction(grid, rec.values, phantom.support)
    if sub == "invert-frac":
        io.write_grid_function(out / "reconstruction.csv", rec)
        err = float(np.max(np.abs(rec.values - phantom(grid.points))))
        metrics["max_abs_error"] = err
        checks["relative_error"] = err <= _tol(cfg, key) * peak
        return key, metrics, checks
    if sub == "invert-d1":
        pts = _euclid_points(phantom)
        vals = np.array([re_.invert_d1(sino, x) for x in pts])
        _write_points(out / "reconstruction_points.csv", pts, vals, phantom(pts))
        metrics["max_abs_error"] = float(np.max(np.abs(vals - phantom(pts))))
        checks["abs_error"] = metrics["max_abs_error"] < _tol(cfg, key)
        return key, metrics, checks
    # compare: d1 at grid nodes near the centre against the fractional grid
    P = grid.points
    idx = np.argwhere(np.abs(P - phantom.center) <= 2.0)
    idx = idx[:: max(1, len(idx) // 60)]
    d1 = np.array([re_.invert_d1(sino, P[i, j]) for i, j in idx])
    fr = np.array([rec.values[i, j] for i, j in idx])
    _write_points(out / "compare_points.csv", P[idx[:, 0], idx[:, 1]], d1, fr)
    metrics["max_route_deviation"] = float(np.max(np.abs(d1 - fr)))
    metrics["n_points"] = int(len(idx))
    checks["routes_agree"] = metrics["max_route_deviation"] <= _tol(cfg, key) * peak
    return key, metrics, checks


def _write_points(path, pts, a, b):
    with Path(path).open("w") as fh:
        fh.write("x_re,x_im,value,reference\n")
        np.savetxt(fh, np.column_stack([np.real(pts), np.imag(pts), a, b]), delimiter=",", fmt="%.17g")


def _hyp_points(cfg, n=7):
    """Lattice in d(0, x) <= 1, i.e. |x| <= tanh(1/2)."""
    return _sample_points(float(point_at_distance(1.0, 4).real), n)


def cmd_radon_hyp(sub, cfg, args):
    out = _out(cfg)
    key = f"radon hyp {sub}"
    metrics, checks = {}, {}
    if sub == "invert-frac":
        raise UsageError("radon hyp has no fractional-Laplacian route; use invert-d1, invert-abel or invert-bc")
    phantom = rh.HypPhantom(cfg.phantom or "radial-bump", cfg.R, _center(cfg))
    sino = rh.hyp_sinogram(phantom, cfg.n_psi, cfg.ds, threads=cfg.threads)
    peak = max(phantom.peak, 1e-300)
    if sub == "forward":
        io.write_sinogram(out / "sinogram.csv", sino)
        metrics["max_abs"] = float(np.max(np.abs(sino.values)))
        metrics["psi_spread"] = float(np.max(np.ptp(sino.values, axis=0)))
        if phantom.kind == "ball":
            s = sino.s[sino.s < phantom.R]
            exact = 2 * np.arccosh(np.cosh(phantom.R) / np.cosh(s))
            metrics["max_error_vs_chord_formula"] = float(np.max(np.abs(sino.values[:, : s.size] - exact)))
            metrics["value_at_p_0.5"] = float(rh.hyp_xray_forward(phantom, 0.0, 0.5))
            checks["chord_formula"] = metrics["max_error_vs_chord_formula"] < _tol(cfg, key)
        else:
            checks["finite"] = True
        return key, metrics, checks
    pts = _hyp_points(cfg)
    ref = phantom(pts)
    if sub == "invert-d1":
        vals = np.array([rh.hyp_invert_d1(sino, x, dp=cfg.dp, n_dir=cfg.n_dir) for x in pts])
        _write_points(out / "reconstruction_points.csv", pts, vals, ref)
        metrics["max_abs_error"] = float(np.max(np.abs(vals - ref)))
        checks["relative_error"] = metrics["max_abs_error"] <= _tol(cfg, key) * peak
        return key, metrics, checks
    if sub == "invert-abel":
        vals = np.array([rh.hyp_invert_d1_abel(sino, x, n_dir=cfg.n_dir) for x in pts])
        _write_points(out / "reconstruction_points.csv", pts, vals, ref)
        metrics["max_abs_error"] = float(np.max(np.abs(vals - ref)))
        checks["relative_error"] = metrics["max_abs_error"] <= _tol(cfg, key) * peak
        return key, metrics, checks
    grid = re_.ImageGrid(cfg.bc_grid_n, cfg.bc_half_width)
    bc = rh.bc_invert(sino, grid, threads=cfg.threads)
    inside = rh._rho(grid.points) <= 1.0
    if sub == "invert-bc":
        io.write_grid_function(out / "reconstruction.csv", bc)
        err = np.abs(bc.values - phantom(grid.points))[inside]
        metrics["max_abs_error"] = float(np.max(err)) if err.size else 0.0
        checks["relative_error"] = metrics["max_abs_error"] <= _tol(cfg, key) * peak
        return key, metrics, checks
    # compare
    P = grid.points[inside]
    sel = np.arange(0, P.size, max(1, P.size // 40))
    pts = P[sel]
    d1 = np.array([rh.hyp_invert_d1(sino, x, dp=cfg.dp, n_dir=cfg.n_dir) for x in pts])
    ab = np.array([rh.hyp_invert_d1_abel(sino, x, n_dir=cfg.n_dir) for x in pts])
    bcv = bc.values[inside][sel]
    with (out / "compare_points.csv").open("w") as fh:
        fh.write("x_re,x_im,d1,abel,bc\n")
        np.savetxt(fh, np.column_stack([pts.real, pts.imag, d1, ab, bcv]), delimiter=",", fmt="%.17g")
    tol = _tol(cfg, key)
    metrics["d1_vs_abel"] = float(np.max(np.abs(d1 - ab)))
    metrics["d1_vs_bc"] = float(np.max(np.abs(d1 - bcv)))
    checks["d1_vs_abel"] = metrics["d1_vs_abel"] <= tol * peak
    checks["d1_vs_bc"] = metrics["d1_vs_bc"] <= 3 * tol * peak
    return key, metrics, checks


# --- eigen ------------------------------------------------------------------


def _eigen_case(cfg):
    kind = cfg.eigen_kind
    lam = cfg.lam
    b = np.exp(0.4j)
    if kind == "exponential":
        return eigen.exponential(1j * lam + 1, b), lam**2 + 1, "hyperbolic"
    if kind == "spherical":
        return (lambda z: fourier.spherical_function(lam, z)), lam**2 + 1, "hyperbolic"
    if kind == "poisson":
        return eigen.exponential(2.0, b), 0.0, "hyperbolic"
    if kind == "two-atom":
        T = eigen.AnalyticFunctional(atoms=((0.4, 1.0), (2.5, 0.5 - 0.3j)))
        return (lambda z: eigen.eigenfunction_from_functional(T, 1j * lam + 1, z)), lam**2 + 1, "hyperbolic"
    if kind == "plane-wave":
        return eigen.plane_wave(lam, 0.0), lam**2, "euclidean"
    if kind == "constant":
        return (lambda z: np.ones(np.shape(z), dtype=complex)), 1.0, "hyperbolic"
    raise UsageError(f"unknown eigen kind {kind!r}; choose from {EIGEN_KINDS}")


def cmd_eigen(cfg, args):
    out = _out(cfg)
    u, ev, metric = _eigen_case(cfg)
    if cfg.eigenvalue:
        try:
            ev = complex(cfg.eigenvalue.replace(" ", ""))
        except ValueError:
            raise UsageError(f"config key 'eigenvalue': cannot read {cfg.eigenvalue!r} as a number") from None
    # harmonicity is checked at 1e-5, below the plain stencil's h^2 error near
    # the boundary point, so the Poisson case always uses the extrapolated stencil
    rich = cfg.richardson or cfg.eigen_kind == "poisson"
    if metric == "euclidean":
        z, res = eigen.euclidean_residual_scan(u, ev, cfg.region, cfg.h, richardson=rich)
    else:
        z, res = eigen.eigen_residual_scan(u, ev, cfg.region, cfg.h, richardson=rich)
    io.write_residual_scan(out / "residuals.csv", z, res)
    metrics = {"max_residual": float(np.max(res)), "eigenvalue": complex(ev), "laplacian": metric, "richardson": rich}
    tol = cfg.tol if cfg.tol > 0 else (1e-5 if cfg.eigen_kind == "poisson" else DEFAULT_TOL["eigen"])
    checks = {"residual": metrics["max_residual"] < tol}
    return "eigen", metrics, checks


# --- argument parsing -------------------------------------------------------


def _add_config_flags(p):
    p.add_argument("--config", help="flat key = value config file")
    for f in fields(RunConfig):
        flag = "--" + f.name.replace("_", "-")
        kind = type(f.default)
        p.add_argument(flag, dest=f.name, type=kind if kind is not bool else str, default=None)
    # documented short aliases
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--kind", dest="eigen_kind", default=None)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="hyperdisk", description=__doc__.split("\n\n")[0])
    areas = parser.add_subparsers(dest="area", required=True)
    fp = areas.add_parser("fourier", help="Fourier transform on the hyperbolic disk")
    fp.add_argument("subcommand", choices=FOURIER_SUBCOMMANDS)
    fp.add_argument("--spectral", help="spectral CSV input for 'inverse'")
    _add_config_flags(fp)
    rp = areas.add_parser("radon", help="Euclidean and hyperbolic X-ray transforms")
    rp.add_argument("geometry", choices=("euclid", "hyp"))
    rp.add_argument("subcommand", choices=RADON_SUBCOMMANDS)
    _add_config_flags(rp)
    ep = areas.add_parser("eigen", help="eigenfunction residual scans")
    _add_config_flags(ep)
    return parser


def run(argv=None):
    """Parse, execute and report; returns (exit status, report or None)."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    overrides = {f.name: getattr(args, f.name) for f in fields(RunConfig)}
    try:
        cfg = load_config(args.config, overrides)
        t0 = time.perf_counter()
        if args.area == "fourier":
            key, metrics, checks = cmd_fourier(args.subcommand, cfg, args)
        elif args.area == "radon":
            handler = cmd_radon_euclid if args.geometry == "euclid" else cmd_radon_hyp
            key, metrics, checks = handler(args.subcommand, cfg, args)
        else:
            key, metrics, checks = cmd_eigen(cfg, args)
        runtime = time.perf_counter() - t0
    except (UsageError, ValueError, FileNotFoundError) as exc:
        print(f"hyperdisk: error: {exc}", file=sys.stderr)
        return 2, None
    report = io.make_report(key, cfg.as_dict(), metrics, checks, runtime)
    path = io.write_report(Path(cfg.out) / "report.json", report)
    status = "PASS" if report["passed"] else "FAIL"
    print(f"{status} {key}: " + ", ".join(f"{k}={_fmt(v)}" for k, v in metrics.items() if not isinstance(v, list)))
    print(f"report: {path}")
    return (0 if report["passed"] else 1), report


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def main(argv=None):
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())

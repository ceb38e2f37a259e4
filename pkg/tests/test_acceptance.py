"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s``.
"""

import math
import time

import numpy as np
import pytest

from hyperdisk import radon_euclid as re_
from hyperdisk import radon_hyp as rh
from hyperdisk.abel import (
    ABEL_CONSTANTS,
    RadialProfile,
    abel_forward,
    abel_hyp_forward,
    abel_hyp_inverse,
    abel_inverse,
    calibrate_abel_constant,
)
from hyperdisk.eigen import eigen_residual_scan, euclidean_residual_scan, exponential, plane_wave
from hyperdisk.fourier import (
    SpectralData,
    TestFunction,
    coefficient_condition_residual,
    fourier_inverse,
    functional_equation_residual,
    lambda_grid,
    plancherel_defect,
    spectral_data,
    spherical_function,
)
from hyperdisk.geometry import MoebiusMap, distance, horocycle_bracket
from hyperdisk.quadrature import disk_quadrature
from scipy.integrate import quad


@pytest.fixture
def verdict(request, capsys):
    t0 = time.perf_counter()

    def emit(ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {request.node.name}: {detail} ({time.perf_counter() - t0:.1f}s)")
        assert ok, detail

    return emit


def disk_sample(rng, n, rmax=1.0):
    return rmax * np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def test_01_moebius_invariance(verdict):
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(1000):
        g = MoebiusMap.random(rng)
        z, w = disk_sample(rng, 2, 0.9)
        for scale in (1, 4):
            worst = max(worst, abs(distance(g(z), g(w), scale) - distance(z, w, scale)))
    verdict(worst < 1e-12, f"max |d(gz,gw) - d(z,w)| = {worst:.2e} over 1000 triples, scales 1 and 4")


def test_02_poisson_kernel_identity(verdict):
    rng = np.random.default_rng(2)
    z = disk_sample(rng, 10_000)
    b = np.exp(2j * np.pi * rng.uniform(size=10_000))
    r = np.abs(z)
    # 1 - |z|^2 factored, so the oracle itself keeps full precision near the rim
    lhs = np.exp(2 * horocycle_bracket(z, b)) * np.abs(z - b) ** 2 / ((1 - r) * (1 + r))
    worst = float(np.max(np.abs(lhs - 1)))
    verdict(worst < 1e-14, f"max deviation from 1 = {worst:.2e} on 10^4 samples")


def test_03_spherical_function(verdict):
    lam = np.array([0.0, 0.3, 1.0, 2.5, 6.0])
    z = np.array([0.0, 0.2, -0.5j, 0.3 + 0.6j, 0.85])
    at0 = max(abs(spherical_function(l, 0.0) - 1) for l in lam)
    even = max(np.max(np.abs(spherical_function(l, z) - spherical_function(-l, z))) for l in lam)
    verdict(at0 < 1e-12 and even < 1e-12, f"|phi(0) - 1| = {at0:.1e}, max |phi_l - phi_-l| = {even:.1e}")


def test_04_fourier_round_trip(verdict):
    f = TestFunction("radial-bump", 0.5)
    s = np.linspace(-0.5, 0.5, 11)
    z = (s[None, :] + 1j * s[:, None]).ravel()
    z = z[np.abs(z) <= 0.5]
    errs = []
    for m in (1, 2):
        q = disk_quadrature(48 * m, 96 * m, 0.5)
        sd = spectral_data(f, 20.0 * m, 0.05 / m, 64 * m, q, threads=4)
        errs.append(float(np.max(np.abs(fourier_inverse(sd, z).real - f(z))) / f(0.0)))
    verdict(errs[0] < 1e-2 and errs[1] < errs[0], f"L_inf rel error {errs[0]:.2e}, refined {errs[1]:.2e}")


def test_05_plancherel(verdict):
    out = []
    for f in (TestFunction("radial-bump", 0.5), TestFunction("mobius-translated-bump", 0.4, center=0.25 - 0.1j)):
        q = disk_quadrature(r_max=f.support_radius)
        out.append([plancherel_defect(f, spectral_data(f, L, dl, quad=q, threads=4), q) for L, dl in [(10.0, 0.1), (20.0, 0.05)]])
    ok = all(d[1] < 1e-2 and d[1] < d[0] for d in out)
    verdict(ok, "defects " + "; ".join(f"{a:.2e} -> {b:.2e}" for a, b in out))


def test_06_range_conditions(verdict):
    f = TestFunction("mobius-translated-bump", 0.4, center=0.25 - 0.1j)
    sd = spectral_data(f, 8.0, 0.05, threads=4)
    samples = [(0.7, 0.3, 1), (1.0, -0.2 + 0.1j, -1), (2.0, 0.4j, 2), (1.3, 0.1 - 0.3j, 0), (3.0, 0.5, -2)]
    genuine = max(max(functional_equation_residual(sd, l, z), coefficient_condition_residual(sd, l, k)) for l, z, k in samples)
    # even in theta, supported on lambda > 0 only: violates the functional equation
    lam = lambda_grid(2.0, 0.1)
    theta = 2 * np.pi * np.arange(16) / 16
    bad = SpectralData(lam, theta, np.where(lam[:, None] > 0, 1.0, 0.0) * np.ones((1, 16)))
    counter = functional_equation_residual(bad, 0.1, 0.3)
    verdict(genuine < 1e-7 and counter > 0.1, f"genuine max residual {genuine:.1e}, counterexample {counter:.3f}")


def test_07_eigenfunction_residuals(verdict):
    b = np.exp(0.4j)
    res = {}
    for lam in (0.0, 0.7, 1.3, 2.0):
        res[f"exp {lam}"] = float(np.max(eigen_residual_scan(exponential(1j * lam + 1, b), lam**2 + 1, h=1e-3)[1]))
    res["plane wave"] = float(np.max(euclidean_residual_scan(plane_wave(2.0, 0.5), 4.0, h=1e-3)[1]))
    u = exponential(1.3j + 1, b)
    pt = np.array([0.3 + 0.2j])
    seq = [eigen_residual_scan(u, 1.3**2 + 1, points=pt, h=h)[1][0] for h in (4e-3, 2e-3, 1e-3)]
    ratios = [seq[0] / seq[1], seq[1] / seq[2]]
    ok = max(res.values()) < 1e-4 and all(3.5 < r < 4.5 for r in ratios)
    verdict(ok, f"max residual {max(res.values()):.2e}, h-halving ratios {ratios[0]:.2f}, {ratios[1]:.2f}")


def test_08_abel_pairs(verdict):
    grid = np.arange(0.0, 7.0 + 1e-9, 0.01)
    g = lambda q: np.exp(-q * q)
    pair = float(np.max(np.abs(abel_forward(g, 1, p=grid, qmax=7.0).values - math.sqrt(math.pi) * g(grid))))
    F = lambda q: np.exp(-q * q) * (1 + 0.5 * q * q)
    sel = grid <= 4
    euc = max(np.max(np.abs(abel_inverse(abel_forward(F, d, p=grid, qmax=7.0), d).values[sel] - F(grid[sel]))) for d in (1, 2, 3))
    t = 1 + 0.005 * np.arange(1201)
    H = lambda u: np.exp(-2 * u)
    ts = t <= 4
    hyp = max(np.max(np.abs(abel_hyp_inverse(abel_hyp_forward(H, d, t=t, tmax=t[-1]), d).values[ts] - H(t[ts])) / H(t[ts])) for d in (1, 2))
    c1 = abs(calibrate_abel_constant(1) - ABEL_CONSTANTS[1]) / abs(ABEL_CONSTANTS[1])
    ok = pair < 1e-8 and euc < 1e-5 and hyp < 1e-5 and c1 < 1e-6 and ABEL_CONSTANTS[1] == -2 / math.pi
    verdict(ok, f"Gaussian pair {pair:.1e}, euclid round trips {euc:.1e}, hyperbolic {hyp:.1e}, c(1) rel {c1:.1e}")


def test_09_euclid_xray_oracles(verdict):
    disk = re_.EuclidPhantom("disk", 1.0)
    theta = np.linspace(0, np.pi, 13)[:, None]
    p = np.linspace(0, 0.999, 40)[None, :]
    chord = float(np.max(np.abs(re_.xray_forward(disk, theta, p, support=1.0) - 2 * np.sqrt(1 - p * p))))
    gauss = re_.EuclidPhantom("gaussian")
    s = re_.sinogram(gauss, 36, 6.0, 0.05, support=gauss.support)
    gerr = float(np.max(np.abs(s.values - math.sqrt(math.pi) * np.exp(-s.p**2)[None, :])))
    verdict(chord < 1e-6 and gerr < 1e-8, f"disk chord {chord:.1e}, Gaussian sinogram {gerr:.1e}")


def test_10_euclid_inversions(verdict, gaussian_sinogram):
    f, sino = gaussian_sinogram
    pts = np.array([0.0, 0.5, -0.3 + 0.8j, 1.2j, 1.5 - 0.5j, 2.0])
    d1 = np.array([re_.invert_d1(sino, x) for x in pts])
    e_d1 = float(np.max(np.abs(d1 - f(pts))))
    grid = re_.ImageGrid(256, 4.0)
    rec = re_.invert_fractional(sino, grid)
    e_frac = float(np.max(np.abs(rec.values - f(grid.points)))) / f.peak
    idx = [(128, 128), (110, 140), (150, 100), (128, 170), (90, 128)]
    agree = max(abs(re_.invert_d1(sino, grid.points[i, j]) - rec.values[i, j]) for i, j in idx) / f.peak
    ok = e_d1 < 1e-3 and e_frac < 1e-2 and agree < 2e-2
    verdict(ok, f"d1 route {e_d1:.1e}, fractional route {e_frac:.1e} on 256^2, routes agree {agree:.1e}")


def test_11_hyp_forward_oracle(verdict):
    worst = 0.0
    for R in (0.3, 1.0, 1.7, 2.5):
        ball = rh.HypPhantom("ball", R)
        p = np.linspace(0, 0.999 * R, 15)
        got = rh.hyp_xray_forward(ball, 0.9, p)
        worst = max(worst, float(np.max(np.abs(got - 2 * np.arccosh(np.cosh(R) / np.cosh(p))))))
    verdict(worst < 1e-6, f"max chord deviation {worst:.1e} over 60 (R, p) samples")


def test_12_hyp_inversions(verdict, bump_hyp):
    f, sino = bump_hyp
    r = np.tanh(0.5)
    s = np.linspace(-r, r, 7)
    pts = (s[None, :] + 1j * s[:, None]).ravel()
    pts = pts[rh._rho(pts) <= 1]
    d1 = np.array([rh.hyp_invert_d1(sino, x) for x in pts])
    e_d1 = float(np.max(np.abs(d1 - f(pts)))) / f.peak
    ab = np.array([rh.hyp_invert_d1_abel(sino, x) for x in pts])
    e_ab = float(np.max(np.abs(ab - d1))) / f.peak
    grid = re_.ImageGrid(24, 0.48)
    bc = rh.bc_invert(sino, grid, threads=4)
    inside = np.argwhere(rh._rho(grid.points) <= 1)[::6]
    e_bc = max(abs(bc.values[i, j] - rh.hyp_invert_d1(sino, grid.points[i, j])) for i, j in inside) / f.peak
    ok = e_d1 < 1e-2 and e_ab < 1e-2 and e_bc < 3e-2
    verdict(ok, f"d1 error {e_d1:.1e}, abel vs d1 {e_ab:.1e}, BC vs d1 {e_bc:.1e} ({len(inside)} pts)")


def test_13_radial_reduction(verdict, bump_hyp):
    f, _ = bump_hyp
    src = rh.exact_source(f)
    worst = 0.0
    for p in np.linspace(0, 1.45, 20):
        geo = rh.hyp_dual_at_distance(src, 0.0, p, n_dir=12)
        ch = math.cosh(p)
        red = 2 * quad(lambda t: float(f.profile(math.acosh(ch * math.cosh(t)))), 0, 6, limit=400, epsabs=1e-13)[0]
        worst = max(worst, abs(geo - red))
    verdict(worst < 1e-6, f"max |geometric - reduction| = {worst:.1e} on 20 p samples")

"""Geodesic X-ray transform on the disk in the curvature -1 normalization.

Geodesics are indexed by (psi, s): s >= 0 is the distance from 0 to the
geodesic and psi the direction of its closest point.  All lengths here use
``scale=4`` (d(0, r) = 2 artanh r).  Dual transforms average over geodesics
uniformly in direction (total mass 1).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .abel import ABEL_CONSTANTS, RadialProfile, abel_hyp_inverse
from .fourier import bump
from .geometry import (
    TWO_PI,
    as_complex,
    distance,
    endpoints_to_psi_half,
    geodesic_points_psi_s,
    half_angle_to_s,
    mobius_geodesic_params,
    translate_to_origin,
)
from .quadrature import gauss_legendre
from .radon_euclid import GridFunction, ImageGrid, _radial_integral

log = logging.getLogger(__name__)

SCALE = 4
PHANTOM_KINDS = ("radial-bump", "ball", "translated-bump", "zero")

# L S (pi * averaged dual) = -4 pi^2 f; see bc_invert
BC_CONSTANT = -4 * math.pi**2


def _rho(z):
    """Distance from 0 in the curvature -1 metric."""
    return 2 * np.arctanh(np.minimum(np.abs(z), 1 - 1e-16))


@dataclass(frozen=True)
class HypPhantom:
    """Test inputs for the hyperbolic inversions.

    radial-bump: bump(d(0, z) / R); ball: indicator of d(0, z) < R;
    translated-bump: the radial bump moved so its centre sits at ``center``.
    """

    kind: str = "radial-bump"
    R: float = 1.5
    center: complex = 0j

    def __post_init__(self):
        if self.kind not in PHANTOM_KINDS:
            raise ValueError(f"unknown phantom kind {self.kind!r}; choose from {PHANTOM_KINDS}")
        if self.R <= 0:
            raise ValueError("phantom radius must be positive")
        c = complex(self.center)
        if abs(c) >= 1:
            raise ValueError("phantom centre must lie inside the disk")
        if self.kind != "translated-bump":
            c = 0j
        object.__setattr__(self, "center", c)

    def profile(self, rho):
        """Value as a function of the distance to the centre."""
        rho = np.asarray(rho, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(rho)
        if self.kind == "ball":
            return (rho < self.R).astype(float)
        return bump(rho / self.R)

    def __call__(self, z):
        z = as_complex(z)
        w = translate_to_origin(self.center)(z) if self.center else z
        return self.profile(_rho(w))

    @property
    def support_radius(self):
        """Distance from 0 beyond which the phantom vanishes."""
        return float(distance(0, self.center, SCALE)) + self.R

    @property
    def peak(self):
        return 0.0 if self.kind == "zero" else 1.0


def hyp_xray_forward(f: HypPhantom, psi, s, n_nodes=96):
    """Integrals of f over the geodesics (psi, s) with respect to arc length.

    The geodesics are moved into the frame where the phantom is centred
    at 0; there the chord through the support is [-T, T] with
    cosh R = cosh s' cosh T, integrated by Gauss-Legendre.
    """
    psi, s = np.broadcast_arrays(np.asarray(psi, float), np.asarray(s, float))
    if f.kind == "zero":
        return np.zeros(psi.shape)
    if f.center:
        psi, s = mobius_geodesic_params(translate_to_origin(f.center), psi, s, SCALE)
    ratio = math.cosh(f.R) / np.cosh(s)
    T = np.arccosh(np.maximum(ratio, 1.0))
    x, w = gauss_legendre(n_nodes, -1.0, 1.0)
    t = T[..., None] * x
    pts = geodesic_points_psi_s(psi[..., None], s[..., None], t, SCALE)
    vals = f.profile(_rho(pts))
    return (vals @ w) * T


@dataclass(frozen=True)
class HypSinogram:
    """Samples on psi uniform in [0, 2 pi) times s uniform in [0, s_max].

    Geodesics beyond s_max are treated as missing the support when
    ``zero_beyond`` is set (the sampler knows the phantom's support);
    otherwise querying them is a coverage gap.
    """

    psi: np.ndarray
    s: np.ndarray
    values: np.ndarray
    zero_beyond: bool = True
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (np.size(self.psi), np.size(self.s)):
            raise ValueError("values must have shape (len(psi), len(s))")
        if not np.all(np.isfinite(vals)):
            raise ValueError("sinogram values must be finite")
        s = np.asarray(self.s, dtype=float)
        if s[0] != 0 or np.any(np.diff(s) <= 0):
            raise ValueError("s grid must start at 0 and increase")
        object.__setattr__(self, "psi", np.asarray(self.psi, dtype=float))
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "values", vals)

    @property
    def s_max(self):
        return float(self.s[-1])

    def __call__(self, psi, s):
        """Bilinear interpolation in (psi, s), periodic in psi."""
        psi, s = np.broadcast_arrays(np.asarray(psi, float), np.asarray(s, float))
        beyond = s > self.s_max * (1 + 1e-12)
        if np.any(beyond) and not self.zero_beyond:
            raise ValueError("coverage gap: geodesic beyond the sampled s range")
        n_psi = self.psi.size
        dpsi = TWO_PI / n_psi
        ds = self.s[1] - self.s[0]
        u = np.mod(psi - self.psi[0], TWO_PI) / dpsi
        i = np.floor(u).astype(int) % n_psi
        a = u - np.floor(u)
        v = np.minimum(s, self.s_max) / ds
        j = np.clip(np.floor(v).astype(int), 0, self.s.size - 2)
        b = v - j
        i1 = (i + 1) % n_psi
        V = self.values
        out = (1 - a) * ((1 - b) * V[i, j] + b * V[i, j + 1]) + a * ((1 - b) * V[i1, j] + b * V[i1, j + 1])
        return np.where(beyond, 0.0, out)


def hyp_sinogram(f: HypPhantom, n_psi=180, ds=0.01, s_max=None, n_nodes=96, threads=1) -> HypSinogram:
    """Sample the geodesic X-ray transform; s_max defaults to the support radius."""
    s_max = f.support_radius if s_max is None else s_max
    psi = TWO_PI * np.arange(n_psi) / n_psi
    s = ds * np.arange(int(math.ceil(s_max / ds - 1e-9)) + 1)
    rows = lambda k: hyp_xray_forward(f, psi[k], s, n_nodes)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
        vals = np.array(list(ex.map(rows, range(n_psi))))
    zero_beyond = s[-1] >= f.support_radius
    meta = dict(n_psi=n_psi, ds=ds, s_max=float(s[-1]), kind=f.kind, R=f.R, center=str(f.center))
    return HypSinogram(psi, s, vals, zero_beyond, meta)


DataSource = Callable  # (psi, s) -> values; a HypSinogram or an exact forward map


def exact_source(f: HypPhantom, n_nodes=96) -> DataSource:
    return lambda psi, s: hyp_xray_forward(f, psi, s, n_nodes)


def hyp_dual_at_distance(data: DataSource, x, p, n_dir=180):
    """Average of the data over geodesics at distance p from x.

    Geodesics at distance p from 0 are (psi_k, p) with psi_k uniform; the
    translation taking 0 to x carries them to the family tangent to the
    circle of radius p about x.
    """
    x = complex(as_complex(x))
    p = np.asarray(p, dtype=float)
    psi = TWO_PI * np.arange(n_dir) / n_dir
    pp, kk = np.broadcast_arrays(p[..., None], psi)
    if x:
        kk, pp = mobius_geodesic_params(translate_to_origin(x).inverse(), kk, pp, SCALE)
    return data(kk, pp).mean(axis=-1)


def hyp_dual_profile(data: DataSource, x, p_max, dp=0.01, n_dir=180) -> RadialProfile:
    p = dp * np.arange(int(math.floor(p_max / dp + 1e-9)) + 1)
    return RadialProfile(p, hyp_dual_at_distance(data, x, p, n_dir))


def _reach(data, x):
    """Largest useful p about x: beyond it every geodesic misses the support."""
    support = getattr(data, "meta", {}).get("s_max")
    if support is None:
        return None
    return support + float(distance(0, x, SCALE))


def hyp_invert_d1(data: DataSource, x, p_max=None, dp=0.01, n_dir=180):
    """f(x) = -(1/pi) int_0^inf (1/sinh p) d/dp (dual_p)(x) dp."""
    x = complex(as_complex(x))
    p_max = _reach(data, x) if p_max is None else p_max
    if p_max is None:
        raise ValueError("p_max is required for data without a known support")
    g = hyp_dual_profile(data, x, p_max, dp, n_dir).values
    return float(_radial_integral(g, dp, lambda q: 1 / np.sinh(q)))


def hyp_invert_abel(profile_hat: RadialProfile, d=1, constant=None):
    """Value at the centre from the dual profile indexed by t = cosh p.

    The profile must be sampled uniformly in t starting at t = 1.
    """
    if d not in (1, 2):
        raise ValueError(f"unsupported d={d}; supported: (1, 2)")
    if not np.isclose(profile_hat.grid[0], 1.0, rtol=0, atol=1e-12):
        raise ValueError("profile must start at t = 1 (p = 0)")
    c = ABEL_CONSTANTS[d] if constant is None else constant
    return float(abel_hyp_inverse(profile_hat, d, constant=c).values[0])


def hyp_dual_profile_t(data: DataSource, x, t_max, dt=0.005, n_dir=180) -> RadialProfile:
    """Dual profile re-indexed by t = cosh p on a uniform t grid."""
    t = 1 + dt * np.arange(int(math.floor((t_max - 1) / dt + 1e-9)) + 1)
    return RadialProfile(t, hyp_dual_at_distance(data, x, np.arccosh(t), n_dir))


def hyp_invert_d1_abel(data: DataSource, x, p_max=None, dt=0.005, n_dir=180):
    x = complex(as_complex(x))
    p_max = _reach(data, x) if p_max is None else p_max
    if p_max is None:
        raise ValueError("p_max is required for data without a known support")
    return hyp_invert_abel(hyp_dual_profile_t(data, x, math.cosh(p_max), dt, n_dir), 1)


# --- Berenstein-Casadio route ---------------------------------------------


def _through_point_params(y, phi):
    """(psi, s) of the geodesic through y at angle phi from the direction to 0."""
    y = np.asarray(y, dtype=complex)
    toward0 = np.angle(-y)
    # in the frame centred at y the geodesic is a diameter; (psi, 0) has
    # endpoints psi -+ pi/2, i.e. it runs in direction psi + pi/2
    psi0 = toward0 + phi - np.pi / 2
    back = lambda z: (z + y) / (1 + np.conj(y) * z)
    e1 = back(np.exp(1j * (psi0 - np.pi / 2)))
    e2 = back(np.exp(1j * (psi0 + np.pi / 2)))
    psi, half = endpoints_to_psi_half(np.angle(e1), np.angle(e2))
    return psi, half_angle_to_s(half, SCALE)


def windowed_backprojection(data: DataSource, D, theta, support, n_full=180, n_window=64):
    """Averaged dual (p = 0) at the points at distance D, direction theta from 0.

    Only geodesics through y whose distance s' from 0 is below ``support``
    carry data; with sinh s' = sinh D |sin phi| these form the window
    |phi| < arcsin(sinh support / sinh D), integrated by Gauss-Legendre.
    Closer points use the uniform rule over all directions.
    """
    D, theta = np.broadcast_arrays(np.asarray(D, float), np.asarray(theta, float))
    y = np.tanh(D / 2) * np.exp(1j * theta)
    out = np.empty(D.shape)
    ratio = np.sinh(support) / np.maximum(np.sinh(D), 1e-300)
    near = ratio >= 1
    if np.any(near):
        phi = np.pi * np.arange(n_full) / n_full
        yy = y[near][:, None]
        psi, s = _through_point_params(yy, phi[None, :])
        out[near] = data(psi, s).mean(axis=1)
    far = ~near
    if np.any(far):
        phi0 = np.arcsin(ratio[far])
        x, w = gauss_legendre(n_window, -1.0, 1.0)
        phi = phi0[:, None] * x[None, :]
        psi, s = _through_point_params(y[far][:, None], phi)
        # (1/pi) int_{-phi0}^{phi0} data dphi
        out[far] = (data(psi, s) @ w) * phi0 / np.pi
    return out


@dataclass(frozen=True)
class PolarField:
    """A function sampled on (D, theta) about 0, interpolated by splines."""

    D: np.ndarray
    theta: np.ndarray
    values: np.ndarray  # shape (len(D), len(theta)); stores exp(D) * field

    def __post_init__(self):
        th = np.concatenate([self.theta[-3:] - TWO_PI, self.theta, self.theta[:3] + TWO_PI])
        v = np.concatenate([self.values[:, -3:], self.values, self.values[:, :3]], axis=1)
        object.__setattr__(self, "_spline", RectBivariateSpline(self.D, th, v, kx=3, ky=3))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        D = _rho(z)
        th = np.mod(np.angle(z), TWO_PI)
        inside = D <= self.D[-1]
        out = np.zeros(z.shape)
        out[inside] = self._spline.ev(D[inside], th[inside]) * np.exp(-D[inside])
        return out


def backprojection_field(data: DataSource, support, D_max=16.0, dD=0.02, n_theta=128, n_full=180, n_window=64):
    """Materialize the averaged dual on a polar grid about 0, out to D_max."""
    D = dD * np.arange(int(math.ceil(D_max / dD)) + 1)
    theta = TWO_PI * np.arange(n_theta) / n_theta
    DD, TT = np.meshgrid(D, theta, indexing="ij")
    vals = windowed_backprojection(data, DD.ravel(), TT.ravel(), support, n_full, n_window)
    return PolarField(D, theta, np.exp(DD) * vals.reshape(DD.shape))


@dataclass(frozen=True)
class PolarRule:
    """Geodesic polar rule about a point: Gauss-Legendre in rho on panels, trapezoid in theta."""

    rho_max: float = 14.0
    n_theta: int = 64
    panels: tuple = (0.0, 1.0, 3.0, 6.0, 10.0, 14.0)
    n_per_panel: int = 24

    def nodes(self):
        edges = [e for e in self.panels if e < self.rho_max] + [self.rho_max]
        r, w = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            x, wx = gauss_legendre(self.n_per_panel, a, b)
            r.append(x)
            w.append(wx)
        theta = TWO_PI * np.arange(self.n_theta) / self.n_theta
        return np.concatenate(r), np.concatenate(w), theta


def bc_operator(fld, x, rule: PolarRule | None = None):
    """(S f)(x) = int_D (coth d(x, y) - 1) f(y) dy, curvature -1 area.

    In geodesic polar coordinates about x the area element is
    sinh rho drho dtheta and (coth rho - 1) sinh rho = exp(-rho), so the
    integrand is smooth; y is placed by the translation taking 0 to x.
    ``fld`` maps disk points to values and should decay fast enough for
    the exp(-rho) weighted integral to be cut at ``rule.rho_max``.
    """
    rule = rule or PolarRule()
    rho, w, theta = rule.nodes()
    x = np.atleast_1d(np.asarray(as_complex(x), dtype=complex))
    local = np.tanh(rho / 2)[:, None] * np.exp(1j * theta)[None, :]
    weights = (w * np.exp(-rho))[:, None] * (TWO_PI / theta.size)
    out = np.empty(x.shape)
    for k, xk in enumerate(x.ravel()):
        y = (local + xk) / (1 + np.conj(xk) * local)
        out.flat[k] = np.sum(weights * fld(y))
    return out if out.size > 1 else float(out[0])


def bc_invert(data: DataSource, grid: ImageGrid, support=None, rule: PolarRule | None = None, threads=1, field_kw=None):
    """f = L S (pi * averaged dual) / (-4 pi^2) on the points of ``grid``.

    The dual is materialized once as a polar field; S is evaluated on the
    grid plus a one-cell margin and L = (1 - |z|^2)^2 / 4 times the
    five-point Laplacian with the grid spacing.
    """
    support = _support_of(data) if support is None else support
    h = grid.spacing
    ext = ImageGrid(grid.n + 2, grid.half_width + h)
    pts = ext.points
    if np.max(np.abs(pts)) >= 1 - h:
        raise ValueError("insufficient grid margin for the Laplacian stencil inside the disk")
    b = backprojection_field(data, support, **(field_kw or {}))
    field_fn = lambda z: math.pi * b(z)
    rows = lambda i: np.asarray(bc_operator(field_fn, pts[i], rule))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
        S = np.array(list(ex.map(rows, range(ext.n))))
    lap = (S[2:, 1:-1] + S[:-2, 1:-1] + S[1:-1, 2:] + S[1:-1, :-2] - 4 * S[1:-1, 1:-1]) / h**2
    z = grid.points
    L = (1 - np.abs(z) ** 2) ** 2 / 4 * lap
    return GridFunction(grid, L / BC_CONSTANT)


def _support_of(data):
    s = getattr(data, "meta", {}).get("s_max")
    if s is None:
        raise ValueError("support radius is required for data without metadata")
    return s

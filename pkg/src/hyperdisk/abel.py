"""Abel-type integral equations for radial Radon averages.

Euclidean pair (d-plane averages of a radial profile F)::

    Fhat(p) = Omega_d * int_p^inf F(q) (q^2 - p^2)^(d/2 - 1) q dq
    F(r)    = c(d) (d/d(r^2))^d int_r^inf p (p^2 - r^2)^(d/2 - 1) Fhat(p) dp

Hyperbolic pair, profiles indexed by t = cosh(distance)::

    Fhat(t)        = Omega_d * int_1^inf F(t s) (s^2 - 1)^(d/2 - 1) ds
    F(r) / r       = c(d) (d/d(r^2))^d int_r^inf t (t^2 - r^2)^(d/2 - 1) t^(d-1) Fhat(t) dt

The hyperbolic pair is the Euclidean one applied to u -> F(u)/u and
t -> t^(d-1) Fhat(t), so both share one implementation.

Inversion works in integrated-by-parts form: with J_a(r) = int_r^inf
(p^2 - r^2)^a Fhat'(p) dp one has d/d(r^2) J_a = -a J_(a-1), which is
applied analytically until the exponent reaches -1/2 (d odd, then
J_(-1/2)(r) = int_0^inf Fhat'(q)/q du with q = sqrt(r^2 + u^2)) or 0 (d even,
J_0 = -Fhat).  Remaining d/d(r^2) = (1/2r) d/dr are finite differences.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .quadrature import gauss_legendre

log = logging.getLogger(__name__)

SUPPORTED_D = (1, 2, 3)
SUPPORTED_D_HYP = (1, 2)

# c(d) from the Gaussian calibration (calibrate_abel_constant reproduces them)
ABEL_CONSTANTS = {1: -2 / math.pi, 2: 2 / math.pi, 3: -4 / math.pi**2}


def sphere_area(d):
    """Area of the unit sphere in R^d; the 0-sphere {-1, 1} counts as 2."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


@dataclass(frozen=True)
class RadialProfile:
    grid: np.ndarray
    values: np.ndarray
    cutoff: float | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-D arrays of equal length")
        if grid.size < 2 or np.any(np.diff(grid) <= 0):
            raise ValueError("profile grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("profile values must be finite")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        cutoff = grid[-1] if self.cutoff is None else float(self.cutoff)
        object.__setattr__(self, "cutoff", min(cutoff, grid[-1]))

    @property
    def step(self):
        return self.grid[1] - self.grid[0]

    def is_uniform(self, rtol=1e-9):
        dg = np.diff(self.grid)
        return np.allclose(dg, dg[0], rtol=rtol, atol=0)

    def interpolant(self):
        return _spline(self.grid, self.values)

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        spl = self.interpolant()
        out = spl(np.abs(q) if self.grid[0] == 0 else q)
        return np.where(np.abs(q) <= self.cutoff, out, 0.0)


def _spline(grid, values):
    if grid[0] == 0:
        # even extension keeps the interpolant smooth through 0
        g = np.concatenate([-grid[:0:-1], grid])
        v = np.concatenate([values[:0:-1], values])
        return CubicSpline(g, v)
    return CubicSpline(grid, values)


def _check_d(d, allowed):
    if d not in allowed:
        raise ValueError(f"unsupported dimension d={d}; supported: {allowed}")


def _check_density(profile: RadialProfile, d):
    need = 10 * (d + 1)
    if profile.grid.size < need:
        raise ValueError(
            f"profile too coarse for {d}-fold differentiation: "
            f"{profile.grid.size} samples, need at least {need}"
        )
    if not profile.is_uniform():
        raise ValueError("inversion needs a uniform profile grid")


def derivative(values, h, even=False):
    """Fourth-order finite-difference derivative on a uniform grid.

    Centered in the interior; at the left edge the even extension is used
    when ``even`` (grid starting at 0), otherwise one-sided stencils.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    out = np.empty(n)
    if even:
        ext = np.concatenate([v[2:0:-1], v])
        idx = np.arange(0, n - 2)
        j = idx + 2
    else:
        ext = v
        idx = np.arange(2, n - 2)
        j = idx
    out[idx] = (ext[j - 2] - 8 * ext[j - 1] + 8 * ext[j + 1] - ext[j + 2]) / (12 * h)
    fwd = np.array([-25, 48, -36, 16, -3]) / (12 * h)
    fwd1 = np.array([-3, -10, 18, -6, 1]) / (12 * h)
    if not even:
        out[0] = fwd @ v[:5]
        out[1] = fwd1 @ v[:5]
    out[-1] = -(fwd @ v[::-1][:5])
    out[-2] = -(fwd1 @ v[::-1][:5])
    return out


def _second_derivative_at_zero(values, h):
    v = values
    return (-2 * v[2] + 32 * v[1] - 30 * v[0]) / (12 * h**2)


def d_dr2(values, grid, even):
    """Apply d/d(r^2) = (1/2r) d/dr on a uniform grid."""
    h = grid[1] - grid[0]
    out = derivative(values, h, even=even)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = out / (2 * grid)
    if even:
        out[0] = 0.5 * _second_derivative_at_zero(values, h)
    return out


def _forward_core(F, p, d, qmax, n_nodes):
    """Omega_d * int_0^U F(sqrt(p^2 + u^2)) u^(d-1) du for each p."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    inside = p < qmax
    if not np.any(inside):
        return out
    pin = p[inside]
    upper = np.sqrt(qmax**2 - pin**2)
    x, w = gauss_legendre(n_nodes, 0.0, 1.0)
    u = upper[:, None] * x[None, :]
    q = np.sqrt(pin[:, None] ** 2 + u**2)
    integrand = F(q) * u ** (d - 1)
    out[inside] = sphere_area(d) * (integrand @ w) * upper
    return out


def abel_forward(F, d, p=None, qmax=None, n_nodes=400) -> RadialProfile:
    """Radon average profile of a radial profile F (RadialProfile or callable).

    The singular kernel is removed by q = sqrt(p^2 + u^2).  For a callable
    ``p`` and ``qmax`` are required.
    """
    _check_d(d, SUPPORTED_D)
    if isinstance(F, RadialProfile):
        p = F.grid if p is None else np.asarray(p, dtype=float)
        qmax = F.cutoff if qmax is None else qmax
    elif p is None or qmax is None:
        raise ValueError("callable profiles need an output grid p and a cutoff qmax")
    vals = _forward_core(F, p, d, qmax, n_nodes)
    return RadialProfile(p, vals, cutoff=qmax)


def _j_minus_half(grid, dvals, r, upper_limit, even, n_nodes):
    """J_(-1/2)(r) = int_0^U h(sqrt(r^2 + u^2)) du with h = Fhat'(q)/q."""
    h = grid[1] - grid[0]
    hvals = np.empty_like(dvals)
    with np.errstate(divide="ignore", invalid="ignore"):
        hvals[:] = dvals / grid
    if even:
        # Fhat' is odd, so Fhat'(q)/q -> Fhat''(0) at the origin
        hvals[0] = (-dvals[2] + 8 * dvals[1]) / (6 * h)
    spl = _spline(grid, hvals)
    x, w = gauss_legendre(n_nodes, 0.0, 1.0)
    upper = np.sqrt(np.maximum(upper_limit**2 - r**2, 0.0))
    u = upper[:, None] * x[None, :]
    q = np.sqrt(r[:, None] ** 2 + u**2)
    return (spl(q) @ w) * upper


def _inverse_core(grid, fhat, d, even, n_nodes, constant):
    h = grid[1] - grid[0]
    dvals = derivative(fhat, h, even=even)
    if d % 2:
        k = (d + 1) // 2
        coef = (-1.0 / d) * (-1) ** k * math.prod(d / 2 - j for j in range(k))
        g = coef * _j_minus_half(grid, dvals, grid, grid[-1], even, n_nodes)
        remaining = (d - 1) // 2
    else:
        k = d // 2
        coef = (-1.0 / d) * (-1) ** k * math.prod(d / 2 - j for j in range(k)) * -1.0
        g = coef * fhat
        remaining = d // 2
    for _ in range(remaining):
        g = d_dr2(g, grid, even)
    tail = abs(fhat[-1]) / max(np.max(np.abs(fhat)), 1e-300)
    log.debug("abel inverse d=%d: relative truncation level at cutoff %.2e", d, tail)
    return constant * g


def abel_inverse(Fhat: RadialProfile, d, constant=None, n_nodes=400) -> RadialProfile:
    """Recover F on Fhat's grid (which must be uniform and start at 0)."""
    _check_d(d, SUPPORTED_D)
    _check_density(Fhat, d)
    if Fhat.grid[0] != 0:
        raise ValueError("Euclidean Abel inversion needs a profile grid starting at 0")
    c = ABEL_CONSTANTS[d] if constant is None else constant
    vals = _inverse_core(Fhat.grid, Fhat.values, d, True, n_nodes, c)
    return RadialProfile(Fhat.grid, vals, cutoff=Fhat.cutoff)


def abel_hyp_forward(F, d, t=None, tmax=None, n_nodes=400) -> RadialProfile:
    """Hyperbolic Abel transform; F is a profile (or callable) in t = cosh q >= 1."""
    _check_d(d, SUPPORTED_D_HYP)
    if isinstance(F, RadialProfile):
        t = F.grid if t is None else np.asarray(t, dtype=float)
        tmax = F.cutoff if tmax is None else tmax
    elif t is None or tmax is None:
        raise ValueError("callable profiles need an output grid t and a cutoff tmax")
    t = np.asarray(t, dtype=float)
    if np.any(t < 1):
        raise ValueError("hyperbolic profiles live on t = cosh(p) >= 1")
    vals = _forward_core(lambda u: F(u) / u, t, d, tmax, n_nodes) / t ** (d - 1)
    return RadialProfile(t, vals, cutoff=tmax)


def abel_hyp_inverse(Fhat: RadialProfile, d, constant=None, n_nodes=400) -> RadialProfile:
    """Recover F(t) on Fhat's grid; the first node t = 1 gives the value at the centre."""
    _check_d(d, SUPPORTED_D_HYP)
    _check_density(Fhat, d)
    if Fhat.grid[0] < 1:
        raise ValueError("hyperbolic profiles live on t = cosh(p) >= 1")
    c = ABEL_CONSTANTS[d] if constant is None else constant
    t = Fhat.grid
    vals = _inverse_core(t, t ** (d - 1) * Fhat.values, d, False, n_nodes, c)
    return RadialProfile(t, t * vals, cutoff=Fhat.cutoff)


def calibrate_abel_constant(d, step=0.01, qmax=7.0):
    """Solve for c(d) from the Gaussian pair F(q) = exp(-q^2).

    Runs the forward transform numerically, applies the inversion with
    c = 1 and returns the least-squares ratio F / raw over q <= 2.
    """
    grid = np.arange(0.0, qmax + step / 2, step)
    fhat = abel_forward(lambda q: np.exp(-(q**2)), d, p=grid, qmax=qmax)
    raw = abel_inverse(fhat, d, constant=1.0).values
    sel = grid <= 2.0
    target = np.exp(-grid[sel] ** 2)
    return float(target @ raw[sel] / (raw[sel] @ raw[sel]))

"""X-ray transform on R^2, dual transforms at a distance, and its inversions.

Points of the plane are complex numbers.  A line is {x : (x, omega) = p}
with omega = e^{i theta}.  Dual transforms average over omega uniformly on
the full circle (total mass 1), so the dual of a constant is that constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .abel import RadialProfile, _j_minus_half, _second_derivative_at_zero, d_dr2, derivative
from .fourier import bump
from .geometry import as_complex
from .quadrature import gauss_legendre

TWO_PI = 2 * np.pi

# Inversion constants under the averaging normalization,
# calibrated on the Gaussian pair (see scripts/calibrate_constants.py)
C1_EVEN = {2: -1 / (2 * math.pi)}
C2_ODD = {1: -1 / math.pi, 3: 1 / math.pi**2}


def fractional_constant(d=1, n=2):
    """Gamma((n-d)/2) / ((4 pi)^(d/2) Gamma(n/2))."""
    return math.gamma((n - d) / 2) / ((4 * math.pi) ** (d / 2) * math.gamma(n / 2))


@dataclass(frozen=True)
class Line:
    theta: float
    p: float

    def __post_init__(self):
        theta, p = float(self.theta), float(self.p)
        if p < 0:
            theta, p = theta + np.pi, -p
        object.__setattr__(self, "theta", theta % TWO_PI)
        object.__setattr__(self, "p", p)

    @property
    def omega(self):
        return complex(np.exp(1j * self.theta))


EUCLID_PHANTOMS = ("gaussian", "disk", "bump", "zero")


@dataclass(frozen=True)
class EuclidPhantom:
    """gaussian: exp(-|x - c|^2); disk: indicator of |x - c| < radius;
    bump: bump(|x - c| / radius).  ``support`` bounds |x| on the support
    (the Gaussian is cut at |x - c| = 6, where it is below 1e-15)."""

    kind: str = "gaussian"
    radius: float = 1.0
    center: complex = 0j

    def __post_init__(self):
        if self.kind not in EUCLID_PHANTOMS:
            raise ValueError(f"unknown phantom kind {self.kind!r}; choose from {EUCLID_PHANTOMS}")
        if self.radius <= 0:
            raise ValueError("phantom radius must be positive")
        object.__setattr__(self, "center", complex(self.center))

    def __call__(self, x):
        r = np.abs(as_complex(x) - self.center)
        if self.kind == "gaussian":
            return np.exp(-(r**2))
        if self.kind == "disk":
            return (r < self.radius).astype(float)
        if self.kind == "bump":
            return bump(r / self.radius)
        return np.zeros(np.shape(r))

    @property
    def support(self):
        reach = 6.0 if self.kind == "gaussian" else self.radius
        return abs(self.center) + reach

    @property
    def peak(self):
        return 0.0 if self.kind == "zero" else 1.0

    def chord(self, theta, p):
        """Exact line integrals where available (None otherwise)."""
        q = np.asarray(p) - np.real(np.conj(np.exp(1j * np.asarray(theta))) * self.center)
        if self.kind == "gaussian":
            return math.sqrt(math.pi) * np.exp(-(q**2))
        if self.kind == "disk":
            return 2 * np.sqrt(np.maximum(self.radius**2 - q**2, 0.0))
        if self.kind == "zero":
            return np.zeros(np.shape(q))
        return None


def xray_forward(f, theta, p, support=1.0, n_nodes=128):
    """Integral of f over the lines (theta, p); theta and p broadcast together.

    Gauss-Legendre over the chord of the support disk |x| <= ``support``.
    """
    if isinstance(theta, Line):
        theta, p = theta.theta, theta.p
    theta, p = np.broadcast_arrays(np.asarray(theta, float), np.asarray(p, float))
    half = np.sqrt(np.maximum(support**2 - p**2, 0.0))
    x, w = gauss_legendre(n_nodes, -1.0, 1.0)
    omega = np.exp(1j * theta)[..., None]
    pts = omega * (p[..., None] + 1j * half[..., None] * x)
    vals = f(pts)
    return (vals @ w) * half


@dataclass(frozen=True)
class Sinogram:
    theta: np.ndarray  # uniform on [0, 2 pi)
    p: np.ndarray  # uniform on [-P, P]
    values: np.ndarray  # shape (len(theta), len(p))
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (np.size(self.theta), np.size(self.p)):
            raise ValueError("values must have shape (len(theta), len(p))")
        if not np.all(np.isfinite(vals)):
            raise ValueError("sinogram values must be finite")
        object.__setattr__(self, "theta", np.asarray(self.theta, dtype=float))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        object.__setattr__(self, "values", vals)

    @property
    def p_max(self):
        return float(self.p[-1])

    @property
    def dp(self):
        return float(self.p[1] - self.p[0])

    def sample(self, offsets):
        """Linear interpolation in offset; offsets has shape (len(theta), ...)."""
        offsets = np.asarray(offsets, dtype=float)
        if np.any(np.abs(offsets) > self.p_max * (1 + 1e-12)):
            raise ValueError("sinogram window too small")
        # uniform grid: index arithmetic instead of a per-row searchsorted
        u = (offsets - self.p[0]) / self.dp
        i = np.clip(np.floor(u).astype(int), 0, self.p.size - 2)
        frac = u - i
        rows = np.arange(self.theta.size).reshape((-1,) + (1,) * (offsets.ndim - 1))
        v0 = self.values[rows, i]
        v1 = self.values[rows, i + 1]
        return v0 + frac * (v1 - v0)


def sinogram(f, n_theta=180, p_max=6.0, dp=0.01, support=None, n_nodes=128) -> Sinogram:
    """Sample the X-ray transform of f; support defaults to p_max."""
    support = p_max if support is None else support
    theta = TWO_PI * np.arange(n_theta) / n_theta
    n = int(round(p_max / dp))
    p = dp * np.arange(-n, n + 1)
    vals = np.empty((n_theta, p.size))
    for j, t in enumerate(theta):
        vals[j] = xray_forward(f, t, p, support, n_nodes)
    meta = dict(n_theta=n_theta, p_max=p_max, dp=dp, support=support)
    return Sinogram(theta, p, vals, meta)


def mean_value(f, x, r, n=256):
    """Average of f over the circle of radius r about x (trapezoid rule)."""
    x = as_complex(x)
    if r < 0:
        raise ValueError("radius must be non-negative")
    if r == 0:
        return f(x)
    pts = x + r * np.exp(1j * TWO_PI * np.arange(n) / n)
    return np.mean(f(pts))


def dual_at_distance(sino: Sinogram, x, p):
    """Average of the sinogram over lines at distance p from x.

    ``p`` may be an array; lines (x, omega) + p over the full circle of
    omega cover both tangent lines of the circle S_p(x).
    """
    x = complex(as_complex(x))
    p = np.asarray(p, dtype=float)
    proj = np.real(np.conj(np.exp(1j * sino.theta)) * x)
    offsets = proj.reshape((-1,) + (1,) * p.ndim) + p
    return sino.sample(offsets).mean(axis=0)


def backproject(sino: Sinogram, points, chunk=32768):
    """Dual transform (p = 0) at an array of points."""
    pts = np.ravel(as_complex(points))
    conj_omega = np.conj(np.exp(1j * sino.theta))[:, None]
    out = np.empty(pts.size)
    for lo in range(0, pts.size, chunk):  # bounds memory at len(theta) * chunk
        proj = np.real(conj_omega * pts[None, lo : lo + chunk])
        out[lo : lo + chunk] = sino.sample(proj).mean(axis=0)
    return out.reshape(np.shape(as_complex(points)))


def _radial_integral(g, dp, weight):
    """-1/pi int_0^P weight(p) g'(p) dp with the even-function treatment at 0."""
    gp = np.empty_like(g)
    gp[1:-1] = (g[2:] - g[:-2]) / (2 * dp)
    gp[0] = 0.0
    gp[-1] = (g[-1] - g[-2]) / dp
    p = dp * np.arange(g.size)
    h = np.empty_like(g)
    h[1:] = weight(p[1:]) * gp[1:]
    # parabolic fit g ~ a + b p^2 on the first three nodes: g'(p)/p -> 2b
    A = np.stack([np.ones(3), p[:3] ** 2], axis=1)
    b2 = np.linalg.lstsq(A, g[:3], rcond=None)[0][1]
    h[0] = 2 * b2
    integral = dp * (h.sum() - 0.5 * (h[0] + h[-1]))
    return -integral / np.pi


def invert_d1(sino: Sinogram, x, p_max=None):
    """f(x) = -(1/pi) int_0^inf (1/p) d/dp (dual_p)(x) dp.

    Sampled on the sinogram's offset step up to ``p_max`` (default: as far
    as the window allows).
    """
    x = complex(as_complex(x))
    reach = sino.p_max - abs(x)
    p_max = reach if p_max is None else p_max
    if p_max > reach + 1e-12 or p_max <= 0:
        raise ValueError("sinogram window too small")
    n = int(np.floor(p_max / sino.dp + 1e-9))
    p = sino.dp * np.arange(n + 1)
    g = dual_at_distance(sino, x, p)
    return float(_radial_integral(g, sino.dp, lambda q: 1 / q))


@dataclass(frozen=True)
class ImageGrid:
    """n x n cell-centred grid on [-half_width, half_width]^2."""

    n: int = 256
    half_width: float = 4.0

    @property
    def spacing(self):
        return 2 * self.half_width / self.n

    @property
    def axis(self):
        return -self.half_width + self.spacing * (np.arange(self.n) + 0.5)

    @property
    def points(self):
        a = self.axis
        return a[None, :] + 1j * a[:, None]  # row index = y, column index = x


@dataclass(frozen=True)
class GridFunction:
    grid: ImageGrid
    values: np.ndarray
    support: float | None = None


def sinogram_moments(sino: Sinogram):
    """Total mass and centroid of f read off the sinogram's first two p-moments."""
    w = np.full(sino.p.size, sino.dp)
    w[[0, -1]] *= 0.5
    m0 = sino.values @ w
    m1 = sino.values @ (w * sino.p)
    mass = float(m0.mean())
    # (x, omega) m = m1(theta), so x = 2 mean(omega m1) / m
    centroid = complex(2 * np.mean(np.exp(1j * sino.theta) * m1) / mass) if mass else 0j
    return mass, centroid


def invert_fractional(sino: Sinogram, grid: ImageGrid, padding=2, d=1, n=2, tail_width=None) -> GridFunction:
    """f = c (-L)^(d/2) (backprojection), with |xi|^d applied by FFT.

    The backprojection is formed on a grid ``padding`` times wider than
    ``grid``, filtered periodically and cropped.  For d=1, n=2 its 1/|x|
    far field, which the periodic box cuts off, is removed first: the
    monopole m / (pi sqrt(|x - x0|^2 + a^2)) is subtracted and its exact
    image (m / 2 pi) a / (|x - x0|^2 + a^2)^(3/2) added back.  ``tail_width``
    is a (default a quarter of the grid's half-width); pass 0 to disable.
    """
    if padding <= 1:
        raise ValueError("invert_fractional needs padding > 1 (wraparound contamination)")
    npad = int(round(grid.n * padding))
    big = ImageGrid(npad, grid.spacing * npad / 2)
    if big.half_width * math.sqrt(2) > sino.p_max:
        raise ValueError("sinogram window too small for the padded grid")
    a = grid.half_width / 4 if tail_width is None else tail_width
    use_tail = a > 0 and (d, n) == (1, 2)
    b = backproject(sino, big.points)
    if use_tail:
        mass, x0 = sinogram_moments(sino)
        b = b - mass / (np.pi * np.sqrt(np.abs(big.points - x0) ** 2 + a**2))
    k = 2 * np.pi * np.fft.fftfreq(npad, d=big.spacing)
    mult = np.hypot(k[None, :], k[:, None]) ** d
    filt = np.real(np.fft.ifft2(np.fft.fft2(b) * mult))
    lo = (npad - grid.n) // 2
    out = fractional_constant(d, n) * filt[lo : lo + grid.n, lo : lo + grid.n]
    if use_tail:
        out = out + mass / (2 * np.pi) * a / (np.abs(grid.points - x0) ** 2 + a**2) ** 1.5
    return GridFunction(grid, out)


def invert_profile_even_d(profile_hat: RadialProfile, d=2, constant=None):
    """f(x) = C1 [(d/dr)^d dual_r(x)]_{r=0}, d even, from a profile on [0, P]."""
    if d not in C1_EVEN:
        raise ValueError(f"unsupported even d={d}")
    g = profile_hat.values
    h = profile_hat.step
    if profile_hat.grid[0] != 0 or not profile_hat.is_uniform():
        raise ValueError("profile must be sampled uniformly from r = 0")
    # even profile: d-th derivative at 0 through the mirrored stencil
    val = _second_derivative_at_zero(g, h)
    c = C1_EVEN[d] if constant is None else constant
    return float(c * val)


def invert_profile_odd_d(profile_hat: RadialProfile, d=1, constant=None, n_nodes=400):
    """f(x) = C2 [(d/d(r^2))^((d-1)/2) int_r^inf (p^2 - r^2)^(-1/2) dual_p'(x) dp]_{r=0}."""
    if d not in C2_ODD:
        raise ValueError(f"unsupported odd d={d}")
    grid, g = profile_hat.grid, profile_hat.values
    if grid[0] != 0 or not profile_hat.is_uniform():
        raise ValueError("profile must be sampled uniformly from r = 0")
    dg = derivative(g, grid[1] - grid[0], even=True)
    J = _j_minus_half(grid, dg, grid, grid[-1], True, n_nodes)
    for _ in range((d - 1) // 2):
        J = d_dr2(J, grid, even=True)
    c = C2_ODD[d] if constant is None else constant
    return float(c * J[0])


def radial_dual_profile(sino: Sinogram, x, p_max=None):
    """RadialProfile p -> dual_p(x) on the sinogram offset step."""
    x = complex(as_complex(x))
    reach = sino.p_max - abs(x)
    p_max = reach if p_max is None else min(p_max, reach)
    n = int(np.floor(p_max / sino.dp + 1e-9))
    p = sino.dp * np.arange(n + 1)
    return RadialProfile(p, dual_at_distance(sino, x, p))

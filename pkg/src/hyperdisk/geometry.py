"""Poincare disk model: points, Moebius maps, distances, horocycles, geodesics.

Points of the disk and of the plane are carried as Python/numpy complex
numbers throughout; the small value types below exist to validate input
at API boundaries.  All length-valued functions take a metric ``scale``:

* ``scale=1``: ds = |dz| / (1 - |z|^2), curvature -4 (Fourier/eigen code)
* ``scale=4``: ds = 2 |dz| / (1 - |z|^2), curvature -1 (hyperbolic X-ray code)

Lengths in the ``scale=4`` convention are exactly twice the ``scale=1`` ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SCALES = (1, 4)
TWO_PI = 2.0 * np.pi

# endpoints closer than this to antipodal are treated as a diameter
DIAMETER_TOL = 1e-9


def check_scale(scale):
    if scale not in SCALES:
        raise ValueError(f"metric scale must be 1 or 4, got {scale!r}")
    return scale


def length_factor(scale):
    """Multiplier turning scale=1 lengths into lengths of ``scale``."""
    return 1.0 if check_scale(scale) == 1 else 2.0


def as_complex(z):
    if isinstance(z, DiskPoint):
        return z.z
    if isinstance(z, BoundaryPoint):
        return z.b
    return np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)


@dataclass(frozen=True)
class DiskPoint:
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not abs(z) < 1.0:
            raise ValueError(f"point {z} is not inside the open unit disk")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class BoundaryPoint:
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

    @property
    def b(self) -> complex:
        return complex(np.exp(1j * self.theta))


@dataclass(frozen=True)
class MoebiusMap:
    """z -> (a z + b) / (conj(b) z + conj(a)) with |a|^2 - |b|^2 = 1.

    The pair is renormalized on construction so compositions do not drift
    off SU(1,1).
    """

    a: complex = 1.0
    b: complex = 0.0

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        det = abs(a) ** 2 - abs(b) ** 2
        if det <= 0:
            raise ValueError("MoebiusMap needs |a|^2 - |b|^2 > 0")
        s = math.sqrt(det)
        object.__setattr__(self, "a", a / s)
        object.__setattr__(self, "b", b / s)

    def __call__(self, z):
        z = as_complex(z)
        return (self.a * z + self.b) / (np.conj(self.b) * z + np.conj(self.a))

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        """Composition: (self @ other)(z) == self(other(z))."""
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return MoebiusMap(a1 * a2 + b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2))

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(np.conj(self.a), -self.b)

    @classmethod
    def rotation(cls, angle):
        return cls(np.exp(0.5j * angle), 0.0)

    @classmethod
    def random(cls, rng, max_shift=0.8):
        """Random element: rotation followed by a translation of the origin
        to a point of modulus <= ``max_shift``."""
        w = max_shift * math.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, TWO_PI))
        return translate_to_origin(w).inverse() @ cls.rotation(rng.uniform(0, TWO_PI))


def mobius_apply(g: MoebiusMap, z):
    return g(z)


def translate_to_origin(a) -> MoebiusMap:
    """The map z -> (z - a) / (1 - conj(a) z).

    This is the involution (a - z)/(1 - conj(a) z) followed by the
    rotation z -> -z, so that ``a = 0`` gives the identity.  Its inverse
    z -> (z + a)/(1 + conj(a) z) sends 0 to ``a``.
    """
    a = complex(as_complex(a))
    if not abs(a) < 1:
        raise ValueError(f"point {a} is not inside the open unit disk")
    return MoebiusMap(1.0, -a)


def pseudo_distance(z, w):
    """|z - w| / |1 - conj(w) z|, the Moebius invariant tanh of the distance."""
    z, w = as_complex(z), as_complex(w)
    return np.abs(z - w) / np.abs(1 - np.conj(w) * z)


def distance(z, w, scale=1):
    """Hyperbolic distance; d(0, r) = artanh(r) for scale=1.

    Evaluated as log(|1 - conj(w) z| + |z - w|) - 0.5 log((1-|z|^2)(1-|w|^2)),
    which avoids the cancellation in artanh for far-apart points.
    """
    z, w = as_complex(z), as_complex(w)
    num = np.abs(1 - np.conj(w) * z) + np.abs(z - w)
    rz, rw = np.abs(z), np.abs(w)
    den = (1 - rz) * (1 + rz) * (1 - rw) * (1 + rw)
    d = np.log(num) - 0.5 * np.log(den)
    return length_factor(scale) * np.maximum(d, 0.0)


def horocycle_bracket(z, b, scale=1):
    """Signed distance from 0 to the horocycle through z tangent at b.

    ``b`` is a unit complex number (or array of them) or a BoundaryPoint.
    For scale=1, exp(2 <z,b>) is the Poisson kernel (1-|z|^2)/|z-b|^2.
    """
    z, b = as_complex(z), as_complex(b)
    r = np.abs(z)
    val = 0.5 * (np.log((1 - r) * (1 + r)) - 2 * np.log(np.abs(z - b)))
    return length_factor(scale) * val


def _unit_speed_radius(t, scale):
    # Euclidean radius of the point at signed distance t along a diameter
    return np.tanh(np.asarray(t, dtype=float) / length_factor(scale))


def point_at_distance(r, scale=1):
    """Euclidean modulus of the point at hyperbolic distance r from 0."""
    return _unit_speed_radius(r, scale)


@dataclass(frozen=True)
class Geodesic:
    """Geodesic with ideal endpoints e^{i alpha}, e^{i beta}.

    Besides the endpoints it caches ``psi`` (direction of the point closest
    to 0), ``tau`` (Euclidean modulus of that point) and, unless it is a
    diameter, the carrier circle ``center``/``radius``.
    """

    alpha: float
    beta: float
    psi: float = field(init=False)
    tau: float = field(init=False)
    is_diameter: bool = field(init=False)
    center: complex | None = field(init=False)
    radius: float = field(init=False)

    def __post_init__(self):
        alpha, beta = float(self.alpha) % TWO_PI, float(self.beta) % TWO_PI
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        psi, half = endpoints_to_psi_half(alpha, beta)
        diameter = abs(half - np.pi / 2) < DIAMETER_TOL / 2
        object.__setattr__(self, "psi", float(psi))
        object.__setattr__(self, "is_diameter", bool(diameter))
        if diameter:
            object.__setattr__(self, "tau", 0.0)
            object.__setattr__(self, "center", None)
            object.__setattr__(self, "radius", math.inf)
        else:
            object.__setattr__(self, "tau", math.tan(np.pi / 4 - half / 2))
            object.__setattr__(self, "center", complex(np.exp(1j * psi) / math.cos(half)))
            object.__setattr__(self, "radius", math.tan(half))

    def distance_to_origin(self, scale=4):
        return float(length_factor(scale) * math.atanh(self.tau))

    @classmethod
    def from_psi_s(cls, psi, s, scale=4):
        """Geodesic whose closest point to 0 lies at distance s in direction psi."""
        half = float(psi_s_half_angle(s, scale))
        return cls(psi - half, psi + half)


def endpoints_to_psi_half(alpha, beta):
    """Closest-point direction and angular half-width (<= pi/2) of a geodesic."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    span = np.mod(beta - alpha, TWO_PI)
    if np.any(span == 0):
        raise ValueError("degenerate geodesic: coincident endpoints")
    half = span / 2
    mid = alpha + half
    flip = half > np.pi / 2
    psi = np.where(flip, mid + np.pi, mid)
    half = np.where(flip, np.pi - half, half)
    return np.mod(psi, TWO_PI), half


def half_angle_to_s(half, scale=4):
    """Distance from 0 of a geodesic whose endpoints subtend 2*half.

    Uses cosh(s) = 1/sin(half) in the curvature -1 normalization.
    """
    s4 = np.arcsinh(1.0 / np.tan(half))
    return s4 if check_scale(scale) == 4 else 0.5 * s4


def psi_s_half_angle(s, scale=4):
    s4 = np.asarray(s, dtype=float) * (2.0 / length_factor(scale))
    return np.arctan2(1.0, np.sinh(s4))


def geodesic_from_endpoints(alpha, beta) -> Geodesic:
    if isinstance(alpha, BoundaryPoint):
        alpha = alpha.theta
    if isinstance(beta, BoundaryPoint):
        beta = beta.theta
    return Geodesic(alpha, beta)


def geodesic_point(g: Geodesic, t, scale=1):
    """Unit-speed parameterization; t=0 is the point closest to 0.

    Built as the rotation by psi of the image of the imaginary diameter
    under the hyperbolic translation along the real axis that moves 0 to tau.
    """
    w = 1j * _unit_speed_radius(t, scale)
    return np.exp(1j * g.psi) * (w + g.tau) / (1 + g.tau * w)


def geodesic_points_psi_s(psi, s, t, scale=4):
    """Vectorized geodesic_point for the (psi, s) parameterization."""
    tau = np.tanh(np.asarray(s, dtype=float) / length_factor(scale))
    w = 1j * _unit_speed_radius(t, scale)
    return np.exp(1j * np.asarray(psi)) * (w + tau) / (1 + tau * w)


def mobius_geodesic_params(g: MoebiusMap, psi, s, scale=4):
    """(psi', s') of the image under ``g`` of the geodesics (psi, s)."""
    half = psi_s_half_angle(s, scale)
    e1 = g(np.exp(1j * (psi - half)))
    e2 = g(np.exp(1j * (psi + half)))
    psi2, half2 = endpoints_to_psi_half(np.angle(e1), np.angle(e2))
    return psi2, half_angle_to_s(half2, scale)

"""Quadrature rules on the disk (invariant measure), the boundary circle and segments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import length_factor


def gauss_legendre(n, a, b):
    """Nodes and weights of the n-point Gauss-Legendre rule on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1), half * w


@dataclass(frozen=True)
class DiskQuadrature:
    nodes: np.ndarray  # complex
    weights: np.ndarray
    n_r: int
    n_theta: int
    r_max: float
    scale: int = 1

    @property
    def area(self):
        return float(self.weights.sum())


def invariant_area(r_max, scale=1):
    """Invariant area of {|z| <= r_max}: pi r^2 / (1 - r^2) times the scale."""
    return scale * np.pi * r_max**2 / (1 - r_max**2)


def disk_quadrature(n_r=48, n_theta=96, r_max=0.5, scale=1) -> DiskQuadrature:
    """Polar product rule for the invariant measure scale * dx dy / (1 - |z|^2)^2.

    Radially Gauss-Legendre in u on [0, 1] with r = r_max u (2 - u), which
    packs nodes toward r_max where the density grows; angularly the
    trapezoid rule.
    """
    if not 0 < r_max < 1:
        raise ValueError("support must be compactly inside disk (need 0 < r_max < 1)")
    if n_r < 1 or n_theta < 1:
        raise ValueError("n_r and n_theta must be positive")
    length_factor(scale)
    u, wu = gauss_legendre(n_r, 0.0, 1.0)
    r = r_max * u * (2 - u)
    dr = r_max * 2 * (1 - u) * wu
    radial = scale * r * dr / (1 - r**2) ** 2
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.repeat(radial * (2 * np.pi / n_theta), n_theta)
    return DiskQuadrature(nodes, weights, n_r, n_theta, float(r_max), scale)


def disk_integrate(f, quad: DiskQuadrature):
    """Integral of f against the invariant measure.

    ``f`` is a callable on complex arrays or an array of values at the nodes.
    """
    vals = f(quad.nodes) if callable(f) else np.asarray(f)
    if vals.shape[0] != quad.nodes.shape[0]:
        raise ValueError("values do not match the quadrature nodes")
    return np.tensordot(quad.weights, vals, axes=(0, 0))


@dataclass(frozen=True)
class BoundaryQuadrature:
    n: int

    @property
    def theta(self):
        return 2 * np.pi * np.arange(self.n) / self.n

    @property
    def nodes(self):
        return np.exp(1j * self.theta)

    @property
    def weights(self):
        return np.full(self.n, 1.0 / self.n)


def boundary_quadrature(n=64) -> BoundaryQuadrature:
    if n < 1:
        raise ValueError("boundary quadrature needs at least one node")
    return BoundaryQuadrature(int(n))


def boundary_integrate(F, quad: BoundaryQuadrature):
    """Normalized boundary integral (1/N) sum F(b_j); F takes unit complex b."""
    vals = F(quad.nodes) if callable(F) else np.asarray(F)
    return vals.mean(axis=0)

"""Laplacians by finite differences and eigenfunctions built from boundary functionals."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import as_complex, check_scale, horocycle_bracket
from .quadrature import BoundaryQuadrature, boundary_quadrature


def _five_point(f, z, h, richardson=False):
    z = as_complex(z)
    lap = (f(z + h) + f(z - h) + f(z + 1j * h) + f(z - 1j * h) - 4 * f(z)) / h**2
    if richardson:
        # cancel the h^2 error term with a half-step stencil
        return (4 * _five_point(f, z, h / 2) - lap) / 3
    return lap


def euclidean_laplacian(f, x, h=1e-3, richardson=False):
    """Five-point Laplacian of f at x; points of R^2 are complex numbers."""
    if np.ndim(x) and np.shape(x)[-1:] == (2,) and not np.iscomplexobj(x):
        x = np.asarray(x)[..., 0] + 1j * np.asarray(x)[..., 1]
    return _five_point(f, x, h, richardson)


def hyperbolic_laplacian(f, z, h=1e-3, scale=1, richardson=False):
    """(1 - |z|^2)^2 / scale times the five-point Euclidean Laplacian.

    scale=1 is the curvature -4 operator; scale=4 the curvature -1 one.
    """
    check_scale(scale)
    z = as_complex(z)
    if np.any(1 - np.abs(z) <= 2 * h):
        raise ValueError("finite-difference stencil leaves the disk")
    return (1 - np.abs(z) ** 2) ** 2 / scale * _five_point(f, z, h, richardson)


def exponential(mu, b):
    """z -> exp(mu <z, b>) for a unit complex b."""
    return lambda z: np.exp(mu * horocycle_bracket(z, b))


def plane_wave(lam, omega):
    """x -> exp(i lam (x, omega)) with omega given as an angle."""
    w = np.exp(1j * omega)
    return lambda x: np.exp(1j * lam * np.real(np.conj(w) * as_complex(x)))


@dataclass(frozen=True)
class AnalyticFunctional:
    """Finite atoms plus a smooth density on the boundary circle.

    ``atoms`` holds (theta, weight) pairs; ``density`` maps unit complex b to
    complex values and is integrated against the normalized measure db.
    """

    atoms: Sequence[tuple[float, complex]] = field(default_factory=tuple)
    density: Callable | None = None


def eigenfunction_from_functional(T: AnalyticFunctional, mu, z, bquad: BoundaryQuadrature | None = None):
    """u(z) = int_B exp(mu <z, b>) dT(b)."""
    z = as_complex(z)
    out = np.zeros(np.shape(z), dtype=complex)
    for theta, w in T.atoms:
        out = out + w * np.exp(mu * horocycle_bracket(z, np.exp(1j * theta)))
    if T.density is not None:
        bquad = bquad or boundary_quadrature(128)
        b = bquad.nodes
        brk = horocycle_bracket(np.asarray(z)[..., None], b)
        out = out + np.mean(np.exp(mu * brk) * T.density(b), axis=-1)
    return out if np.ndim(out) else complex(out)


def scan_lattice(region, n=9):
    """Square lattice of points (spacing 2*region/(n-1)) clipped to |z| <= region."""
    s = np.linspace(-region, region, n)
    z = (s[None, :] + 1j * s[:, None]).ravel()
    return z[np.abs(z) <= region * (1 + 1e-12)]


def eigen_residual_scan(u, eigenvalue, region=0.6, h=1e-3, floor=1e-12, n=9, scale=1, points=None, richardson=False):
    """Residuals |L u + eigenvalue * u| / max(|u|, floor) over a lattice.

    Returns (points, residuals); the max of the residuals is the scan verdict.
    """
    if region + 2 * h >= 1:
        raise ValueError("scan region plus stencil must stay inside the disk")
    z = scan_lattice(region, n) if points is None else as_complex(points)
    uz = u(z)
    res = np.abs(hyperbolic_laplacian(u, z, h, scale, richardson) + eigenvalue * uz)
    return z, res / np.maximum(np.abs(uz), floor)


def max_residual(u, eigenvalue, region=0.6, h=1e-3, **kw):
    return float(np.max(eigen_residual_scan(u, eigenvalue, region, h, **kw)[1]))


def euclidean_residual_scan(u, eigenvalue, region=1.0, h=1e-3, floor=1e-12, n=9, points=None, richardson=False):
    """As eigen_residual_scan but with the flat Laplacian on a square of half-side ``region``."""
    z = scan_lattice(region, n) if points is None else as_complex(points)
    uz = u(z)
    res = np.abs(euclidean_laplacian(u, z, h, richardson) + eigenvalue * uz)
    return z, res / np.maximum(np.abs(uz), floor)

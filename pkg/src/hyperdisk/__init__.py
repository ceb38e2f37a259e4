"""Harmonic analysis and X-ray transforms on the Poincare disk."""

from .geometry import (
    BoundaryPoint,
    DiskPoint,
    Geodesic,
    MoebiusMap,
    distance,
    horocycle_bracket,
    mobius_apply,
    translate_to_origin,
)
from .quadrature import boundary_integrate, boundary_quadrature, disk_integrate, disk_quadrature
from .abel import RadialProfile, abel_forward, abel_hyp_forward, abel_hyp_inverse, abel_inverse
from .fourier import SpectralData, TestFunction, fourier_inverse, spectral_data, spherical_function
from .radon_euclid import EuclidPhantom, ImageGrid, Sinogram, invert_d1, invert_fractional, sinogram
from .radon_hyp import HypPhantom, HypSinogram, bc_invert, hyp_invert_d1, hyp_sinogram

__version__ = "0.1.0"

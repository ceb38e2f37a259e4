import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from hyperdisk.geometry import horocycle_bracket
from hyperdisk.quadrature import (
    boundary_integrate,
    boundary_quadrature,
    disk_integrate,
    disk_quadrature,
    invariant_area,
)


@pytest.mark.parametrize("scale", [1, 4])
def test_area_of_disk(scale):
    q = disk_quadrature(r_max=0.5, scale=scale)
    assert disk_integrate(lambda z: np.ones(z.shape), q) == pytest.approx(scale * np.pi / 3, rel=1e-10)
    assert q.area == pytest.approx(invariant_area(0.5, scale), rel=1e-10)


def test_zero_and_odd():
    q = disk_quadrature()
    assert disk_integrate(lambda z: np.zeros(z.shape), q) == 0
    assert abs(disk_integrate(lambda z: z.real ** 3 + z.imag, q)) < 1e-12


@pytest.mark.parametrize("r_max", [0.0, 1.0, 1.2, -0.1])
def test_support_check(r_max):
    with pytest.raises(ValueError, match="compactly inside disk"):
        disk_quadrature(r_max=r_max)


@given(st.integers(1, 64), st.integers(1, 64), st.floats(0.05, 0.95))
def test_weights_positive(n_r, n_t, r_max):
    q = disk_quadrature(n_r, n_t, r_max)
    assert np.all(q.weights > 0)
    assert np.all(np.abs(q.nodes) <= r_max)


def test_radial_integrand_against_quad():
    f = lambda r: np.exp(-3 * r * r) * np.cos(r)
    ref = 2 * np.pi * quad(lambda r: f(r) * r / (1 - r * r) ** 2, 0, 0.8, epsabs=1e-14)[0]
    q = disk_quadrature(48, 8, 0.8)
    assert disk_integrate(lambda z: f(np.abs(z)), q) == pytest.approx(ref, rel=1e-11)


def test_spectral_convergence():
    f = lambda z: np.exp(np.real(z) * 2 + np.imag(z))
    ref = disk_integrate(f, disk_quadrature(96, 192, 0.7))
    errs = [abs(disk_integrate(f, disk_quadrature(n, 2 * n, 0.7)) - ref) for n in (4, 8, 16)]
    assert errs[1] < errs[0] / 10
    assert errs[2] < max(errs[1] / 10, 1e-13)


def test_boundary_basics():
    q = boundary_quadrature(32)
    assert q.weights.sum() == pytest.approx(1)
    assert boundary_integrate(lambda b: np.ones(b.shape), q) == pytest.approx(1)


@pytest.mark.parametrize("k", [1, -3, 7, 31])
def test_boundary_exact_for_modes(k):
    q = boundary_quadrature(64)
    assert abs(boundary_integrate(lambda b: b**k, q)) < 1e-14


def test_poisson_integral_of_one():
    q = boundary_quadrature(64)
    val = boundary_integrate(lambda b: np.exp(2 * horocycle_bracket(0.4, b)), q)
    dense = boundary_integrate(lambda b: np.exp(2 * horocycle_bracket(0.4, b)), boundary_quadrature(4096))
    assert val == pytest.approx(1, abs=1e-10)
    assert dense == pytest.approx(1, abs=1e-12)


def test_boundary_needs_nodes():
    with pytest.raises(ValueError):
        boundary_quadrature(0)

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperdisk.eigen import (
    AnalyticFunctional,
    eigen_residual_scan,
    eigenfunction_from_functional,
    euclidean_laplacian,
    euclidean_residual_scan,
    exponential,
    hyperbolic_laplacian,
    max_residual,
    plane_wave,
)
from hyperdisk.fourier import spherical_function

B = np.exp(0.4j)


def test_laplacian_of_constant():
    one = lambda z: np.ones(np.shape(z))
    assert abs(hyperbolic_laplacian(one, 0.2 + 0.3j)) < 1e-9
    assert abs(euclidean_laplacian(one, 0.7)) < 1e-9


def test_euclidean_quadratic_exact():
    assert euclidean_laplacian(lambda x: np.real(x) ** 2, 0.3 - 0.2j) == pytest.approx(2, abs=1e-6)


def test_array_points():
    pts = np.array([[0.1, 0.2], [0.3, -0.1]])
    out = euclidean_laplacian(lambda x: np.real(x) ** 2 + np.imag(x) ** 2, pts)
    assert np.allclose(out, 4, atol=1e-6)


def test_stencil_guard():
    with pytest.raises(ValueError, match="leaves the disk"):
        hyperbolic_laplacian(lambda z: z, 0.9995)


def test_poisson_kernel_harmonic():
    u = exponential(2.0, 1.0)
    z = 0.2 + 0.3j
    assert abs(hyperbolic_laplacian(u, z)) / abs(u(z)) < 1e-5


@pytest.mark.parametrize("lam", [0.0, 1.3, 4.0])
def test_exponential_eigenvalue(lam):
    u = exponential(1j * lam + 1, B)
    z = 0.1 - 0.25j
    res = abs(hyperbolic_laplacian(u, z) + (lam**2 + 1) * u(z)) / abs(u(z))
    assert res < 1e-4


def test_plane_wave():
    u = plane_wave(2.0, 0.0)
    x = 0.3 + 0.4j
    assert abs(euclidean_laplacian(u, x) + 4 * u(x)) / abs(u(x)) < 1e-5


@given(st.floats(-3, 3))
def test_lambda_sign_symmetry(lam):
    for mu in (1j * lam + 1, -1j * lam + 1):
        assert max_residual(exponential(mu, B), lam**2 + 1, region=0.5) < 1e-4


def test_single_atom_is_exponential():
    T = AnalyticFunctional(atoms=((0.4, 1.0),))
    z = np.array([0.1, 0.3j])
    assert np.allclose(eigenfunction_from_functional(T, 1.5j + 1, z), exponential(1.5j + 1, B)(z))


def test_uniform_density_is_spherical():
    T = AnalyticFunctional(density=lambda b: np.ones(b.shape))
    z = 0.35 - 0.2j
    assert eigenfunction_from_functional(T, 0.8j + 1, z) == pytest.approx(spherical_function(0.8, z, None), abs=1e-6)


def test_two_atoms():
    lam = 0.9
    T = AnalyticFunctional(atoms=((0.4, 1.0), (2.5, 0.5 - 0.3j)))
    u = lambda z: eigenfunction_from_functional(T, 1j * lam + 1, z)
    assert max_residual(u, lam**2 + 1, region=0.6) < 1e-4


def test_atoms_plus_density():
    lam = 0.9
    T = AnalyticFunctional(atoms=((1.0, 2.0),), density=lambda b: 1 + b.real)
    u = lambda z: eigenfunction_from_functional(T, 1j * lam + 1, z)
    assert max_residual(u, lam**2 + 1, region=0.5) < 1e-4


def test_spherical_scan():
    u = lambda z: spherical_function(1.0, z)
    assert max_residual(u, 2.0, region=0.6) < 1e-4


def test_zero_function_scan():
    z, res = eigen_residual_scan(lambda z: np.zeros(np.shape(z)), 2.0)
    assert np.all(res == 0)


def test_constant_negative_control():
    assert max_residual(lambda z: np.ones(np.shape(z)), 1.0) == pytest.approx(1, abs=1e-6)


def test_region_guard():
    with pytest.raises(ValueError):
        eigen_residual_scan(exponential(2.0, B), 0.0, region=0.999)


def test_second_order_convergence():
    u = exponential(1.3j + 1, B)
    z = np.array([0.3 + 0.2j])
    res = [eigen_residual_scan(u, 1.3**2 + 1, points=z, h=h)[1][0] for h in (4e-3, 2e-3, 1e-3)]
    assert 3.5 < res[0] / res[1] < 4.5
    assert 3.5 < res[1] / res[2] < 4.5


def test_richardson_improves():
    u = exponential(2.0, B)
    plain = max_residual(u, 0.0, region=0.6)
    assert max_residual(u, 0.0, region=0.6, richardson=True) < plain / 100


def test_linearity():
    lam = 1.1
    u1, u2 = exponential(1j * lam + 1, B), exponential(1j * lam + 1, np.exp(2j))
    r1, r2 = max_residual(u1, lam**2 + 1), max_residual(u2, lam**2 + 1)
    rs = max_residual(lambda z: u1(z) + 0.5 * u2(z), lam**2 + 1)
    assert rs < max(r1, r2) * 1.5 + 1e-10


def test_euclidean_scan():
    z, res = euclidean_residual_scan(plane_wave(2.0, 0.5), 4.0)
    assert res.max() < 1e-5

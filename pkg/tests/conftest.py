import numpy as np
import pytest
from hypothesis import settings

from hyperdisk import radon_euclid as re_
from hyperdisk import radon_hyp as rh

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def gaussian_sinogram():
    f = re_.EuclidPhantom("gaussian")
    return f, re_.sinogram(f, 180, 12.0, 0.01, support=f.support)


@pytest.fixture(scope="session")
def bump_hyp():
    f = rh.HypPhantom("radial-bump", 1.5)
    return f, rh.hyp_sinogram(f, 180, 0.01)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20241)

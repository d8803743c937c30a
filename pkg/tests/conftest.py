import numpy as np
import pytest

from platelab.model import (Dipole, Gaussian, LapGaussian, Problem,
                            TensorDipole, ZERO, build_data)


def gauss(n, a=0.5, coeff=1.0):
    return build_data([(coeff, Gaussian(a))], n)


def dipole(n, a=0.5, axis=1, coeff=1.0):
    return build_data([(coeff, Dipole(a, axis))], n)


def problem(n, u0, u1, sigma=2.0):
    return Problem(n=n, sigma=sigma, data0=u0, data1=u1)


@pytest.fixture
def gauss1():
    """u0 = 0, u1 = exp(-|x|^2/2) in one dimension."""
    return problem(1, ZERO, gauss(1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_combo(rng, n, max_terms=3):
    prims = [Gaussian(float(rng.uniform(0.3, 1.5)))]
    prims.append(Dipole(float(rng.uniform(0.3, 1.5)), int(rng.integers(1, n + 1))))
    prims.append(LapGaussian(float(rng.uniform(0.3, 1.5))))
    if n == 2:
        prims.append(TensorDipole(float(rng.uniform(0.3, 1.5))))
    count = int(rng.integers(1, max_terms + 1))
    picks = rng.choice(len(prims), size=count, replace=False)
    terms = [(float(rng.uniform(-2.0, 2.0)), prims[i]) for i in picks]
    return build_data(terms, n)

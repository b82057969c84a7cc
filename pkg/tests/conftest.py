import numpy as np
import pytest

from coupled_fv.models import IdealGasEuler, IsothermalEuler


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def iso():
    return IsothermalEuler(c=1.0)


@pytest.fixture
def gas():
    return IdealGasEuler(gamma=1.5, rho0=1.0)


def random_subsonic_iso(rng, n, c=1.0, rho_range=(0.2, 5.0), mach_max=0.9):
    """Random isothermal states with |u| < mach_max * c."""
    rho = rng.uniform(*rho_range, size=n)
    u = rng.uniform(-mach_max, mach_max, size=n) * c
    return np.stack([rho, rho * u], axis=-1)


def random_subsonic_gas(rng, n, gamma=1.5, rho_range=(0.5, 4.0)):
    rho = rng.uniform(*rho_range, size=n)
    p = rng.uniform(0.5, 4.0, size=n)
    c = np.sqrt(gamma * p / rho)
    u = rng.uniform(-0.9, 0.9, size=n) * c
    E = p / (gamma - 1.0) + 0.5 * rho * u * u
    return np.stack([rho, rho * u, E], axis=-1)

import numpy as np
import pytest

from spinkerr import build_space, paper_derived


@pytest.fixture(scope="session")
def space4():
    return build_space(4, 4)


@pytest.fixture(scope="session")
def d_static():
    """Reference rates, resonator at rest, resonant drive."""
    return paper_derived()


@pytest.fixture(scope="session")
def d_spinning():
    """Reference rates at the fastest preset spin and the first blockade
    detuning."""
    return paper_derived(omega=30e3, delta0=-2.3e6)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)

import random

import pytest

from app.services.surface_words import UndirectedClass
from app.utils.config_loader import load_holonomy, load_surface


@pytest.fixture(scope="session")
def pants():
    return load_surface("pants")


@pytest.fixture(scope="session")
def torus():
    return load_surface("torus1")


@pytest.fixture(scope="session")
def sphere4():
    return load_surface("sphere4")


@pytest.fixture(scope="session")
def genus2():
    return load_surface("genus2")


@pytest.fixture(scope="session")
def pants_rho(pants):
    return load_holonomy(pants)


@pytest.fixture(scope="session")
def torus_rho(torus):
    return load_holonomy(torus)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def u():
    """u(surface, 'aab') -> UndirectedClass."""
    return lambda s, w: UndirectedClass.parse(w, s.n)

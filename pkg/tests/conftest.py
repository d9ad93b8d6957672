import numpy as np
import pytest

from app.core.config import get_settings
from app.services.counterexample_service import CounterexampleService
from app.utils.sampling import random_complex, random_contraction, random_hermitian_pd


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow golden and full-size tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running golden or full-size runs (enable with --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached; tests that monkeypatch the environment get a fresh copy."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def contraction_factory(rng):
    def make(n: int = 2, real: bool = False):
        return random_contraction(rng, n, real=real)

    return make


@pytest.fixture
def hermitian_pd_factory(rng):
    def make(n: int = 2, real: bool = False):
        return random_hermitian_pd(rng, n, real=real)

    return make


@pytest.fixture
def complex_factory(rng):
    def make(n: int = 2, real: bool = False):
        return random_complex(rng, n, real=real)

    return make


@pytest.fixture(scope="session")
def published_contractions():
    return CounterexampleService.published_contractions()

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def pytest_configure(config):
    np.seterr(divide="raise", invalid="raise", over="raise")

"""Shared fixtures: canonical nets, a seeded generator and a clean tolerance table."""

import numpy as np
import pytest

from cone_lab.core.cone_net import build_plane, build_T, build_Y
from cone_lab.utils.tolerances import reset_tolerances


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the full-size batteries")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size battery, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="full-size battery, use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(autouse=True)
def clean_tolerances():
    reset_tolerances()
    yield
    reset_tolerances()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def plane_net():
    return build_plane(3)


@pytest.fixture
def y_net():
    return build_Y(3)


@pytest.fixture
def t_net():
    return build_T(3)

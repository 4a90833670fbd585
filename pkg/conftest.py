import pytest

from points import GroupPoint
from topology import Universe


@pytest.fixture(scope='session')
def small_universe():
    """L=2, len=4: 161 reduced words"""
    return Universe(2, 4)


@pytest.fixture(scope='session')
def universe():
    """L=3, len=4: 937 reduced words"""
    return Universe(3, 4)


@pytest.fixture
def pt():
    return lambda text, depth=8: GroupPoint.of(text, probe_depth=depth)

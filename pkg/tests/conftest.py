"""
Fixtures compartidas de la suite
"""
import numpy as np
import pytest

from core.events import event_manager
from models.corpus import embedded_thm_a, get_phase, rotated_thm_a


@pytest.fixture
def s0():
    return get_phase("s0")


@pytest.fixture
def direct_sum():
    return get_phase("direct_sum")


@pytest.fixture
def cubic11():
    """x²z + xz² en (1+1)"""
    return get_phase("thm_a_cubic")


@pytest.fixture
def bilinear():
    return get_phase("bilinear")


@pytest.fixture
def embedded():
    return embedded_thm_a()


@pytest.fixture
def rotated():
    return rotated_thm_a()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def clean_events():
    yield
    event_manager.clear_handlers()

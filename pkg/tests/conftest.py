import pytest

from gueedge.operators import airy_ops, painleve2


@pytest.fixture(scope="session")
def hm_grid():
    """The shared Hastings-McLeod solve on [-12, 8]."""
    return painleve2.default_grid()


@pytest.fixture(scope="session")
def functionals_at():
    """Cached Airy functionals at the default discretization."""
    return airy_ops.functionals


@pytest.fixture
def output_path(tmp_path):
    return tmp_path / "out.csv"

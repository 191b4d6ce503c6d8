import pytest

from nls_ist.data import spectral_grid
from nls_ist.fields import FieldGrid


@pytest.fixture(scope="session")
def tanh_field():
    return FieldGrid.tanh(L=30.0, n=4096)


@pytest.fixture(scope="session")
def z_grid():
    return spectral_grid()

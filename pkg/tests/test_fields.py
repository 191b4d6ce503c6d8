import numpy as np
import pytest

from nls_ist.fields import FieldGrid, TailError


def test_tanh_grid(tanh_field):
    assert tanh_field.n == 4096
    assert np.isclose(tanh_field.dx, 60.0 / 4095)
    assert tanh_field.finite_density_pm1
    assert abs(tanh_field(0.3) - np.tanh(0.3)) < 1e-7


def test_tail_check():
    x = np.linspace(-5, 5, 101)
    with pytest.raises(TailError):
        FieldGrid(-5, 5, np.tanh(x))
    FieldGrid(-5, 5, np.tanh(x), tail_tol=1e-3)


def test_boundary_values_unimodular():
    x = np.linspace(-30, 30, 200)
    with pytest.raises(ValueError):
        FieldGrid(-30, 30, np.tanh(x), left_bv=-0.5)
    q = FieldGrid(-30, 30, np.tanh(x) * 0 + 1j, left_bv=1j, right_bv=1j)
    assert not q.finite_density_pm1


def test_with_values_keeps_grid(tanh_field):
    g = tanh_field.with_values(tanh_field.values * 1.0)
    assert g.n == tanh_field.n and g.x_min == tanh_field.x_min


def test_bad_shapes():
    with pytest.raises(ValueError):
        FieldGrid(0, 1, np.ones(1))
    with pytest.raises(ValueError):
        FieldGrid(1, 0, np.ones(4))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nls_ist.data import spectral_grid
from nls_ist.quadrature import half_line_integral, log_defect, positive_half_integral


def test_log_defect():
    r = np.array([0.0, 0.5, 1e-9])
    np.testing.assert_allclose(log_defect(r), [0.0, np.log(0.75), -1e-18], rtol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 0.6), st.floats(0.3, 3.0))
def test_lorentzian_defect(A, w):
    # |r|^2 = A s^2/(s^2 + w^2)^... decays like 1/s^2 at infinity and at 0 like s^2
    s = spectral_grid()
    s = s[s > 0]
    r2 = A * s ** 2 / (1 + s ** 2) ** 2
    f = np.log1p(-r2)
    got = positive_half_integral(s, f, K=np.sqrt(A))
    fine = np.geomspace(1e-8, 1e8, 400001)
    ref = np.trapezoid(np.log1p(-A * fine ** 2 / (1 + fine ** 2) ** 2), fine)
    assert abs(got - ref) < 2e-3 * abs(ref)


def test_sides_agree_for_even_data():
    s = spectral_grid()
    f = np.log1p(-0.25 / (1 + s ** 2))
    assert np.isclose(half_line_integral(s, f, side="positive"),
                      half_line_integral(s, f, side="negative"), rtol=1e-12)


def test_tail_constant_too_large():
    s = spectral_grid()
    s = s[s > 0]
    with pytest.raises(ValueError):
        positive_half_integral(s, np.zeros_like(s), K=100.0)

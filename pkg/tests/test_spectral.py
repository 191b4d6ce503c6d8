import numpy as np
import pytest
from hypothesis import given, strategies as st

from nls_ist.spectral import (SIGMA1, SpectralDomainError, circle_inversion, conjugate_reflect,
                              det2, inv2, lam, mul2, normalization_matrix, t_theta, theta, zeta)

finite = st.floats(-50, 50, allow_nan=False)
nonzero = st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False,
                             allow_infinity=False)


@given(nonzero)
def test_uniformization_identity(z):
    assert abs(lam(z) ** 2 - zeta(z) ** 2 - 1) <= 1e-12 * max(1.0, abs(z) ** 2, abs(z) ** -2)


@given(nonzero)
def test_symmetry_maps(z):
    assert abs(circle_inversion(circle_inversion(z)) - z) <= 1e-12 * abs(z)
    assert conjugate_reflect(z) == np.conj(z)


@given(st.floats(0, 2 * np.pi))
def test_inversion_is_conjugation_on_circle(a):
    u = np.exp(1j * a)
    assert abs(circle_inversion(u) - conjugate_reflect(u)) < 1e-15


@given(st.floats(0.05, 20) | st.floats(-20, -0.05), finite, st.floats(0, 10))
def test_theta_real_on_real_axis(z, x, t):
    assert abs(np.imag(t_theta(z, x, t))) < 1e-12


def test_theta_needs_positive_time():
    with pytest.raises(SpectralDomainError):
        theta(1j, 0.0, 0.0)
    assert np.isclose(theta(2.0, 3.0, 1.5), t_theta(2.0, 3.0, 1.5) / 1.5)


def test_zero_rejected():
    with pytest.raises(SpectralDomainError):
        lam(0.0)
    with pytest.raises(SpectralDomainError):
        zeta(np.array([1.0, 0.0]))


def test_broadcasting():
    z = np.array([[1.0, 2.0j], [-3.0, 0.5 + 0.5j]])
    assert lam(z).shape == (2, 2)
    assert np.ndim(lam(2.0)) == 0


def test_normalization_matrix_det():
    z = np.array([0.3, -2.0, 1j])
    for v in (1.0, -1.0):
        B = normalization_matrix(z, v)
        np.testing.assert_allclose(det2(B), 1 - z ** -2, atol=1e-14)


def test_2x2_algebra():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(5, 2, 2)) + 1j * rng.normal(size=(5, 2, 2))
    np.testing.assert_allclose(mul2(m, inv2(m)), np.broadcast_to(np.eye(2), m.shape), atol=1e-12)
    np.testing.assert_allclose(det2(SIGMA1), -1)

import numpy as np
import pytest

from nls_ist.direct import (DiscreteSpectrum, find_discrete_spectrum, norming_constants,
                            scattering_coefficients, scattering_coefficients_batch, solve_jost)
from nls_ist.families import parse_family
from nls_ist.rhp import nsoliton_grid


def test_tanh_closed_form(tanh_field):
    z = np.array([-2.0, -0.5, 0.4, 1.5, 3.0])
    a, b, r, _ = scattering_coefficients_batch(tanh_field, z)
    np.testing.assert_allclose(a, (z - 1j) / (z + 1j), atol=1e-6)
    assert np.abs(r).max() < 1e-5


def test_unitarity_and_symmetry(z_grid):
    q = parse_family("tanh_plus_bump 0.2 1 3").field(30.0, 4096)
    a, b, r, _ = scattering_coefficients_batch(q, z_grid)
    defect = np.abs(np.abs(a) ** 2 - np.abs(b) ** 2 - 1) / np.maximum(1, np.abs(a) ** 2)
    assert defect.max() < 1e-6
    # the grid is closed under z -> 1/z
    j = np.abs(z_grid[None, :] - 1 / z_grid[:, None]).argmin(axis=1)
    assert np.abs(r[j] - np.conj(r)).max() < 1e-6
    assert np.abs(r).max() < 1


@pytest.mark.parametrize("z", [-3.0, -0.5, 0.3, 2.0, 7.5])
def test_det_identity(tanh_field, z):
    assert solve_jost(tanh_field, z).det_residual() < 1e-8


def test_det_relative_residual_scales():
    q = parse_family("dip_family 2").field(50.0, 8192)
    pair = solve_jost(q, -0.5)
    # large Jost entries: the absolute residual is rounding of a cancelling difference
    assert pair.det_residual(relative=True) < 1e-12


def test_single_coefficients_match_batch(tanh_field):
    sc = scattering_coefficients(tanh_field, 1.5)
    a, _, _, _ = scattering_coefficients_batch(tanh_field, np.array([1.5]))
    assert abs(sc.a - a[0]) < 1e-12


def test_tanh_spectrum(tanh_field):
    spec = norming_constants(tanh_field, find_discrete_spectrum(tanh_field))
    assert len(spec) == 1
    ev = spec.eigenvalues[0]
    assert abs(ev.z - 1j) < 1e-6
    assert abs(abs(ev.c) - 2) < 1e-3
    assert abs(ev.center) < 1e-6


def test_shift_moves_center():
    q = parse_family("tanh_shift 3").field(30.0, 4096)
    ev = norming_constants(q, find_discrete_spectrum(q)).eigenvalues[0]
    assert abs(ev.center - 3) < 2 * q.dx


def test_two_soliton_round_trip():
    ref = DiscreteSpectrum.from_arrays(np.exp(1j * np.pi * np.array([1 / 3, 2 / 3])),
                                       1j * np.exp(1j * np.pi * np.array([1 / 3, 2 / 3])))
    q = nsoliton_grid(ref, np.linspace(-30, 30, 4096))
    spec = norming_constants(q, find_discrete_spectrum(q))
    assert len(spec) == 2
    np.testing.assert_allclose(spec.z, ref.z, atol=1e-6)
    np.testing.assert_allclose(np.abs(spec.c), np.abs(ref.c), rtol=1e-3)


def test_spectrum_validation():
    with pytest.raises(ValueError):
        DiscreteSpectrum.from_arrays([2j], [1.0])
    with pytest.raises(ValueError):
        DiscreteSpectrum.from_arrays([1j, 1j], [1.0, 1.0])


def test_solitonless_member_has_empty_spectrum():
    q = parse_family("dip_family 1.5").field(50.0, 8192)
    spec = find_discrete_spectrum(q)
    assert len(spec) == 0 and spec.min_abs_a > 0.05

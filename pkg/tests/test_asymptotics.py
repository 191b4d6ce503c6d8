import numpy as np
import pytest

from nls_ist.asymptotics import (AsymptoticProfile, XiPartition, left_partial_mass_asymptotic,
                                 right_partial_mass_asymptotic, sol, soliton_center, total_mass)
from nls_ist.data import ReflectionSamples, ScatteringData, evolve_scattering, spectral_grid
from nls_ist.direct import DiscreteSpectrum
from nls_ist.rhp import soliton_profile


def test_sol_modulus():
    z = np.exp(0.7j)
    x = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(np.abs(sol(x, 0.3, z)) ** 2,
                               1 - z.imag ** 2 / np.cosh(z.imag * (x - 0.6 * z.real)) ** 2,
                               atol=1e-12)
    with pytest.raises(ValueError):
        sol(0.0, 0.0, 2j)


def test_partition():
    z = np.exp(1j * np.pi * np.array([0.2, 0.5, 0.8]))
    p = XiPartition.of(z, 0.1)
    assert p.D_plus == (0,) and p.D_minus == (1, 2)


def test_tanh_data():
    S = ScatteringData(ReflectionSamples.zero(), DiscreteSpectrum.from_arrays([1j], [-2.0]))
    assert total_mass(S) == -2.0
    assert soliton_center(0, S, 0.0) == pytest.approx(0.0, abs=1e-12)
    prof = AsymptoticProfile.evaluate(0.5, 10.0, S)
    assert prof.total == pytest.approx(-2.0, abs=1e-10)


def test_reflectionless_asymptotics_exact():
    z = np.exp(1j * np.pi * np.array([1 / 3, 2 / 3]))
    spec = DiscreteSpectrum.from_arrays(z, 1j * z)
    S = evolve_scattering(ScatteringData(ReflectionSamples.zero(), spec), 50.0)
    for x in (40.0, 50.0, 60.0, -50.0):
        _, mass = soliton_profile(spec, np.array([x]), 50.0)
        assert right_partial_mass_asymptotic(x, 50.0, S) == pytest.approx(mass[0], abs=1e-6)


def test_left_plus_right_is_total():
    g = spectral_grid()
    r = 0.3 * np.exp(-(np.abs(g) - 1) ** 2) * np.sign(g)
    w = np.exp(1j * np.pi / 4)
    S = ScatteringData(ReflectionSamples(g, r), DiscreteSpectrum.from_arrays([w], [1j * w]))
    for x in (-3.0, 0.0, 4.0):
        tot = right_partial_mass_asymptotic(x, 7.0, S) + left_partial_mass_asymptotic(x, 7.0, S)
        assert tot == pytest.approx(total_mass(S), abs=1e-10)

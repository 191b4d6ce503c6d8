import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nls_ist.data import (ReflectionSamples, ScatteringData, ScatteringDataError, data_distance,
                          estimate_norms, evolve_scattering, scattering_data_from_field,
                          spectral_grid)
from nls_ist.direct import DiscreteSpectrum
from nls_ist.families import parse_family


def _random_data(seed, amp=0.5):
    z = spectral_grid()
    rng = np.random.default_rng(seed)
    r = amp * np.exp(-z ** 2) * np.exp(1j * rng.uniform(0, 2 * np.pi, z.size))
    w = np.exp(1j * np.pi / 3)
    return ScatteringData(ReflectionSamples(z, r), DiscreteSpectrum.from_arrays([w], [1j * w]))


def test_grid_shape(z_grid):
    assert z_grid.size == 200
    np.testing.assert_allclose(np.sort(1 / z_grid), z_grid, rtol=1e-13)
    np.testing.assert_allclose(-z_grid[::-1], z_grid)


def test_validation():
    z = spectral_grid()
    with pytest.raises(ScatteringDataError):
        ReflectionSamples(z, np.full(z.size, 1.2))
    with pytest.raises(ScatteringDataError):
        ReflectionSamples(z[::-1], np.zeros(z.size))
    with pytest.raises(ScatteringDataError):
        ReflectionSamples(np.linspace(0.01, 5, 50), np.zeros(50))
    with pytest.raises(ScatteringDataError):
        ScatteringData(ReflectionSamples.zero(), DiscreteSpectrum.from_arrays([1j], [-1.0]), "S2")


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1000), st.floats(0, 3), st.floats(0, 3))
def test_evolution_semigroup(seed, t1, t2):
    S = _random_data(seed)
    a = evolve_scattering(evolve_scattering(S, t1), t2)
    b = evolve_scattering(S, t1 + t2)
    np.testing.assert_allclose(a.reflection.r_values, b.reflection.r_values, atol=1e-12)
    assert abs(a.discrete.log_c[0] - b.discrete.log_c[0]) < 1e-12
    assert a.t == pytest.approx(t1 + t2)
    np.testing.assert_allclose(np.abs(a.reflection.r_values), np.abs(S.reflection.r_values),
                               atol=1e-15)


def test_norming_constant_growth():
    S = evolve_scattering(_random_data(1), 1.0)
    assert abs(S.discrete.c[0]) == pytest.approx(np.exp(np.sqrt(3)), rel=1e-12)


def test_json_round_trip():
    S = evolve_scattering(_random_data(3), 0.5)
    T = ScatteringData.from_json(S.to_json())
    np.testing.assert_array_equal(T.reflection.r_values, S.reflection.r_values)
    np.testing.assert_allclose(T.discrete.log_c, S.discrete.log_c)
    assert T.t == S.t and T.class_tag == S.class_tag


def test_distance():
    S, T = _random_data(4), _random_data(5)
    assert data_distance(S, S) == 0.0
    assert data_distance(S, T) == pytest.approx(data_distance(T, S))
    empty = ScatteringData(ReflectionSamples.zero())
    assert data_distance(S, empty) == float("inf")


def test_norms_monotone():
    S = _random_data(6)
    half = ReflectionSamples(S.reflection.z_grid, 0.5 * S.reflection.r_values)
    assert estimate_norms(half).l2 < estimate_norms(S.reflection).l2


def test_defect_from_a_near_one():
    # r rounds to |r| = 1 near z = +-1 for this field; the stored defect stays finite
    q = parse_family("dip_family 2").field(50.0, 8192)
    S = scattering_data_from_field(q)
    ld = S.reflection.log_defect()
    assert np.all(np.isfinite(ld)) and np.all(ld <= 0)
    assert S.n_solitons == 0

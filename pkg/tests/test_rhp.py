import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nls_ist.asymptotics import sol
from nls_ist.direct import DiscreteSpectrum
from nls_ist.rhp import (ResidueSystemError, assemble_residue_system, background_left,
                         reconstruct_field, soliton_profile)


def _one(alpha, mag=1.0):
    z = np.exp(1j * alpha)
    return DiscreteSpectrum.from_arrays([z], [mag * 1j * z])


@pytest.mark.parametrize("alpha", [np.pi / 2, np.pi / 3])
def test_one_soliton_equals_sol(alpha):
    z = np.exp(1j * alpha)
    spec = _one(alpha, 1.7)
    x1 = spec.eigenvalues[0].center
    x = np.linspace(-8, 8, 20)
    for t in np.linspace(0, 3, 10):
        q, _ = soliton_profile(spec, x, t)
        assert np.abs(q - sol(x - x1, t, z)).max() < 1e-9


def test_black_soliton_partial_mass():
    spec = DiscreteSpectrum.from_arrays([1j], [-2.0])
    x = np.linspace(-6, 6, 41)
    q, mass = soliton_profile(spec, x, 0.0)
    np.testing.assert_allclose(q, np.tanh(x), atol=1e-12)
    np.testing.assert_allclose(mass, np.tanh(x) - 1, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(0.1, 0.9), min_size=1, max_size=3, unique=True),
       st.floats(-5, 5), st.floats(0, 2))
def test_symmetries_and_residues(fracs, x, t):
    fracs = sorted(fracs)
    if np.min(np.diff(fracs), initial=1) < 0.05:
        return
    z = np.exp(1j * np.pi * np.array(fracs))
    spec = DiscreteSpectrum.from_arrays(z, 1j * z)
    sys = assemble_residue_system(spec, x, t)
    pts = [0.7 + 0.4j, -1.3 + 0.2j, 2.5 - 1j]
    assert sys.symmetry_residual(pts) < 1e-10
    assert sys.inversion_residual(pts) < 1e-10
    assert sys.conjugate_residue_residual() < 1e-9
    assert sys.small_z_residual() < 1e-7
    f = reconstruct_field(sys)
    assert f.mass_imag_residual < 1e-9


def test_background_left():
    z = np.exp(1j * np.pi * np.array([0.25, 0.5]))
    spec = DiscreteSpectrum.from_arrays(z, 1j * z)
    q, _ = soliton_profile(spec, np.array([-40.0]), 0.0)
    assert abs(q[0] - background_left(spec)) < 1e-10


def test_wrong_phase_rejected():
    z = np.exp(1j * np.pi / 3)
    with pytest.raises(ResidueSystemError):
        assemble_residue_system(DiscreteSpectrum.from_arrays([z], [z]), 0.0, 0.0)


def test_saturated_weights_stay_finite():
    q, mass = soliton_profile(_one(np.pi / 2, 1e-300), np.array([-1e3, 0.0, 1e3]), 0.0)
    assert np.all(np.isfinite(q)) and np.all(np.isfinite(mass))

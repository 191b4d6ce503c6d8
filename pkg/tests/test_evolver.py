import numpy as np
import pytest

from nls_ist.evolver import (BoundaryGuardError, EvolutionConfig, domain_mass, dump_snapshots,
                             evolve, gl_energy, half_line_mass, interval_mass, step)
from nls_ist.families import parse_family
from nls_ist.fields import FieldGrid


def test_config_validation():
    with pytest.raises(ValueError):
        EvolutionConfig(dt=0.2)
    with pytest.raises(ValueError):
        EvolutionConfig(spatial_order=3)
    with pytest.raises(ValueError):
        evolve(FieldGrid.tanh(), EvolutionConfig(dt=0.03, t_end=0.1))


def test_tanh_stationary(tanh_field):
    out = step(tanh_field, EvolutionConfig(dt=0.01))
    assert np.abs(out.values - tanh_field.values).max() < 1e-8


def test_energy_and_masses(tanh_field):
    assert gl_energy(tanh_field).energy == pytest.approx(8 / 3, abs=1e-4)
    assert half_line_mass(tanh_field, 0.0) == pytest.approx(-1.0, abs=1e-6)
    assert interval_mass(tanh_field, -1, 1) == pytest.approx(2 * np.tanh(1), abs=1e-6)
    assert domain_mass(tanh_field) == pytest.approx(-2.0, abs=1e-6)
    with pytest.raises(ValueError):
        interval_mass(tanh_field, -40, 0)


def test_energy_conserved_with_radiation():
    q = parse_family("tanh_plus_bump 0.2 1 3").field(30.0, 2048)
    e0 = gl_energy(q).energy
    snaps = evolve(q, EvolutionConfig(dt=0.01, t_end=2.0, snapshot_stride=50))
    assert max(gl_energy(g, t, e0).drift for t, g in snaps) < 1e-9


def test_moving_soliton_speed():
    fam = parse_family("nsoliton 1/3:1")
    q = fam.field(30.0, 4096)
    g = evolve(q, EvolutionConfig(dt=0.01, t_end=2.0))[-1][1]
    exact = fam.field(30.0, 4096, t=2.0)
    assert np.abs(g.values - exact.values).max() < 1e-4


def test_guard_trips():
    q = parse_family("tanh_plus_bump 0.2 1 3").field(12.0, 1024)
    with pytest.raises(BoundaryGuardError):
        evolve(q, EvolutionConfig(dt=0.01, t_end=5.0))


def test_snapshots(tmp_path, tanh_field):
    snaps = evolve(tanh_field, EvolutionConfig(dt=0.01, t_end=0.1, snapshot_times=(0.05,)))
    assert [round(t, 9) for t, _ in snaps] == [0.0, 0.05, 0.1]
    index = dump_snapshots(snaps, str(tmp_path))
    first = np.loadtxt(tmp_path / "snapshot_0000.csv", delimiter=",", skiprows=1)
    assert first.shape == (tanh_field.n, 3)
    assert index.endswith("snapshot_index.json")

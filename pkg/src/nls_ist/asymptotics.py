"""Long-time formulas: one-soliton profile, phase-shifted centers, partial and total mass."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import ScatteringData
from .quadrature import half_line_integral

IMAG_TOL = 1e-8


def sol(x, t, z):
    """-i z (i Re z + Im z tanh(Im z (x - 2 t Re z))) for z on the upper unit circle."""
    z = complex(z)
    if abs(abs(z) - 1.0) > 1e-9 or z.imag <= 0:
        raise ValueError(f"sol needs |z| = 1 and 0 < arg z < pi, got {z}")
    x = np.asarray(x, dtype=float)
    out = np.asarray(-1j * z * (1j * z.real + z.imag * np.tanh(z.imag * (x - 2.0 * t * z.real))))
    return out.item() if out.ndim == 0 else out


@dataclass(frozen=True)
class XiPartition:
    xi: float
    D_plus: tuple[int, ...]
    D_minus: tuple[int, ...]

    @classmethod
    def of(cls, z, xi: float) -> "XiPartition":
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        plus = tuple(int(j) for j in np.flatnonzero(z.real > xi))
        minus = tuple(int(j) for j in np.flatnonzero(z.real <= xi))
        return cls(float(xi), plus, minus)


def _initial_log_abs_c(S: ScatteringData) -> np.ndarray:
    """log|c_k| at t = 0, undoing any evolution applied to S."""
    z = S.discrete.z
    growth = (-1j * S.t * (z * z - 1.0 / (z * z))).real
    return S.discrete.log_c.real - growth


def _tail(S: ScatteringData) -> float:
    return S.reflection.tail_constant()


def radiation_integral(S: ScatteringData, side: str = "positive", weight=None) -> float:
    """Integral of log(1 - |r|^2) w over the positive or negative half line."""
    R = S.reflection
    f = R.log_defect()
    if not np.any(f):
        return 0.0
    return half_line_integral(R.z_grid, f, weight, _tail(S), side)


def soliton_center(k: int, S: ScatteringData, xi: float) -> float:
    """Asymptotic center x_k, with the Blaschke factors over D_plus(xi)."""
    z = S.discrete.z
    zk = z[k]
    s = zk.imag
    log_c = _initial_log_abs_c(S)[k]
    part = XiPartition.of(z, xi)
    blaschke = 0.0
    for j in part.D_plus:
        if j != k:
            blaschke += 2.0 * np.log(abs((zk - z[j]) / (zk * z[j] - 1.0)))
    rad = radiation_integral(S, "positive", lambda u: 1.0 / np.abs(u - zk) ** 2)
    return float((log_c - np.log(2.0 * s) + blaschke - s / np.pi * rad) / (2.0 * s))


def soliton_terms(x: float, t: float, S: ScatteringData) -> np.ndarray:
    """i conj(z_k) [sol(x - x_k, t; z_k) - 1] for each k (complex, imaginary part ~ 0)."""
    if t <= 0:
        raise ValueError("the asymptotic formulas need t > 0")
    z = S.discrete.z
    xi = x / (2.0 * t)
    out = np.empty(z.size, dtype=complex)
    for k in range(z.size):
        xk = soliton_center(k, S, xi)
        out[k] = 1j * np.conj(z[k]) * (sol(x - xk, t, z[k]) - 1.0)
    return out


def _real_sum(terms: np.ndarray) -> float:
    if terms.size and np.abs(terms.imag).max() > IMAG_TOL:
        raise ValueError(f"soliton term has imaginary part {np.abs(terms.imag).max():.3e}")
    return float(terms.real.sum())


def right_partial_mass_asymptotic(x: float, t: float, S: ScatteringData) -> float:
    terms = soliton_terms(x, t, S)
    return _real_sum(terms) - radiation_integral(S, "positive") / (2.0 * np.pi)


def left_partial_mass_asymptotic(x: float, t: float, S: ScatteringData) -> float:
    terms = soliton_terms(x, t, S)
    return (-_real_sum(terms) - radiation_integral(S, "negative") / (2.0 * np.pi)
            - 2.0 * float(np.sum(np.sin(np.angle(S.discrete.z)))))


def total_mass(S: ScatteringData) -> float:
    """-2 sum sin(arg z_k) - (1/2pi) * integral of log(1 - |r|^2) over the real line."""
    rad = radiation_integral(S, "positive") + radiation_integral(S, "negative")
    return -2.0 * float(np.sum(np.sin(np.angle(S.discrete.z)))) - rad / (2.0 * np.pi)


@dataclass(frozen=True)
class AsymptoticProfile:
    x: float
    t: float
    right_mass: float
    left_mass: float
    soliton_terms: np.ndarray
    radiation_right: float
    radiation_left: float

    @classmethod
    def evaluate(cls, x: float, t: float, S: ScatteringData) -> "AsymptoticProfile":
        terms = soliton_terms(x, t, S)
        rp = -radiation_integral(S, "positive") / (2.0 * np.pi)
        rn = -radiation_integral(S, "negative") / (2.0 * np.pi)
        sines = 2.0 * float(np.sum(np.sin(np.angle(S.discrete.z))))
        right = _real_sum(terms) + rp
        left = -_real_sum(terms) + rn - sines
        return cls(float(x), float(t), right, left, terms, rp, rn)

    @property
    def total(self) -> float:
        return self.right_mass + self.left_mass

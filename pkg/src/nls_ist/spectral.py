"""Spectral-plane primitives: uniformization variables, phase, symmetry maps, 2x2 algebra.

All functions accept scalars or numpy arrays and broadcast.  The phase is stored
as ``t*theta`` so that ``t = 0`` is regular.
"""

from __future__ import annotations

import numpy as np

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


class SpectralDomainError(ValueError):
    """Raised when a spectral operation is evaluated at the excluded point z = 0."""


def _check_nonzero(z):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise SpectralDomainError("z = 0 is a singular point of the spectral plane")
    return z


def _out(v):
    return v.item() if np.ndim(v) == 0 else v


def lam(z):
    """lambda(z) = (z + 1/z)/2."""
    z = _check_nonzero(z)
    return _out(0.5 * (z + 1.0 / z))


def zeta(z):
    """zeta(z) = (z - 1/z)/2."""
    z = _check_nonzero(z)
    return _out(0.5 * (z - 1.0 / z))


def t_theta(z, x, t):
    """Return t*theta(z; x, t) = x*zeta(z) - (t/2)(z^2 - z^-2).

    The oscillatory factor of the Riemann-Hilbert jump is exp(2i * t_theta).
    """
    z = _check_nonzero(z)
    return _out(x * 0.5 * (z - 1.0 / z) - 0.5 * t * (z * z - 1.0 / (z * z)))


def theta(z, x, t):
    """theta(z; x, t) for t > 0, i.e. xi*(z - 1/z) - (z^2 - z^-2)/2 with xi = x/(2t)."""
    if np.any(np.asarray(t) <= 0):
        raise SpectralDomainError("theta is only defined for t > 0; use t_theta at t = 0")
    return _out(np.asarray(t_theta(z, x, t)) / t)


def xi(x, t):
    if t <= 0:
        raise SpectralDomainError("xi = x/(2t) requires t > 0")
    return x / (2.0 * t)


def circle_inversion(z):
    z = _check_nonzero(z)
    return _out(1.0 / z)


def conjugate_reflect(z):
    z = _check_nonzero(z)
    return _out(np.conj(z))


def normalization_matrix(z, boundary_value=1.0):
    """Jost normalization matrix [[1, conj(v)/z], [v/z, 1]] for background value v.

    ``boundary_value = +1`` gives B^+(z) and ``-1`` gives B^-(z).
    """
    z = _check_nonzero(z)
    v = complex(boundary_value)
    out = np.empty(z.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = 1.0
    out[..., 0, 1] = np.conj(v) / z
    out[..., 1, 0] = v / z
    return out


def det2(m):
    """Determinant of (..., 2, 2) arrays."""
    m = np.asarray(m)
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def inv2(m):
    m = np.asarray(m)
    d = det2(m)
    out = np.empty_like(m)
    out[..., 0, 0] = m[..., 1, 1]
    out[..., 1, 1] = m[..., 0, 0]
    out[..., 0, 1] = -m[..., 0, 1]
    out[..., 1, 0] = -m[..., 1, 0]
    return out / d[..., None, None]


def mul2(a, b):
    return np.matmul(a, b)

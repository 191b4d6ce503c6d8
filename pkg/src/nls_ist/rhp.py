"""Reflectionless Riemann-Hilbert problem: N dark solitons from the residue conditions.

With r = 0 the solution is rational,

    M(z) = I + sigma1/z + sum_k [A_k/(z - z_k) + At_k/(z - conj z_k)],

where A_k = [[P_k, 0], [conj S_k, 0]] and At_k = [[0, S_k], [0, conj P_k]] so that the
conjugation symmetry holds exactly.  The inversion symmetry M(1/z) = z M(z) sigma1
maps the pole at z_k onto the one at conj z_k = 1/z_k and forces S_k = -conj(z_k) P_k.
The residue condition at z_k then reads

    P_k / C_k + sum_j conj(z_j) P_j / (z_k - conj z_j) = 1 / z_k

with C_k = c_k exp(2i t theta(z_k)); the residue condition at conj z_k is implied and
is checked a posteriori.  Without the inversion constraint the 2N x 2N system is
singular at isolated (x, t), for instance at the center of the black soliton.

C_k is held as a logarithm and each row is scaled by C_k or 1/C_k, whichever is
bounded, so the system stays finite for any (x, t) and the saturated limits are
reached exactly instead of by clipping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .direct import DiscreteSpectrum
from .fields import DEFAULT_TAIL_TOL, FieldGrid
from .spectral import SIGMA1

PHASE_TOL = 1e-4


class ResidueSystemError(ValueError):
    pass


def _check_spectrum(z: np.ndarray, log_c: np.ndarray, phase_tol: float) -> None:
    if np.any(np.abs(np.abs(z) - 1.0) > 1e-9) or np.any(z.imag <= 0):
        raise ResidueSystemError("eigenvalues must lie on the open upper unit semicircle")
    if z.size > 1:
        gaps = np.abs(z[:, None] - z[None, :]) + np.eye(z.size)
        if gaps.min() < 1e-8:
            raise ResidueSystemError("eigenvalue collision")
    # a regular dark soliton needs c_k in i z_k R_+
    dev = np.angle(np.exp(1j * (log_c.imag - np.angle(1j * z))))
    if np.any(np.abs(dev) > phase_tol):
        k = int(np.argmax(np.abs(dev)))
        raise ResidueSystemError(
            f"norming constant phase at z = {z[k]:.6f} is off arg(i z) by {dev[k]:.3e}; "
            "such data give a singular field")


def log_weights(z: np.ndarray, log_c: np.ndarray, x, t: float) -> np.ndarray:
    """log(c_k e^{2i t theta(z_k)}), shape (len(x), N)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    zt = 0.5 * (z - 1.0 / z)
    ph = 2j * (x[:, None] * zt[None, :]) - 1j * t * (z * z - 1.0 / (z * z))[None, :]
    return log_c[None, :] + ph


def _assemble(z: np.ndarray, L: np.ndarray):
    """Batched scaled system for the unknowns P_1..P_N; L has shape (nx, N)."""
    nx, N = L.shape
    big = L.real >= 0
    # row scale: divide by C (rows with |C| >= 1) or keep the C-multiplied form
    inv_c = np.where(big, np.exp(-np.where(big, L, 0)), 1.0)
    c_mul = np.where(big, 1.0, np.exp(np.where(big, 0, L)))
    G = np.conj(z)[None, :] / (z[:, None] - np.conj(z)[None, :])   # conj z_j / (z_k - conj z_j)
    A = c_mul[:, :, None] * G[None] + inv_c[:, :, None] * np.eye(N)[None]
    b = c_mul / z[None, :]
    return A, b


@dataclass(eq=False)
class ResidueSystem:
    z: np.ndarray
    log_c: np.ndarray
    x: float
    t: float
    matrix: np.ndarray
    rhs: np.ndarray
    cond: float
    solution: np.ndarray

    @property
    def N(self) -> int:
        return self.z.size

    @property
    def P(self) -> np.ndarray:
        return self.solution

    @property
    def S(self) -> np.ndarray:
        return -np.conj(self.z) * self.solution

    def conjugate_residue_residual(self) -> float:
        """Residual of the residue condition at conj z_k, which is not imposed directly."""
        C = np.exp(self.weights_log)
        res = 0.0
        for k in range(self.N):
            lhs = self.S[k]
            rhs = np.conj(C[k]) * (1.0 + np.sum(self.P / (np.conj(self.z[k]) - self.z)))
            res = max(res, abs(lhs - rhs) / max(1.0, abs(rhs)))
        return float(res)

    @property
    def weights_log(self) -> np.ndarray:
        return log_weights(self.z, self.log_c, self.x, self.t)[0]

    def M(self, zz: complex) -> np.ndarray:
        """Evaluate the rational solution M(z) away from the poles."""
        zz = complex(zz)
        out = np.eye(2, dtype=complex) + SIGMA1 / zz
        for k in range(self.N):
            Ak = np.array([[self.P[k], 0], [np.conj(self.S[k]), 0]])
            At = np.array([[0, self.S[k]], [0, np.conj(self.P[k])]])
            out = out + Ak / (zz - self.z[k]) + At / (zz - np.conj(self.z[k]))
        return out

    def small_z_residual(self, ray: complex = np.exp(0.3j), eps=(1e-9, 1e-10, 1e-11)) -> float:
        """max ||z M(z) - sigma1|| at points approaching 0 along a ray."""
        vals = []
        for e in eps:
            zz = e * ray
            vals.append(np.abs(zz * self.M(zz) - SIGMA1).max())
        return float(max(vals))

    def symmetry_residual(self, points) -> float:
        res = 0.0
        for zz in points:
            lhs = np.conj(self.M(np.conj(zz)))
            rhs = SIGMA1 @ self.M(zz) @ SIGMA1
            res = max(res, float(np.abs(lhs - rhs).max()))
        return res

    def inversion_residual(self, points) -> float:
        res = 0.0
        for zz in points:
            res = max(res, float(np.abs(self.M(1.0 / zz) - zz * self.M(zz) @ SIGMA1).max()))
        return res

    def column2(self, zz: complex) -> np.ndarray:
        """Second column of M, which is regular at the z_k."""
        zz = complex(zz)
        return np.array([1.0 / zz + np.sum(self.S / (zz - np.conj(self.z))),
                         1.0 + np.sum(np.conj(self.P) / (zz - np.conj(self.z)))])

    def residue_residual(self, eps: float = 1e-6) -> float:
        """Relative mismatch of (z - z_k) M_1(z) at z_k + eps against C_k M_2(z_k)."""
        res = 0.0
        C = np.exp(self.weights_log)
        for k in range(self.N):
            zz = self.z[k] + eps
            lhs = (zz - self.z[k]) * self.M(zz)[:, 0]
            rhs = C[k] * self.column2(self.z[k])
            scale = max(1.0, float(np.abs(rhs).max()))
            res = max(res, float(np.abs(lhs - rhs).max()) / scale)
        return res


def _solve(z, log_c, x, t):
    L = log_weights(z, log_c, x, t)
    A, b = _assemble(z, L)
    sol = np.linalg.solve(A, b[..., None])[..., 0]
    return A, b, sol


def _spectrum_arrays(discrete: DiscreteSpectrum, phase_tol: float):
    z = np.asarray(discrete.z, dtype=complex)
    log_c = np.asarray(discrete.log_c, dtype=complex)
    if z.size:
        _check_spectrum(z, log_c, phase_tol)
    return z, log_c


def assemble_residue_system(discrete: DiscreteSpectrum, x: float, t: float,
                            phase_tol: float = PHASE_TOL) -> ResidueSystem:
    z, log_c = _spectrum_arrays(discrete, phase_tol)
    if z.size == 0:
        return ResidueSystem(z, log_c, float(x), float(t), np.zeros((0, 0), complex),
                             np.zeros(0, complex), 1.0, np.zeros(0, complex))
    A, b, sol = _solve(z, log_c, np.array([x]), t)
    cond = float(np.linalg.cond(A[0]))
    if not np.isfinite(cond) or cond > 1e14:
        raise ResidueSystemError(f"residue system is singular (cond = {cond:.3e})")
    return ResidueSystem(z, log_c, float(x), float(t), A[0], b[0], cond, sol[0])


@dataclass(frozen=True)
class SolitonField:
    x: float
    t: float
    q: complex
    partial_mass_right: float
    mass_imag_residual: float
    cond: float


def _field_from_solution(z, sol):
    P = sol
    S = -np.conj(z) * P
    q = 1.0 + np.conj(S).sum(axis=-1)
    mass = -1j * np.conj(P).sum(axis=-1)
    return q, mass


def reconstruct_field(system: ResidueSystem, imag_tol: float = 1e-6) -> SolitonField:
    """q = lim z (M - I)_21 and the right partial mass -i lim z (M - I)_22."""
    q, mass = _field_from_solution(system.z, system.solution)
    q, mass = complex(q), complex(mass)
    if abs(mass.imag) > imag_tol:
        raise ResidueSystemError(f"partial mass has imaginary part {mass.imag:.3e}")
    return SolitonField(system.x, system.t, q, mass.real, abs(mass.imag), system.cond)


def soliton_profile(discrete: DiscreteSpectrum, x, t: float, phase_tol: float = PHASE_TOL):
    """Vectorized q(x, t) and right partial mass over an array of x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    z, log_c = _spectrum_arrays(discrete, phase_tol)
    if z.size == 0:
        return np.ones(x.size, dtype=complex), np.zeros(x.size)
    _, _, sol = _solve(z, log_c, x, t)
    q, mass = _field_from_solution(z, sol)
    return q, mass.real


def background_left(discrete: DiscreteSpectrum) -> complex:
    """q(-inf) of the reflectionless field: prod z_k^2."""
    z = np.asarray(discrete.z, dtype=complex)
    return complex(np.prod(z * z)) if z.size else 1.0 + 0j


def nsoliton_grid(discrete: DiscreteSpectrum, x_grid, t: float = 0.0,
                  tail_tol: float = DEFAULT_TAIL_TOL) -> FieldGrid:
    """Sample the N-soliton field on a uniform grid; tails are checked against tail_tol.

    An empty spectrum gives q = 1 everywhere, which fails the left tail check by design.
    """
    x = np.asarray(x_grid, dtype=float)
    q, _ = soliton_profile(discrete, x, t)
    left = background_left(discrete) if len(discrete) else -1.0
    return FieldGrid(float(x[0]), float(x[-1]), q, left, 1.0, tail_tol)

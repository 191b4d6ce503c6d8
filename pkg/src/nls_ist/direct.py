"""Direct scattering: normalized Jost functions, a(z), b(z), r(z), eigenvalues, norming constants.

The x-part of the Lax pair, psi_x = i sigma3 (Q - lambda) psi, is integrated for the
normalized solutions m = psi exp(i x zeta sigma3).  The default propagator is a
fourth-order Magnus step with exact 2x2 exponentials, vectorized over spectral
points; it preserves det m exactly, and it is regular at z = +-1 because the ODE
coefficients are.  ``method="rk45"`` integrates the same ODE with scipy's adaptive
Runge-Kutta for a single z and serves as an independent check.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .fields import FieldGrid
from .spectral import det2, normalization_matrix

log = logging.getLogger(__name__)

_C1 = 0.5 - np.sqrt(3.0) / 6.0
_C2 = 0.5 + np.sqrt(3.0) / 6.0
_K4 = np.sqrt(3.0) / 12.0

#: |z -+ 1| below which a and b are reported as infinite (r stays finite).
_UNIT_POLE_TOL = 1e-14


class ScatteringError(RuntimeError):
    """A direct-scattering computation failed one of its numerical checks."""


class NonSimpleRootError(ScatteringError):
    pass


def _classify(z):
    """Return (is_real, is_circle) masks; raise for points outside R and the upper unit circle."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(z == 0):
        raise ValueError("z = 0 is excluded")
    real = np.abs(z.imag) <= 1e-14 * np.maximum(1.0, np.abs(z))
    circle = (np.abs(np.abs(z) - 1.0) <= 1e-12) & (z.imag > 0)
    bad = ~(real | circle)
    if np.any(bad):
        raise ValueError(f"spectral points must be real or on the upper unit circle, got {z[bad][:3]}")
    return real, circle


@dataclass
class _GaussSamples:
    lo: np.ndarray
    hi: np.ndarray


def _gauss_samples(q: FieldGrid) -> _GaussSamples:
    xc = q.x[:-1]
    return _GaussSamples(q(xc + _C1 * q.dx), q(xc + _C2 * q.dx))


def _sweep(q: FieldGrid, z: np.ndarray, side: str, store: np.ndarray,
           gauss: _GaussSamples | None = None) -> np.ndarray:
    """Propagate m from the normalization end of ``side`` and return it at node indices ``store``.

    Output shape is (len(store), len(z), 2, 2).
    """
    z = np.asarray(z, dtype=complex)
    lam = 0.5 * (z + 1.0 / z)
    zet = 0.5 * (z - 1.0 / z)
    g = _gauss_samples(q) if gauss is None else gauss
    n = q.n
    if side == "plus":
        B = normalization_matrix(z, q.right_bv)
        h = -q.dx
        cells = np.arange(n - 2, -1, -1)
        first, second = g.hi[cells], g.lo[cells]
        start, nodes = n - 1, cells
    elif side == "minus":
        B = normalization_matrix(z, q.left_bv)
        h = q.dx
        cells = np.arange(n - 1)
        first, second = g.lo[cells], g.hi[cells]
        start, nodes = 0, cells + 1
    else:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")

    slot = np.full(n, -1)
    slot[np.asarray(store)] = np.arange(len(store))
    out = np.empty((len(store), z.size, 2, 2), dtype=complex)

    m11, m21 = B[:, 0, 0].copy(), B[:, 1, 0].copy()
    m12, m22 = B[:, 0, 1].copy(), B[:, 1, 1].copy()
    if slot[start] >= 0:
        out[slot[start]] = B

    # Omega = h/2 (A1 + A2) + K4 h^2 [A2, A1] with A = [[-i lam, i conj q], [-i q, i lam]].
    hh = _K4 * h * h
    c11 = hh * (np.conj(second) * first - np.conj(first) * second)
    a12 = 0.5j * h * np.conj(first + second)
    b12 = 2.0 * hh * np.conj(first - second)
    a21 = -0.5j * h * (first + second)
    b21 = 2.0 * hh * (first - second)
    d11 = -1j * h * lam
    ph1 = np.exp(1j * h * zet)
    ph2 = np.exp(-1j * h * zet)

    for k in range(len(cells)):
        o11 = d11 + c11[k]
        o12 = a12[k] + b12[k] * lam
        o21 = a21[k] + b21[k] * lam
        d2 = o11 * o11 + o12 * o21
        d = np.sqrt(d2)
        small = np.abs(d) < 1e-4
        ds = np.where(small, 1.0, d)
        ch = np.where(small, 1.0 + 0.5 * d2 + d2 * d2 / 24.0, np.cosh(ds))
        sh = np.where(small, 1.0 + d2 / 6.0 + d2 * d2 / 120.0, np.sinh(ds) / ds)
        e11 = ch + sh * o11
        e22 = ch - sh * o11
        e12 = sh * o12
        e21 = sh * o21
        m11, m21 = (e11 * m11 + e12 * m21) * ph1, (e21 * m11 + e22 * m21) * ph1
        m12, m22 = (e11 * m12 + e12 * m22) * ph2, (e21 * m12 + e22 * m22) * ph2
        s = slot[nodes[k]]
        if s >= 0:
            out[s, :, 0, 0] = m11
            out[s, :, 1, 0] = m21
            out[s, :, 0, 1] = m12
            out[s, :, 1, 1] = m22
    return out


def _rk45_sweep(q: FieldGrid, z: complex, side: str, rtol: float = 1e-10) -> np.ndarray:
    lam = 0.5 * (z + 1.0 / z)
    zet = 0.5 * (z - 1.0 / z)
    bv = q.right_bv if side == "plus" else q.left_bv
    B = normalization_matrix(np.array([z]), bv)[0]
    x = q.x
    span = (x[-1], x[0]) if side == "plus" else (x[0], x[-1])
    t_eval = x[::-1] if side == "plus" else x
    sig = np.array([1.0, -1.0])

    def rhs(s, y):
        m = y.reshape(2, 2)
        qs = q(s)
        A = np.array([[-1j * lam, 1j * np.conj(qs)], [-1j * qs, 1j * lam]])
        return (A @ m + 1j * zet * m * sig).ravel()

    sol = solve_ivp(rhs, span, B.ravel().astype(complex), method="RK45", t_eval=t_eval,
                    rtol=rtol, atol=rtol * 1e-2)
    if not sol.success:
        raise ScatteringError(f"RK45 Jost integration failed: {sol.message}")
    m = sol.y.T.reshape(-1, 2, 2)
    return m[::-1] if side == "plus" else m


@dataclass
class JostPair:
    """Normalized Jost matrices on the x-grid for one spectral point.

    For z on the unit circle only the columns analytic in the upper half plane
    (m1 minus, m2 plus) are defined; the other columns are NaN.
    """

    z: complex
    x: np.ndarray
    m_plus: np.ndarray | None
    m_minus: np.ndarray | None
    B_plus: np.ndarray
    B_minus: np.ndarray

    def det_residual(self, relative: bool = False) -> float:
        """max |det m - (1 - z^-2)| over x and the filled sides.

        With ``relative`` each point is divided by max(1, |m11 m22| + |m12 m21|), the size
        of the products that cancel in det m.
        """
        target = 1.0 - self.z ** -2
        worst = 0.0
        for m in (self.m_plus, self.m_minus):
            if m is not None and np.all(np.isfinite(m)):
                err = np.abs(det2(m) - target)
                if relative:
                    err = err / np.maximum(1.0, np.abs(m[..., 0, 0] * m[..., 1, 1])
                                           + np.abs(m[..., 0, 1] * m[..., 1, 0]))
                worst = max(worst, float(np.max(err)))
        return worst


def solve_jost(q: FieldGrid, z: complex, side: str = "both", method: str = "magnus") -> JostPair:
    real, circle = _classify(z)
    z = complex(z)
    sides = ("plus", "minus") if side == "both" else (side,)
    result = {}
    store = np.arange(q.n)
    for s in sides:
        if method == "magnus":
            m = _sweep(q, np.array([z]), s, store)[:, 0]
        elif method == "rk45":
            m = _rk45_sweep(q, z, s)
        else:
            raise ValueError(f"unknown method {method!r}")
        if not real[0]:
            m[:, :, 0 if s == "plus" else 1] = np.nan
        result[s] = m
    zz = np.array([z])
    return JostPair(z, q.x, result.get("plus"), result.get("minus"),
                    normalization_matrix(zz, q.right_bv)[0], normalization_matrix(zz, q.left_bv)[0])


def _probe_indices(n: int) -> np.ndarray:
    return np.array([n // 4, n // 2, (3 * n) // 4])


def wronskians(q: FieldGrid, z, probe: np.ndarray | None = None, gauss=None):
    """Wronskians W_a = det[psi1-, psi2+] and W_b = det[psi1+, psi1-] at the probe nodes.

    Returns arrays of shape (len(probe), len(z)).  a = W_a / (1 - z^-2), b = W_b / (1 - z^-2).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    real, _ = _classify(z)
    probe = _probe_indices(q.n) if probe is None else np.asarray(probe)
    gauss = _gauss_samples(q) if gauss is None else gauss
    mp = _sweep(q, z, "plus", probe, gauss)
    mm = _sweep(q, z, "minus", probe, gauss)
    wa = mm[..., 0, 0] * mp[..., 1, 1] - mp[..., 0, 1] * mm[..., 1, 0]
    xs = q.x[probe][:, None]
    zet = 0.5 * (z - 1.0 / z)
    wb = (mp[..., 0, 0] * mm[..., 1, 0] - mm[..., 0, 0] * mp[..., 1, 0]) * np.exp(-2j * xs * zet)
    wb = np.where(real[None, :], wb, np.nan)
    return wa, wb


@dataclass
class ScatteringCoefficients:
    z: complex
    a: complex
    b: complex
    r: complex
    spread: float = 0.0

    @property
    def unitarity_defect(self) -> float:
        return abs(abs(self.a) ** 2 - abs(self.b) ** 2 - 1.0)


def _coefficients_from_wronskians(z, wa, wb):
    d = 1.0 - z ** -2.0
    at_pole = np.abs(d) < _UNIT_POLE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(at_pole, np.inf, wa / np.where(at_pole, 1.0, d))
        b = np.where(at_pole, np.inf, wb / np.where(at_pole, 1.0, d))
        # r = W_b / W_a needs no division by 1 - z^-2, so it is finite at z = +-1.
        r = wb / wa
    return a, b, r


def scattering_coefficients_batch(q: FieldGrid, z, spread_tol: float = 1e-6, gauss=None):
    """a, b, r at real points z (vectorized); raises if the x-spread exceeds ``spread_tol``."""
    z = np.atleast_1d(np.asarray(z, dtype=float)).astype(complex)
    wa, wb = wronskians(q, z, gauss=gauss)
    a, b, r = _coefficients_from_wronskians(z[None, :], wa, wb)
    scale = np.maximum(np.abs(wa).max(axis=0), 1e-300)
    dev_a = np.abs(wa - wa[1]).max(axis=0)
    dev_b = np.abs(wb - wb[1]).max(axis=0)
    spread = np.maximum(dev_a, dev_b) / scale
    bad = spread > spread_tol
    if np.any(bad):
        raise ScatteringError(
            f"Wronskians depend on x (spread {spread.max():.2e} > {spread_tol:.0e}) at "
            f"z = {z[bad][:3].real}; refine the spatial grid"
        )
    mid = 1
    return a[mid], b[mid], r[mid], spread


def scattering_coefficients(q: FieldGrid, z: float, spread_tol: float = 1e-6) -> ScatteringCoefficients:
    z = complex(z)
    if z.imag != 0 or z == 0:
        raise ValueError("scattering_coefficients needs a real z != 0")
    if abs(abs(z.real) - 1.0) < _UNIT_POLE_TOL:
        raise ValueError("a(z) and b(z) have poles at z = +-1; use reflection_at for r(+-1)")
    a, b, r, spread = scattering_coefficients_batch(q, [z.real], spread_tol)
    return ScatteringCoefficients(z, complex(a[0]), complex(b[0]), complex(r[0]), float(spread[0]))


def reflection_at(q: FieldGrid, z) -> np.ndarray:
    """r(z) = W_b / W_a at real z, including the limit points z = +-1."""
    z = np.atleast_1d(np.asarray(z, dtype=float)).astype(complex)
    wa, wb = wronskians(q, z, probe=np.array([q.n // 2]))
    return (wb / wa)[0]


# --------------------------------------------------------------------------- discrete spectrum


def a_on_circle(q: FieldGrid, alpha, gauss=None) -> np.ndarray:
    """a(exp(i alpha)) for alpha in (0, pi)."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    z = np.exp(1j * alpha)
    wa, _ = wronskians(q, z, probe=np.array([q.n // 2]), gauss=gauss)
    return wa[0] / (1.0 - z ** -2)


def _circle_rotation(q: FieldGrid) -> complex:
    # a(z) = (q_- / q_+) conj(a(z)) on |z| = 1, so a * rot is real there.
    return np.exp(-0.5j * np.angle(q.left_bv * np.conj(q.right_bv)))


@dataclass
class Eigenvalue:
    z: complex
    log_c: complex = complex(np.nan, np.nan)
    gamma: complex = complex(np.nan, np.nan)
    a_prime: complex = complex(np.nan, np.nan)
    fit_residual: float = float("nan")
    abs_a: float = float("nan")

    @property
    def c(self) -> complex:
        return complex(np.exp(self.log_c))

    @property
    def alpha(self) -> float:
        return float(np.angle(self.z))

    @property
    def center(self) -> float:
        """Soliton center log(|c|/(2 Im z)) / (2 Im z) in the absence of radiation and partners."""
        s = self.z.imag
        return float((self.log_c.real - np.log(2.0 * s)) / (2.0 * s))


@dataclass
class DiscreteSpectrum:
    eigenvalues: list[Eigenvalue] = field(default_factory=list)
    min_abs_a: float = float("nan")
    rejected: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)

    @property
    def z(self) -> np.ndarray:
        return np.array([e.z for e in self.eigenvalues], dtype=complex)

    @property
    def log_c(self) -> np.ndarray:
        return np.array([e.log_c for e in self.eigenvalues], dtype=complex)

    @property
    def c(self) -> np.ndarray:
        return np.exp(self.log_c)

    def validate(self) -> None:
        a = np.angle(self.z)
        if np.any(np.abs(np.abs(self.z) - 1.0) > 1e-9):
            raise ValueError("eigenvalues must lie on the unit circle")
        if np.any(a <= 0) or np.any(a >= np.pi):
            raise ValueError("eigenvalues must satisfy 0 < arg z < pi")
        if np.any(np.diff(a) <= 0):
            raise ValueError("eigenvalues must be sorted by strictly increasing arg z")

    @classmethod
    def from_arrays(cls, z, c) -> "DiscreteSpectrum":
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        c = np.atleast_1d(np.asarray(c, dtype=complex))
        order = np.argsort(np.angle(z))
        ds = cls([Eigenvalue(complex(z[k]), complex(np.log(c[k]))) for k in order])
        ds.validate()
        return ds


def find_discrete_spectrum(q: FieldGrid, n_scan: int = 128, edge_tol: float = 1e-3,
                           abs_a_tol: float = 1e-9) -> DiscreteSpectrum:
    """Zeros of a(z) on the upper unit circle, located by a sign-change scan and Brent refinement."""
    if n_scan < 64:
        raise ValueError("n_scan must be at least 64")
    gauss = _gauss_samples(q)
    rot = _circle_rotation(q)
    alpha = np.pi * (np.arange(n_scan) + 0.5) / n_scan
    a = a_on_circle(q, alpha, gauss)
    g = (a * rot).real
    absa = np.abs(a)

    def f(al):
        return float((a_on_circle(q, [al], gauss)[0] * rot).real)

    out = DiscreteSpectrum(min_abs_a=float(absa.min()))
    crossings = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
    for j in crossings:
        root = brentq(f, alpha[j], alpha[j + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        z = complex(np.exp(1j * root))
        aval = abs(a_on_circle(q, [root], gauss)[0])
        if root < edge_tol or root > np.pi - edge_tol:
            out.rejected.append(f"root at arg z = {root:.3e} violates the generic-condition neighborhood")
            continue
        if aval > 1e-6:
            raise ScatteringError(
                f"|a| = {aval:.2e} at the on-circle root near arg z = {root:.6f}; zero may lie off the circle"
            )
        if aval > abs_a_tol:
            log.warning("|a| = %.2e at root arg z = %.9f exceeds %.0e", aval, root, abs_a_tol)
        out.eigenvalues.append(Eigenvalue(z, abs_a=aval))

    # An interior modulus minimum that is tiny but has no sign change: double root or off-circle zero.
    crossed = np.zeros(n_scan, dtype=bool)
    crossed[crossings] = crossed[crossings + 1] = True
    interior = np.nonzero((absa[1:-1] < absa[:-2]) & (absa[1:-1] < absa[2:]))[0] + 1
    for j in interior:
        if absa[j] < 1e-3 and not crossed[j - 1:j + 2].any():
            raise NonSimpleRootError(
                f"|a| has a minimum {absa[j]:.2e} at arg z = {alpha[j]:.4f} without a sign change"
            )
    return out


def a_prime_on_circle(q: FieldGrid, z: complex, h: float = 0.02, gauss=None) -> complex:
    """a'(z) at |z| = 1 from fourth-order central differences in arg z, Richardson-combined."""
    al = float(np.angle(z))
    # keep the stencil on the open upper semicircle
    h = min(h, al / 2.5, (np.pi - al) / 2.5)
    offs = np.array([-2 * h, -h, -h / 2, h / 2, h, 2 * h])
    f = dict(zip(offs, a_on_circle(q, al + offs, gauss)))
    d_h = (-f[2 * h] + 8 * f[h] - 8 * f[-h] + f[-2 * h]) / (12 * h)
    d_h2 = (-f[h] + 8 * f[h / 2] - 8 * f[-h / 2] + f[-h]) / (6 * h)
    da_dalpha = (16 * d_h2 - d_h) / 15
    return complex(da_dalpha / (1j * z))


def norming_constants(q: FieldGrid, spectrum: DiscreteSpectrum, fit_tol: float = 1e-5,
                      h: float = 0.02) -> DiscreteSpectrum:
    """Fill gamma_k, a'(z_k) and c_k = gamma_k / a'(z_k) for each eigenvalue."""
    gauss = _gauss_samples(q)
    n = q.n
    central = slice(n // 4, (3 * n) // 4 + 1)
    x = q.x[central]
    done = []
    for ev in spectrum.eigenvalues:
        z = ev.z
        zet = 0.5 * (z - 1.0 / z)
        idx = np.arange(n)[central]
        m2p = _sweep(q, np.array([z]), "plus", idx, gauss)[:, 0, :, 1]
        m1m = _sweep(q, np.array([z]), "minus", idx, gauss)[:, 0, :, 0]
        psi1m = m1m * np.exp(-1j * x * zet)[:, None]
        psi2p = m2p * np.exp(1j * x * zet)[:, None]
        gamma = np.vdot(psi2p, psi1m) / np.vdot(psi2p, psi2p)
        resid = float(np.linalg.norm(psi1m - gamma * psi2p) / np.linalg.norm(psi1m))
        if resid > fit_tol:
            raise ScatteringError(f"gamma fit residual {resid:.2e} > {fit_tol:.0e} at z = {z}")
        ap = a_prime_on_circle(q, z, h, gauss)
        c = gamma / ap
        done.append(Eigenvalue(z, complex(np.log(c)), complex(gamma), ap, resid, ev.abs_a))
    return DiscreteSpectrum(done, spectrum.min_abs_a, list(spectrum.rejected))

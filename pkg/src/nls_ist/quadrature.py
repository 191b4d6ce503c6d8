"""Half-line quadrature of sampled integrands with a logarithmic singularity at |s| = 1.

Integrands of the form log(1 - |r(s)|^2) * w(s) behave like beta*log|s - 1| near
s = 1 in the generic case (|r| -> 1), and are regular otherwise.  The piece over
(0, 1) is mapped to (1, inf) by s -> 1/s, and on (1, inf) the integrand is
interpolated by a cubic spline in u = log(s - 1), where the log singularity
becomes linear growth damped by e^u.  The gap next to s = 1 is closed with a
fitted ``beta*u + c`` model, and the tails use the decay r(s) ~ K/s at infinity
(equivalently r(s) ~ K s near 0).
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def log_defect(r) -> np.ndarray:
    """log(1 - |r|^2), accurate for small |r|."""
    return np.log1p(-np.abs(np.asarray(r)) ** 2)


def _one_to_inf(t, h, tail) -> float:
    """Integral over (1, inf) of samples h(t), t > 1 sorted; ``tail(t)`` models h past t[-1]."""
    u = np.log(t - 1.0)
    g = h * (t - 1.0)
    if t.size >= 4:
        total = float(CubicSpline(u, g).integrate(u[0], u[-1]))
    else:
        total = float(np.sum(0.5 * (g[1:] + g[:-1]) * np.diff(u)))
    beta = (h[1] - h[0]) / (u[1] - u[0])
    c = h[0] - beta * u[0]
    total += np.exp(u[0]) * (beta * (u[0] - 1.0) + c)
    # past t_max substitute t = t_max/tau
    tv = t[-1] / _GL_X
    total += t[-1] * float(np.sum(_GL_W * tail(tv) / _GL_X ** 2))
    return total


def positive_half_integral(s, f, weight=None, K: float = 0.0) -> float:
    """Approximate the integral of f(s) w(s) over (0, inf) from samples at s > 0.

    ``f`` are samples of log(1 - |r|^2); ``K`` is lim |s r(s)| at infinity, which by
    the inversion symmetry also equals lim |r(s)/s| at 0.
    """
    s = np.asarray(s, dtype=float)
    f = np.asarray(f, dtype=float)
    keep = (s > 0) & (s != 1.0)
    s, f = s[keep], f[keep]
    order = np.argsort(s)
    s, f = s[order], f[order]
    w = (lambda x: np.ones_like(np.asarray(x, dtype=float))) if weight is None else weight
    hi, lo = s > 1.0, s < 1.0
    if hi.sum() < 2 or lo.sum() < 2:
        raise ValueError("need at least 2 samples on each side of s = 1")
    K2 = K * K
    if K2 >= min(s[-1], 1.0 / s[0]) ** 2:
        raise ValueError("sample range too short for the tail model r ~ K/s")

    t = s[hi]
    total = _one_to_inf(t, f[hi] * w(t), lambda x: np.log1p(-K2 / x ** 2) * w(x))
    # (0, 1) mapped by s = 1/t, ds = dt/t^2
    t = 1.0 / s[lo][::-1]
    total += _one_to_inf(t, f[lo][::-1] * w(1.0 / t) / t ** 2,
                         lambda x: np.log1p(-K2 / x ** 2) / x ** 2 * w(1.0 / x))
    return float(total)


def half_line_integral(s, f, weight=None, K: float = 0.0, side: str = "positive") -> float:
    """Integral over (0, inf) (``side='positive'``) or (-inf, 0) (``side='negative'``)."""
    s = np.asarray(s, dtype=float)
    f = np.asarray(f, dtype=float)
    if side == "positive":
        return positive_half_integral(s, f, weight, K)
    if side == "negative":
        sel = s < 0
        w = None if weight is None else (lambda x: weight(-np.asarray(x)))
        return positive_half_integral(-s[sel], f[sel], w, K)
    raise ValueError(f"side must be 'positive' or 'negative', got {side!r}")

"""Builtin initial-data families addressed by short text descriptors.

    tanh                      tanh(x)
    tanh_shift d              tanh(x - d)
    nsoliton a1:c1 a2:c2 ...  reflectionless field with z_k = e^{i pi a_k} and |c_k| = c_k
    tanh_plus_bump A w x0     tanh(x) + A exp(-((x - x0)/w)^2)
    dip_family s              tanh(x) + i s sech(x/2)

For ``nsoliton`` the arguments a_k may be written as fractions (``1/3``) and the
whole list may use the bracket form ``[e^{i pi/3}:1, e^{2i pi/3}:1]``.  The norming
constants are c_k = |c_k| i z_k, the phase required for a regular dark soliton.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .direct import DiscreteSpectrum
from .fields import DEFAULT_TAIL_TOL, FieldGrid
from .rhp import nsoliton_grid


class DescriptorError(ValueError):
    pass


_EXP_RE = re.compile(r"e\^\{?\s*(\d*)\s*i\s*(?:π|pi)\s*(?:/\s*(\d+))?\s*\}?")


def _parse_arg(tok: str) -> float:
    tok = tok.strip()
    m = _EXP_RE.fullmatch(tok)
    if m:
        num = int(m.group(1)) if m.group(1) else 1
        den = int(m.group(2)) if m.group(2) else 1
        return num / den
    try:
        return float(Fraction(tok))
    except (ValueError, ZeroDivisionError) as exc:
        raise DescriptorError(f"cannot parse eigenvalue argument {tok!r}") from exc


def parse_nsoliton(args: str) -> DiscreteSpectrum:
    body = args.strip().strip("[]")
    items = [s for s in re.split(r"[,\s]+(?![^{]*\})", body) if s]
    if not items:
        raise DescriptorError("nsoliton needs at least one 'arg:|c|' item")
    z, c = [], []
    for it in items:
        if ":" not in it:
            raise DescriptorError(f"nsoliton item {it!r} is not of the form arg:|c|")
        a, m = it.rsplit(":", 1)
        frac = _parse_arg(a)
        if not 0 < frac < 1:
            raise DescriptorError(f"eigenvalue argument {frac} pi is outside (0, pi)")
        mag = float(m)
        if mag <= 0:
            raise DescriptorError("|c| must be positive")
        zk = np.exp(1j * np.pi * frac)
        z.append(zk)
        c.append(mag * 1j * zk)
    return DiscreteSpectrum.from_arrays(z, c)


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple
    text: str

    def field(self, L: float = 30.0, n: int = 4096, t: float = 0.0,
              tail_tol: float = DEFAULT_TAIL_TOL) -> FieldGrid:
        x = np.linspace(-L, L, n)
        if self.name == "nsoliton":
            return nsoliton_grid(self.spectrum(), x, t, tail_tol)
        if t != 0:
            raise DescriptorError(f"family {self.name!r} has no closed form at t > 0")
        return FieldGrid(-L, L, self.values(x), -1.0, 1.0, tail_tol)

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.name == "tanh":
            return np.tanh(x).astype(complex)
        if self.name == "tanh_shift":
            return np.tanh(x - p[0]).astype(complex)
        if self.name == "tanh_plus_bump":
            A, w, x0 = p
            return (np.tanh(x) + A * np.exp(-((x - x0) / w) ** 2)).astype(complex)
        if self.name == "dip_family":
            return np.tanh(x) + 1j * p[0] / np.cosh(0.5 * x)
        raise DescriptorError(f"family {self.name!r} is not sampled pointwise")

    def spectrum(self) -> DiscreteSpectrum:
        if self.name != "nsoliton":
            raise DescriptorError("only nsoliton families carry their spectrum")
        return self.params[0]

    def with_param(self, value: float) -> "Family":
        """Same family with its (single) scalar parameter replaced."""
        if self.name not in ("tanh_shift", "dip_family"):
            raise DescriptorError(f"family {self.name!r} has no scalar parameter")
        return parse_family(f"{self.name} {value!r}")


_ARITY = {"tanh": 0, "tanh_shift": 1, "tanh_plus_bump": 3, "dip_family": 1}


def parse_family(text: str) -> Family:
    text = text.strip()
    if not text:
        raise DescriptorError("empty family descriptor")
    name, _, rest = text.partition(" ")
    if name == "nsoliton":
        return Family(name, (parse_nsoliton(rest),), text)
    if name not in _ARITY:
        raise DescriptorError(
            f"unknown family {name!r}; known: tanh, tanh_shift, nsoliton, tanh_plus_bump, dip_family")
    toks = rest.split()
    if len(toks) != _ARITY[name]:
        raise DescriptorError(f"family {name!r} takes {_ARITY[name]} parameter(s), got {len(toks)}")
    try:
        params = tuple(float(t) for t in toks)
    except ValueError as exc:
        raise DescriptorError(f"non-numeric parameter in {text!r}") from exc
    if name == "tanh_plus_bump" and params[1] <= 0:
        raise DescriptorError("bump width must be positive")
    return Family(name, params, text)


def weighted_l2_distance(f: FieldGrid, g: FieldGrid, m: int = 2) -> float:
    """||(1 + |x|)^m (f - g)||_{L^2} by the trapezoid rule on a shared grid."""
    if f.n != g.n or f.x_min != g.x_min or f.x_max != g.x_max:
        raise ValueError("fields must share a grid")
    d = (1.0 + np.abs(f.x)) ** m * np.abs(f.values - g.values)
    return float(np.sqrt(np.trapezoid(d * d, dx=f.dx)))

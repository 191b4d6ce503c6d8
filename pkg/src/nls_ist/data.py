"""Scattering data: containers, validation, linear time evolution, norm surrogates, distances."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .direct import (DiscreteSpectrum, Eigenvalue, find_discrete_spectrum, norming_constants,
                     scattering_coefficients_batch)
from .fields import FieldGrid

Z_MIN = 0.05
REFINE_RADIUS = 0.1
REFINE_COUNT = 8
EIGEN_I_TOL = 1e-6


class ScatteringDataError(ValueError):
    pass


def spectral_grid(n_refine: int = 12, n_outer: int = 38, z_max: float = 20.0,
                  d_min: float = 1e-4) -> np.ndarray:
    """Sorted real grid, refined geometrically toward +-1 and closed under z -> 1/z, z -> -z.

    The default has 4*(n_refine + n_outer) = 200 points with |z| in [1/z_max, z_max].
    """
    s = np.concatenate([1.0 + np.geomspace(d_min, REFINE_RADIUS, n_refine),
                        np.geomspace(1.0 + REFINE_RADIUS, z_max, n_outer + 1)[1:]])
    pos = np.concatenate([1.0 / s[::-1], s])
    return np.concatenate([-pos[::-1], pos])


@dataclass(frozen=True, eq=False)
class ReflectionSamples:
    z_grid: np.ndarray
    r_values: np.ndarray
    z_min: float = Z_MIN
    check_refinement: bool = True
    # log(1 - |r|^2) = -2 log|a| when known; stays accurate where |r| rounds to 1
    log_defect_values: np.ndarray | None = None

    def __post_init__(self):
        z = np.asarray(self.z_grid, dtype=float)
        r = np.asarray(self.r_values, dtype=complex)
        object.__setattr__(self, "z_grid", z)
        object.__setattr__(self, "r_values", r)
        if z.ndim != 1 or z.shape != r.shape:
            raise ScatteringDataError("z_grid and r_values must be 1-d arrays of equal length")
        ld = self.log_defect_values
        if ld is not None:
            ld = np.asarray(ld, dtype=float)
            object.__setattr__(self, "log_defect_values", ld)
            if ld.shape != z.shape or not np.all(np.isfinite(ld)) or np.any(ld > 0):
                raise ScatteringDataError("log_defect_values must be finite, <= 0, one per z")
        if np.any(np.diff(z) <= 0):
            raise ScatteringDataError("z_grid must be strictly increasing")
        if np.any(np.abs(z) < self.z_min * (1 - 1e-12)):
            raise ScatteringDataError(f"z_grid contains points with |z| < z_min = {self.z_min}")
        if not np.all(np.isfinite(r)):
            raise ScatteringDataError("r_values must be finite")
        # with a known defect |r| may round up to 1 by a few ulps
        bound = 1.0 if ld is None else 1.0 + 1e-12
        if np.any(np.abs(r) >= bound):
            raise ScatteringDataError(f"|r| must be < 1, max |r| = {np.abs(r).max():.6f}")
        if self.check_refinement:
            for p in (-1.0, 1.0):
                k = int(np.sum(np.abs(z - p) <= REFINE_RADIUS))
                if k < REFINE_COUNT:
                    raise ScatteringDataError(
                        f"grid has {k} points within {REFINE_RADIUS} of {p:+.0f}, "
                        f"need {REFINE_COUNT}")

    def __len__(self):
        return self.z_grid.size

    @property
    def max_abs(self) -> float:
        return float(np.abs(self.r_values).max()) if len(self) else 0.0

    def log_defect(self) -> np.ndarray:
        """log(1 - |r|^2) on the grid."""
        if self.log_defect_values is not None:
            return self.log_defect_values
        return np.log1p(-np.abs(self.r_values) ** 2)

    def side(self, sign: int) -> tuple[np.ndarray, np.ndarray]:
        sel = self.z_grid > 0 if sign > 0 else self.z_grid < 0
        return self.z_grid[sel], self.r_values[sel]

    def tail_constant(self) -> float:
        """Estimate of lim |z r(z)| from the largest-|z| samples (also lim |r/z| at 0)."""
        if len(self) == 0:
            return 0.0
        k = np.argsort(np.abs(self.z_grid))[-2:]
        return float(np.max(np.abs(self.z_grid[k] * self.r_values[k])))

    @classmethod
    def from_coefficients(cls, z_grid, a, r, **kw) -> "ReflectionSamples":
        """Samples with log(1 - |r|^2) taken from log1p for small |r| and -2 log|a| near |r| = 1."""
        ar = np.abs(np.asarray(r))
        ld = np.where(ar < 0.5, np.log1p(-np.minimum(ar, 0.5) ** 2),
                      -2.0 * np.log(np.abs(np.asarray(a))))
        return cls(z_grid, r, log_defect_values=ld, **kw)

    @classmethod
    def zero(cls, z_grid=None) -> "ReflectionSamples":
        z = spectral_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
        return cls(z, np.zeros(z.size, dtype=complex))


@dataclass(frozen=True, eq=False)
class ScatteringData:
    reflection: ReflectionSamples
    discrete: DiscreteSpectrum = field(default_factory=DiscreteSpectrum)
    class_tag: str = "S1"
    t: float = 0.0

    def __post_init__(self):
        if self.class_tag not in ("S1", "S2"):
            raise ScatteringDataError(f"class_tag must be 'S1' or 'S2', got {self.class_tag!r}")
        if len(self.discrete):
            try:
                self.discrete.validate()
            except ValueError as exc:
                raise ScatteringDataError(str(exc)) from exc
            if self.class_tag == "S2" and np.any(np.abs(self.discrete.z - 1j) < EIGEN_I_TOL):
                raise ScatteringDataError("class S2 excludes the eigenvalue z = i")

    @property
    def n_solitons(self) -> int:
        return len(self.discrete)

    def to_json(self) -> str:
        return json.dumps(to_dict(self), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ScatteringData":
        return from_dict(json.loads(text))


def reflection_grid(q: FieldGrid, z_grid=None, spread_tol: float = 1e-6) -> ReflectionSamples:
    """Sample r(z) of a field on a real grid."""
    z = spectral_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
    a, _, r, _ = scattering_coefficients_batch(q, z, spread_tol)
    return ReflectionSamples.from_coefficients(z, a, r)


def scattering_data_from_field(q: FieldGrid, z_grid=None, class_tag: str = "S1",
                               n_scan: int = 128) -> ScatteringData:
    """The direct map: reflection samples, eigenvalues and norming constants of ``q``."""
    refl = reflection_grid(q, z_grid)
    spec = find_discrete_spectrum(q, n_scan=n_scan)
    if len(spec):
        spec = norming_constants(q, spec)
    return ScatteringData(refl, spec, class_tag)


def evolve_scattering(S: ScatteringData, t: float) -> ScatteringData:
    """Linear flow: r -> r e^{-it(z^2 - z^-2)}, log c_k -> log c_k - it(z_k^2 - z_k^-2)."""
    if t < 0:
        raise ValueError("evolve_scattering needs t >= 0")
    if t == 0:
        return S
    z = S.reflection.z_grid
    r = S.reflection.r_values * np.exp(-1j * t * (z * z - 1.0 / (z * z)))
    refl = replace(S.reflection, r_values=r)
    evs = []
    for ev in S.discrete:
        zk = ev.z
        shift = -1j * t * (zk * zk - 1.0 / (zk * zk))
        evs.append(replace(ev, log_c=complex(ev.log_c + shift)))
    disc = DiscreteSpectrum(evs, S.discrete.min_abs_a, list(S.discrete.rejected))
    return ScatteringData(refl, disc, S.class_tag, S.t + t)


@dataclass(frozen=True)
class NormEstimates:
    l2: float
    h11: float
    r_over_z_sup: float
    second_deriv_l2_near_pm1: float

    def __post_init__(self):
        for name in ("l2", "h11", "r_over_z_sup", "second_deriv_l2_near_pm1"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ValueError(f"{name} = {v} is not finite and nonnegative")


def _check_dyadic(z: np.ndarray) -> None:
    a = np.abs(z)
    if a.size < 3:
        raise ScatteringDataError("need at least 3 grid points")
    lo, hi = a.min(), a.max()
    k0, k1 = int(np.ceil(np.log2(lo))), int(np.floor(np.log2(hi)))
    for k in range(k0, k1):
        for sgn in (-1, 1):
            side = a[np.sign(z) == sgn]
            if side.size == 0:
                continue
            if side.min() > 2.0 ** k or side.max() < 2.0 ** (k + 1):
                continue
            n = int(np.sum((side >= 2.0 ** k) & (side <= 2.0 ** (k + 1))))
            if n < 3:
                raise ScatteringDataError(
                    f"grid too coarse: {n} points in dyadic band [{2.0 ** k:g}, {2.0 ** (k + 1):g}]")


def _l2(z, f) -> float:
    return float(np.sqrt(max(np.trapezoid(np.abs(f) ** 2, z), 0.0)))


def estimate_norms(R: ReflectionSamples) -> NormEstimates:
    """Grid surrogates for the L^2, weighted Sobolev and endpoint norms of r."""
    z, r = R.z_grid, R.r_values
    _check_dyadic(z)
    w = 1.0 + np.abs(z)
    l2 = _l2(z, r)
    h11 = _l2(z, w * r)
    d2 = 0.0
    for sgn in (-1, 1):
        zs, rs = R.side(sgn)
        if zs.size < 3:
            continue
        dr = np.gradient(rs, zs)
        h11 += _l2(zs, (1.0 + np.abs(zs)) * dr)
        near = np.abs(np.abs(zs) - 1.0) <= REFINE_RADIUS
        if near.sum() >= 3:
            d2r = np.gradient(dr, zs)
            d2 = np.hypot(d2, _l2(zs[near], d2r[near]))
    return NormEstimates(l2, h11, R.tail_constant(), float(d2))


def data_distance(S1: ScatteringData, S2: ScatteringData) -> float:
    """L^2 distance of reflections on the union grid plus eigenvalue and norming-constant gaps.

    Returns ``inf`` when the eigenvalue counts differ.
    """
    if S1.n_solitons != S2.n_solitons:
        return float("inf")
    z1, r1 = S1.reflection.z_grid, S1.reflection.r_values
    z2, r2 = S2.reflection.z_grid, S2.reflection.r_values
    zu = np.union1d(z1, z2)
    d = 0.0
    for sgn in (-1, 1):
        zs = zu[zu > 0] if sgn > 0 else zu[zu < 0]
        a1 = np.interp(zs, z1, r1.real) + 1j * np.interp(zs, z1, r1.imag)
        a2 = np.interp(zs, z2, r2.real) + 1j * np.interp(zs, z2, r2.imag)
        d += np.trapezoid(np.abs(a1 - a2) ** 2, zs)
    dist = float(np.sqrt(d))
    for e1, e2 in zip(S1.discrete, S2.discrete):
        dist += abs(e1.z - e2.z) + abs(e1.c - e2.c)
    return dist


# --------------------------------------------------------------------------- JSON


def to_dict(S: ScatteringData) -> dict:
    eigs = []
    for ev in S.discrete:
        c = ev.c
        finite = np.isfinite(c)
        eigs.append({
            "re": ev.z.real, "im": ev.z.imag,
            "c_re": c.real if finite else None, "c_im": c.imag if finite else None,
            "log_c_re": ev.log_c.real, "log_c_im": ev.log_c.imag,
        })
    return {
        "z_grid": S.reflection.z_grid.tolist(),
        "r_re": S.reflection.r_values.real.tolist(),
        "r_im": S.reflection.r_values.imag.tolist(),
        "eigenvalues": eigs,
        "class": S.class_tag,
        "t": S.t,
        "log_defect": (None if S.reflection.log_defect_values is None
                       else S.reflection.log_defect_values.tolist()),
    }


def from_dict(d: dict) -> ScatteringData:
    z = np.asarray(d["z_grid"], dtype=float)
    r = np.asarray(d["r_re"], dtype=float) + 1j * np.asarray(d["r_im"], dtype=float)
    evs = []
    for e in d.get("eigenvalues", []):
        zk = complex(e["re"], e["im"])
        if e.get("log_c_re") is not None:
            lc = complex(e["log_c_re"], e["log_c_im"])
        else:
            lc = complex(np.log(complex(e["c_re"], e["c_im"])))
        evs.append(Eigenvalue(zk, lc))
    evs.sort(key=lambda ev: np.angle(ev.z))
    ld = d.get("log_defect")
    refl = ReflectionSamples(z, r, log_defect_values=None if ld is None else np.asarray(ld, float))
    return ScatteringData(refl, DiscreteSpectrum(evs), d.get("class", "S1"),
                          float(d.get("t", 0.0)))


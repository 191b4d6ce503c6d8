"""Sampled complex fields on a truncated uniform grid with declared boundary values."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

DEFAULT_TAIL_TOL = 1e-8


class TailError(ValueError):
    """The sampled field does not reach its declared boundary values at the grid ends."""


@dataclass(eq=False)
class FieldGrid:
    """q(x_j) on ``np.linspace(x_min, x_max, n)``.

    ``left_bv`` defaults to -1.  Any unimodular value is accepted because a
    reflectionless multi-soliton has q(-inf) = prod z_k**2, which is -1 only for
    special eigenvalue sets.
    """

    x_min: float
    x_max: float
    values: np.ndarray
    left_bv: complex = -1.0
    right_bv: complex = 1.0
    tail_tol: float = DEFAULT_TAIL_TOL
    check_tails: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim != 1 or self.values.size < 2:
            raise ValueError("FieldGrid needs a 1-d array of at least 2 samples")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        for bv in (self.left_bv, self.right_bv):
            if abs(abs(bv) - 1.0) > 1e-12:
                raise ValueError(f"boundary value {bv} is not unimodular")
        if self.check_tails:
            self.validate_tails()

    def validate_tails(self, tol: float | None = None) -> None:
        tol = self.tail_tol if tol is None else tol
        dl = abs(self.values[0] - self.left_bv)
        dr = abs(self.values[-1] - self.right_bv)
        if dl >= tol or dr >= tol:
            raise TailError(
                f"tails not resolved: |q(x_min) - {self.left_bv}| = {dl:.3e}, "
                f"|q(x_max) - {self.right_bv}| = {dr:.3e}, tail_tol = {tol:.1e}"
            )

    @property
    def n(self) -> int:
        return self.values.size

    @cached_property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def finite_density_pm1(self) -> bool:
        """True when the boundary values are exactly the -1/+1 pair."""
        return self.left_bv == -1 and self.right_bv == 1

    @cached_property
    def spline(self) -> CubicSpline:
        return CubicSpline(self.x, self.values)

    def __call__(self, x):
        return self.spline(x)

    def with_values(self, values, check_tails: bool = False) -> "FieldGrid":
        return FieldGrid(self.x_min, self.x_max, values, self.left_bv, self.right_bv,
                         self.tail_tol, check_tails)

    @classmethod
    def from_function(cls, f, x_min: float = -30.0, x_max: float = 30.0, n: int = 4096,
                      left_bv: complex = -1.0, right_bv: complex = 1.0,
                      tail_tol: float = DEFAULT_TAIL_TOL) -> "FieldGrid":
        x = np.linspace(x_min, x_max, n)
        return cls(x_min, x_max, np.asarray(f(x), dtype=complex), left_bv, right_bv, tail_tol)

    @classmethod
    def tanh(cls, shift: float = 0.0, L: float = 30.0, n: int = 4096) -> "FieldGrid":
        return cls.from_function(lambda x: np.tanh(x - shift), -L, L, n)

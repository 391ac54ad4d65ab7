from typing import Any, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _readonly(v: Any, dtype) -> np.ndarray:
    arr = np.array(v, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError("trajectory arrays must be 1-d")
    arr.setflags(write=False)
    return arr


class ModeTrajectory(BaseModel):
    """
    Sampled solution of the mode equation with its reservoir quadratures.

    Times in ``grid`` are physical; ``xi_dot`` is the derivative with respect
    to the scaled time omega0 * t, so the Wronskian Im(xi conj(xi_dot)) is 1.

    Args:
        grid: Ordered sample times, starting at 0.
        xi: Complex mode amplitude at each sample.
        xi_dot: Its scaled-time derivative at each sample.
        Gamma: Accumulated damping, the integral of gamma from 0.
        gamma: Damping rate at each sample.
        in_pulse: True where the sample lies strictly inside a pulse.
        segments: Index ranges (first, last, is_pulse) of the smooth segments of
            the grid; neighbouring segments share their boundary sample.
        omega0: Reference angular frequency.
        wronskian_drift: Max over samples of |Im(xi conj(xi_dot)) - 1|.
        G: Reservoir factor used for J and J_tilde, once accumulated.
        J: Real reservoir quadrature, once accumulated.
        J_tilde: Complex reservoir quadrature, once accumulated.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: np.ndarray
    xi: np.ndarray
    xi_dot: np.ndarray
    Gamma: np.ndarray
    gamma: np.ndarray
    in_pulse: np.ndarray
    segments: Tuple[Tuple[int, int, bool], ...]
    omega0: float = Field(1.0, gt=0.0)
    wronskian_drift: float = 0.0
    G: Optional[float] = None
    J: Optional[np.ndarray] = None
    J_tilde: Optional[np.ndarray] = None

    @field_validator("grid", "Gamma", "gamma", "J", mode="before")
    @classmethod
    def _real(cls, v: Any) -> Any:
        return None if v is None else _readonly(v, np.float64)

    @field_validator("xi", "xi_dot", "J_tilde", mode="before")
    @classmethod
    def _complex(cls, v: Any) -> Any:
        return None if v is None else _readonly(v, np.complex128)

    @field_validator("in_pulse", mode="before")
    @classmethod
    def _mask(cls, v: Any) -> np.ndarray:
        return _readonly(v, bool)

    @model_validator(mode="after")
    def _check_shapes(self) -> "ModeTrajectory":
        n = self.grid.size
        for name in ("xi", "xi_dot", "Gamma", "gamma", "in_pulse", "J", "J_tilde"):
            value = getattr(self, name)
            if value is not None and value.size != n:
                raise ValueError(f"{name} has {value.size} samples, grid has {n}")
        if n == 0 or self.grid[0] != 0.0 or np.any(np.diff(self.grid) <= 0.0):
            raise ValueError("grid must start at 0 and be strictly increasing")
        if self.Gamma[0] != 0.0 or np.any(np.diff(self.Gamma) < 0.0):
            raise ValueError("Gamma must start at 0 and be non-decreasing")
        if (self.J is None) != (self.J_tilde is None):
            raise ValueError("J and J_tilde must be given together")
        return self

    @property
    def has_quadratures(self) -> bool:
        return self.J is not None

    @property
    def E(self) -> np.ndarray:
        """Mode energy (|xi|^2 + |xi_dot|^2)/2 at each sample."""
        return 0.5 * (np.abs(self.xi) ** 2 + np.abs(self.xi_dot) ** 2)

    @property
    def E_tilde(self) -> np.ndarray:
        """Complex companion (xi^2 + xi_dot^2)/2 of the mode energy."""
        return 0.5 * (self.xi**2 + self.xi_dot**2)

    @property
    def wronskian(self) -> np.ndarray:
        """Im(xi conj(xi_dot)); identically 1 for an exact solution."""
        return (self.xi * np.conj(self.xi_dot)).imag

    def index_of(self, t: float) -> Optional[int]:
        """Index of the sample at time t, or None if t is not on the grid."""
        i = int(np.searchsorted(self.grid, t))
        for j in (i - 1, i):
            if 0 <= j < self.grid.size and abs(self.grid[j] - t) <= 1e-12 * max(1.0, abs(t)):
                return j
        return None

from typing import Optional, Any
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..types import PdfMethod, Regime

# Absolute slack on the Schrodinger-Robertson bound Delta >= 1/4
UNCERTAINTY_TOL = 1e-9

# Slack on the completeness invariant of photon distributions
COMPLETENESS_TOL = 1e-8

# Distributions obtained from a formula that is normalized by construction
_COMPLETE_METHODS = ("exact", "ideal-squeezed", "oracle")


class ReservoirParams(BaseModel):
    """
    Thermal factors of the reservoir and of the initial mode state.

    Args:
        G: Reservoir factor coth(omega/(2 theta)) = 1 + 2<n>_th of the walls.
        G0: The same factor for the initial thermal state of the mode.
        omega0: Reference angular frequency of the unmodulated mode.
    """

    model_config = ConfigDict(frozen=True)

    G: float = Field(1.0, ge=1.0)
    G0: float = Field(1.0, ge=1.0)
    omega0: float = Field(1.0, gt=0.0)


class CovarianceState(BaseModel):
    """
    Zero-mean single-mode Gaussian state.

    Quadratures use the convention where the vacuum has variance 1/2, so the
    mean photon number is (sigma_xx + sigma_pp - 1)/2.

    Args:
        sigma_xx: Variance of the coordinate quadrature.
        sigma_pp: Variance of the momentum quadrature.
        sigma_xp: Symmetrized covariance of the two quadratures.
    """

    model_config = ConfigDict(frozen=True)

    sigma_xx: float = Field(gt=0.0, allow_inf_nan=False)
    sigma_pp: float = Field(gt=0.0, allow_inf_nan=False)
    sigma_xp: float = Field(0.0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_uncertainty(self) -> "CovarianceState":
        if self.Delta < 0.25 - UNCERTAINTY_TOL:
            raise ValueError(
                f"state violates the uncertainty relation: Delta={self.Delta!r} < 1/4"
            )
        return self

    @property
    def tau(self) -> float:
        return self.sigma_xx + self.sigma_pp

    @property
    def Delta(self) -> float:
        return self.sigma_xx * self.sigma_pp - self.sigma_xp**2

    @property
    def N(self) -> float:
        return 0.5 * (self.tau - 1.0)

    @property
    def D_plus(self) -> float:
        return 1.0 + 4.0 * self.Delta + 2.0 * self.tau

    @property
    def D_minus(self) -> float:
        return 1.0 + 4.0 * self.Delta - 2.0 * self.tau

    @property
    def r(self) -> float:
        """Eigenvalue splitting sqrt(tau^2 - 4 Delta) of the covariance matrix."""
        return math.sqrt(max(self.tau**2 - 4.0 * self.Delta, 0.0))

    @classmethod
    def vacuum(cls) -> "CovarianceState":
        return cls(sigma_xx=0.5, sigma_pp=0.5, sigma_xp=0.0)

    @classmethod
    def thermal(cls, n_mean: float) -> "CovarianceState":
        """
        Thermal state with the given mean occupation.

        Args:
            n_mean: Mean photon number, >= 0.

        Returns:
            The state with sigma_xx = sigma_pp = n_mean + 1/2.
        """
        if n_mean < 0:
            raise ValueError(f"n_mean must be >= 0, got {n_mean}")
        return cls(sigma_xx=n_mean + 0.5, sigma_pp=n_mean + 0.5, sigma_xp=0.0)

    @classmethod
    def squeezed_vacuum(cls, r: float, angle: float = 0.0) -> "CovarianceState":
        """
        Pure squeezed vacuum whose major axis makes the given angle with x.

        Args:
            r: Squeeze magnitude; the variances are e^{+-2r}/2.
            angle: Orientation of the stretched quadrature.

        Returns:
            A state with Delta = 1/4 and tau = cosh(2r).
        """
        return cls.from_invariants(math.cosh(2.0 * r), 0.25, angle=angle)

    @classmethod
    def from_invariants(
        cls, tau: float, Delta: float, angle: float = 0.0
    ) -> "CovarianceState":
        """
        Build a state from its trace and determinant.

        Args:
            tau: Trace sigma_xx + sigma_pp.
            Delta: Determinant, 1/4 <= Delta <= tau^2/4.
            angle: Orientation of the major axis of the covariance ellipse.

        Returns:
            The state with the requested invariants.

        Raises:
            ValueError: If no real state has these invariants.
        """
        disc = tau**2 - 4.0 * Delta
        if disc < -1e-12 * tau**2:
            raise ValueError(f"no state with tau={tau!r} and Delta={Delta!r}")
        r = math.sqrt(max(disc, 0.0))
        lam_max = 0.5 * (tau + r)
        # Smaller eigenvalue from the determinant avoids cancellation in tau - r
        lam_min = Delta / lam_max
        c, s = math.cos(angle), math.sin(angle)
        return cls(
            sigma_xx=lam_max * c * c + lam_min * s * s,
            sigma_pp=lam_max * s * s + lam_min * c * c,
            sigma_xp=(lam_max - lam_min) * c * s,
        )

    def rotated(self, t: float) -> "CovarianceState":
        """
        Apply free evolution of the oscillator over the scaled time t.

        Args:
            t: Rotation angle omega0 * elapsed time.

        Returns:
            The state after x -> x cos t + p sin t, p -> -x sin t + p cos t.
        """
        c, s = math.cos(t), math.sin(t)
        xx, pp, xp = self.sigma_xx, self.sigma_pp, self.sigma_xp
        return CovarianceState(
            sigma_xx=xx * c * c + pp * s * s + xp * math.sin(2.0 * t),
            sigma_pp=xx * s * s + pp * c * c - xp * math.sin(2.0 * t),
            sigma_xp=(pp - xx) * c * s + xp * math.cos(2.0 * t),
        )


class DerivedScalars(BaseModel):
    """
    Invariants derived from a covariance state.

    Args:
        tau: Trace of the covariance matrix, 1 + 2N.
        Delta: Determinant of the covariance matrix.
        N: Mean photon number.
        D_plus: 1 + 4 Delta + 2 tau.
        D_minus: 1 + 4 Delta - 2 tau; its sign sets the shape of the distribution.
        mu: Purity 1/(2 sqrt(Delta)).
    """

    model_config = ConfigDict(frozen=True)

    tau: float
    Delta: float
    N: float
    D_plus: float
    D_minus: float
    mu: float = Field(gt=0.0, le=1.0 + 1e-9)


class PhotonDistribution(BaseModel):
    """
    Probabilities f(0..m_max) of detecting m quanta.

    Args:
        values: The probabilities; stored as a read-only float64 array.
        method: How the values were obtained.
        tail_bound: Upper bound on the probability beyond m_max.
        regime: Regime of the source state, when known.
        clamped: True if tiny negative rounding values were set to zero.
        tail_ratio: Asymptotic ratio f(m+1)/f(m) of the tail, when known.
        tau: Trace of the source state, when known.
        Delta: Determinant of the source state, when known.
        G0: Initial-state factor used by small-dissipation formulas, when known.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    method: PdfMethod
    tail_bound: float = Field(ge=0.0)
    regime: Optional[Regime] = None
    clamped: bool = False
    tail_ratio: Optional[float] = Field(None, ge=0.0, lt=1.0)
    tau: Optional[float] = None
    Delta: Optional[float] = None
    G0: Optional[float] = None

    @field_validator("values", mode="before")
    @classmethod
    def _as_readonly_array(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("values must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("values must be finite")
        if np.any(arr < 0.0):
            raise ValueError("values must be non-negative; clamp rounding noise first")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_completeness(self) -> "PhotonDistribution":
        if self.method in _COMPLETE_METHODS:
            total = math.fsum(self.values) + self.tail_bound
            if total < 1.0 - COMPLETENESS_TOL:
                raise ValueError(
                    f"distribution is incomplete: sum + tail_bound = {total!r}"
                )
        return self

    @property
    def m_max(self) -> int:
        return int(self.values.size - 1)

    def __len__(self) -> int:
        return int(self.values.size)

    def __getitem__(self, m: int) -> float:
        return float(self.values[m])

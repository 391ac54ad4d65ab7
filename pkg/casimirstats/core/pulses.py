from typing import Any, List, Literal, Optional, Tuple, Union
from pathlib import Path
import logging
import math
import warnings

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator
from scipy.interpolate import PchipInterpolator
from scipy.integrate import quad

from ..exceptions import PulseValidityWarning, ValidationError
from ..types import ArrayLike

logger = logging.getLogger(__name__)

# Weak-modulation limits assumed by the pulse-train closed forms
MAX_WEAK_CHI = 0.1
MAX_WEAK_LOSS = 0.1


class PulseProfile(BaseModel):
    """
    One pulse of frequency detuning chi(t) and damping gamma(t).

    Times are local to the pulse: the pulse occupies [t_i, t_f] = [0, duration]
    and chi = gamma = 0 outside it. Subclasses implement ``_chi`` and
    ``_gamma`` on the pulse interval.

    Args:
        duration: Length of the pulse in units of 1/omega0.
    """

    model_config = ConfigDict(frozen=True)

    duration: float = Field(gt=0.0, allow_inf_nan=False)

    @property
    def t_i(self) -> float:
        return 0.0

    @property
    def t_f(self) -> float:
        return self.duration

    def _chi(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _gamma(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def kinks(self) -> List[float]:
        """
        Interior times where chi or gamma is not smooth.

        Returns:
            Sorted times strictly inside (0, duration).
        """
        return []

    def chi(self, t: ArrayLike) -> np.ndarray:
        """Frequency detuning at local time t; zero outside the pulse."""
        t = np.asarray(t, dtype=np.float64)
        inside = (t >= 0.0) & (t <= self.duration)
        return np.where(inside, self._chi(np.clip(t, 0.0, self.duration)), 0.0)

    def gamma(self, t: ArrayLike) -> np.ndarray:
        """Damping rate at local time t; zero outside the pulse."""
        t = np.asarray(t, dtype=np.float64)
        inside = (t >= 0.0) & (t <= self.duration)
        return np.where(inside, self._gamma(np.clip(t, 0.0, self.duration)), 0.0)

    def integrate(self, func, weight: Optional[str] = None, wvar: float = 0.0) -> float:
        """
        Integrate a function of local time over the pulse.

        The interval is split at the kinks so each piece is smooth.

        Args:
            func: Scalar function of local time.
            weight: Optional oscillatory weight passed to scipy's quad ("cos" or "sin").
            wvar: Angular frequency of the weight.

        Returns:
            The integral over [0, duration].
        """
        edges = [0.0, *self.kinks(), self.duration]
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            if weight is None:
                value, _ = quad(func, a, b, epsabs=1e-15, epsrel=1e-13, limit=200)
            else:
                value, _ = quad(
                    func, a, b, weight=weight, wvar=wvar,
                    epsabs=1e-15, epsrel=1e-13, limit=200,
                )
            total += value
        return total

    def chi_integral(self) -> float:
        return self.integrate(lambda t: float(self._chi(np.asarray(t))))

    def gamma_integral(self) -> float:
        return self.integrate(lambda t: float(self._gamma(np.asarray(t))))

    def model_post_init(self, __context: Any) -> None:
        if type(self) is not PulseProfile:
            self._check_physical()

    def _check_physical(self) -> None:
        grid = np.union1d(np.linspace(0.0, self.duration, 2001), self.kinks())
        chi = self._chi(grid)
        gamma = self._gamma(grid)
        if np.any(gamma < 0.0):
            raise ValueError("gamma(t) must be non-negative")
        if np.any(1.0 + chi <= 0.0):
            raise ValueError("omega(t) = omega0 (1 + chi(t)) must stay positive")
        if np.max(np.abs(chi)) >= MAX_WEAK_CHI:
            warnings.warn(
                f"max|chi| = {np.max(np.abs(chi)):.3g} is not small compared with 1",
                PulseValidityWarning,
                stacklevel=3,
            )
        loss = self.gamma_integral()
        if loss >= MAX_WEAK_LOSS:
            warnings.warn(
                f"loss per pulse {loss:.3g} is not small compared with 1",
                PulseValidityWarning,
                stacklevel=3,
            )


class RectangularPulse(PulseProfile):
    """
    Constant detuning and damping over the whole pulse.

    Args:
        duration: Length of the pulse.
        chi: Constant detuning epsilon.
        gamma: Constant damping rate.
    """

    shape: Literal["rectangular"] = "rectangular"
    chi_value: float = Field(0.0, alias="chi", allow_inf_nan=False)
    gamma_value: float = Field(0.0, alias="gamma", allow_inf_nan=False)

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    def _chi(self, t: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(t, dtype=np.float64), self.chi_value)

    def _gamma(self, t: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(t, dtype=np.float64), self.gamma_value)

    def chi_integral(self) -> float:
        return self.chi_value * self.duration

    def gamma_integral(self) -> float:
        return self.gamma_value * self.duration


class RiseDecayPulse(PulseProfile):
    """
    Linear rise to a peak followed by exponential decay.

    chi and gamma share the envelope t/rise for t < rise and
    exp(-(t - rise)/decay) afterwards, cut off at the pulse duration. This is
    the shape of a photo-excited semiconductor mirror, where the carrier
    density builds up during the laser pulse and then recombines.

    Args:
        duration: Cut-off time of the pulse, larger than rise.
        chi: Peak detuning.
        gamma: Peak damping rate.
        rise: Rise time of the envelope.
        decay: Exponential decay time of the envelope.
    """

    shape: Literal["rise-decay"] = "rise-decay"
    chi_peak: float = Field(0.0, alias="chi", allow_inf_nan=False)
    gamma_peak: float = Field(0.0, alias="gamma", allow_inf_nan=False)
    rise: float = Field(gt=0.0)
    decay: float = Field(gt=0.0)

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    @model_validator(mode="before")
    @classmethod
    def _check_rise(cls, data: Any) -> Any:
        if isinstance(data, dict):
            rise, duration = data.get("rise"), data.get("duration")
            if rise is not None and duration is not None and float(rise) >= float(duration):
                raise ValueError("rise must be shorter than the pulse duration")
        return data

    def envelope(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return np.where(
            t < self.rise,
            t / self.rise,
            np.exp(-(t - self.rise) / self.decay),
        )

    def kinks(self) -> List[float]:
        return [self.rise]

    def _chi(self, t: np.ndarray) -> np.ndarray:
        return self.chi_peak * self.envelope(t)

    def _gamma(self, t: np.ndarray) -> np.ndarray:
        return self.gamma_peak * self.envelope(t)

    def envelope_integral(self) -> float:
        tail = self.duration - self.rise
        return 0.5 * self.rise + self.decay * -math.expm1(-tail / self.decay)

    def chi_integral(self) -> float:
        return self.chi_peak * self.envelope_integral()

    def gamma_integral(self) -> float:
        return self.gamma_peak * self.envelope_integral()


class SampledPulse(PulseProfile):
    """
    Pulse given on a time grid, interpolated with monotone cubic Hermite splines.

    Args:
        times: Strictly increasing sample times starting at 0.
        chi_samples: Detuning at each sample time.
        gamma_samples: Damping rate at each sample time; zeros if omitted.
    """

    shape: Literal["sampled"] = "sampled"
    times: Tuple[float, ...]
    chi_samples: Tuple[float, ...]
    gamma_samples: Optional[Tuple[float, ...]] = None

    _chi_interp: Any = PrivateAttr(default=None)
    _gamma_interp: Any = PrivateAttr(default=None)

    @model_validator(mode="before")
    @classmethod
    def _fill_duration(cls, data: Any) -> Any:
        if isinstance(data, dict) and "duration" not in data and data.get("times"):
            times = list(data["times"])
            data = {**data, "duration": float(times[-1]) - float(times[0])}
        return data

    @field_validator("times")
    @classmethod
    def _check_times(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        t = np.asarray(v, dtype=np.float64)
        if t.size < 2:
            raise ValueError("at least two samples are required")
        if not np.all(np.isfinite(t)) or np.any(np.diff(t) <= 0.0):
            raise ValueError("sample times must be finite and strictly increasing")
        if t[0] != 0.0:
            raise ValueError("sample times must start at 0")
        return v

    @model_validator(mode="after")
    def _check_lengths(self) -> "SampledPulse":
        n = len(self.times)
        if len(self.chi_samples) != n:
            raise ValueError("chi_samples must have one value per sample time")
        if self.gamma_samples is not None and len(self.gamma_samples) != n:
            raise ValueError("gamma_samples must have one value per sample time")
        if abs(self.duration - self.times[-1]) > 1e-12 * max(1.0, self.times[-1]):
            raise ValueError("duration must equal the last sample time")
        return self

    def model_post_init(self, __context: Any) -> None:
        t = np.asarray(self.times)
        self._chi_interp = PchipInterpolator(t, np.asarray(self.chi_samples))
        gamma = np.zeros_like(t) if self.gamma_samples is None else np.asarray(self.gamma_samples)
        self._gamma_interp = PchipInterpolator(t, gamma)
        super().model_post_init(__context)

    def _chi(self, t: np.ndarray) -> np.ndarray:
        return self._chi_interp(t)

    def _gamma(self, t: np.ndarray) -> np.ndarray:
        return self._gamma_interp(t)

    def chi_integral(self) -> float:
        return float(self._chi_interp.integrate(0.0, self.duration))

    def gamma_integral(self) -> float:
        return float(self._gamma_interp.integrate(0.0, self.duration))

    def kinks(self) -> List[float]:
        # Knots of the spline; interior ones only
        return [float(t) for t in self.times[1:-1]]

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SampledPulse":
        """
        Read a pulse from a whitespace-separated text file.

        Each non-comment line holds ``t chi`` or ``t chi gamma``; times must be
        strictly increasing and are shifted so that the first one is 0.

        Args:
            path: Location of the time series.

        Returns:
            The sampled pulse.

        Raises:
            ValidationError: If the file is malformed.
        """
        path = Path(path)
        try:
            data = np.loadtxt(path, comments="#", ndmin=2)
        except (OSError, ValueError) as e:
            raise ValidationError(
                f"cannot read pulse time series {path}: {e}",
                module="core",
                parameter="pulse.file",
                remedy="use two or three whitespace-separated numeric columns",
            )
        if data.shape[1] not in (2, 3):
            raise ValidationError(
                f"pulse time series {path} has {data.shape[1]} columns, expected 2 or 3",
                module="core",
                parameter="pulse.file",
            )
        times = data[:, 0] - data[0, 0]
        gamma = tuple(data[:, 2]) if data.shape[1] == 3 else None
        logger.debug("Loaded %d pulse samples from %s", len(times), path)
        try:
            return cls(times=tuple(times), chi_samples=tuple(data[:, 1]), gamma_samples=gamma)
        except ValueError as e:
            raise ValidationError(
                f"invalid pulse time series {path}: {e}", module="core", parameter="pulse.file"
            )


class FreeEvolution(PulseProfile):
    """Placeholder profile with chi = gamma = 0, used for trains without pulses."""

    shape: Literal["none"] = "none"

    def _chi(self, t: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(t, dtype=np.float64))

    def _gamma(self, t: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(t, dtype=np.float64))

    def chi_integral(self) -> float:
        return 0.0

    def gamma_integral(self) -> float:
        return 0.0


AnyPulse = Union[RectangularPulse, RiseDecayPulse, SampledPulse, FreeEvolution]


class PulseTrain(BaseModel):
    """
    n identical pulses repeated with a fixed period.

    Pulse k starts at offset + k * period. The mode evolves freely between
    pulses and after the last one until t_end.

    Args:
        profile: Shape of a single pulse.
        n: Number of pulses.
        period: Repetition period; at least the pulse duration.
        offset: Start time of the first pulse.
        t_end: End of the simulated interval; defaults to offset + n * period.
    """

    model_config = ConfigDict(frozen=True)

    profile: AnyPulse
    n: int = Field(ge=0)
    period: float = Field(gt=0.0, allow_inf_nan=False)
    offset: float = Field(0.0, ge=0.0)
    t_end: Optional[float] = None

    @model_validator(mode="after")
    def _check_schedule(self) -> "PulseTrain":
        if self.n > 1 and self.period < self.profile.duration:
            raise ValueError(
                f"period {self.period!r} is shorter than the pulse duration {self.profile.duration!r}"
            )
        if self.t_end is not None and self.t_end < self.last_pulse_end:
            raise ValueError("t_end must not cut the last pulse")
        return self

    @property
    def last_pulse_end(self) -> float:
        if self.n == 0:
            return self.offset
        return self.pulse_start(self.n - 1) + self.profile.duration

    @property
    def end(self) -> float:
        if self.t_end is not None:
            return self.t_end
        return max(self.offset + self.n * self.period, self.last_pulse_end)

    def pulse_start(self, k: int) -> float:
        return self.offset + k * self.period

    def segments(self) -> List[Tuple[float, float, Optional[int]]]:
        """
        Split [0, end] into pulse and free-evolution segments.

        Returns:
            (start, stop, k) triples in time order, with k the pulse index or
            None for free evolution. Zero-length segments are dropped.
        """
        out: List[Tuple[float, float, Optional[int]]] = []
        cursor = 0.0
        for k in range(self.n):
            start = self.pulse_start(k)
            if start > cursor:
                out.append((cursor, start, None))
            stop = start + self.profile.duration
            out.append((start, stop, k))
            cursor = stop
        if self.end > cursor:
            out.append((cursor, self.end, None))
        return out

    def breakpoints(self) -> np.ndarray:
        """
        Times where the coefficients of the mode equation may jump or kink.

        Returns:
            Sorted unique times including 0 and the end of the train.
        """
        points = [0.0, self.end]
        kinks = self.profile.kinks()
        for k in range(self.n):
            start = self.pulse_start(k)
            points.append(start)
            points.append(start + self.profile.duration)
            points.extend(start + kink for kink in kinks)
        return np.unique(np.asarray(points, dtype=np.float64))

    def _local(self, t: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        t = np.asarray(t, dtype=np.float64)
        if self.n == 0:
            return t, np.zeros(t.shape, dtype=bool)
        k = np.clip(np.floor((t - self.offset) / self.period), 0, self.n - 1)
        local = t - (self.offset + k * self.period)
        inside = (local >= 0.0) & (local <= self.profile.duration)
        return local, inside

    def chi(self, t: ArrayLike) -> np.ndarray:
        local, inside = self._local(t)
        return np.where(inside, self.profile.chi(local), 0.0)

    def gamma(self, t: ArrayLike) -> np.ndarray:
        local, inside = self._local(t)
        return np.where(inside, self.profile.gamma(local), 0.0)

    def in_pulse(self, t: ArrayLike) -> np.ndarray:
        """True where t lies strictly inside one of the pulses."""
        local, inside = self._local(t)
        return inside & (local > 0.0) & (local < self.profile.duration)

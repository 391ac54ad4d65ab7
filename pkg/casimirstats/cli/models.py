from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core import (
    CovarianceState,
    FreeEvolution,
    RectangularPulse,
    ReservoirParams,
    RiseDecayPulse,
    SampledPulse,
)
from ..core.pulses import AnyPulse
from ..types import Mode, SummaryRow


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class PulseSection(_Section):
    """
    ``pulse.*`` keys: a pulse shape, or the per-pulse coefficients directly.

    Args:
        shape: rectangular, rise-decay, sampled or none.
        chi: Peak frequency modulation depth.
        gamma: Peak damping rate.
        duration: Pulse length.
        rise: Linear rise time of a rise-decay pulse.
        decay: Exponential decay time of a rise-decay pulse.
        file: Time series with columns t, chi and optionally gamma.
        nu: Gain per pulse, used instead of the shape's value when given.
        Lambda: Loss per pulse, used instead of the shape's value when given.
        phi: Phase shift per pulse, used instead of the shape's value when given.
    """

    shape: Optional[Literal["rectangular", "rise-decay", "sampled", "none"]] = None
    chi: Optional[float] = Field(None, allow_inf_nan=False)
    gamma: Optional[float] = Field(None, ge=0.0, allow_inf_nan=False)
    duration: Optional[float] = Field(None, gt=0.0, allow_inf_nan=False)
    rise: Optional[float] = Field(None, gt=0.0, allow_inf_nan=False)
    decay: Optional[float] = Field(None, gt=0.0, allow_inf_nan=False)
    file: Optional[Path] = None
    nu: Optional[float] = Field(None, ge=0.0, allow_inf_nan=False)
    Lambda: Optional[float] = Field(None, ge=0.0, allow_inf_nan=False)
    phi: Optional[float] = Field(None, allow_inf_nan=False)

    @field_validator("file")
    @classmethod
    def _file_exists(cls, v: Optional[Path]) -> Optional[Path]:
        if v is not None and not v.is_file():
            raise ValueError(f"pulse file {str(v)!r} does not exist")
        return v

    def required_keys(self) -> List[str]:
        """Keys the selected shape needs."""
        if self.shape == "rectangular":
            return ["chi", "gamma", "duration"]
        if self.shape == "rise-decay":
            return ["chi", "gamma", "duration", "rise", "decay"]
        if self.shape == "sampled":
            return ["file"]
        if self.shape == "none":
            return ["duration"]
        return []

    def profile(self) -> AnyPulse:
        """Build the pulse profile for the selected shape."""
        if self.shape == "rectangular":
            return RectangularPulse(chi=self.chi, gamma=self.gamma, duration=self.duration)
        if self.shape == "rise-decay":
            return RiseDecayPulse(
                chi=self.chi,
                gamma=self.gamma,
                duration=self.duration,
                rise=self.rise,
                decay=self.decay,
            )
        if self.shape == "sampled":
            return SampledPulse.from_file(self.file)
        if self.shape == "none":
            return FreeEvolution(duration=self.duration)
        raise ValueError("pulse.shape is not set")


class ReservoirSection(_Section):
    """``reservoir.*`` keys; all default to 1."""

    G: float = Field(1.0, ge=1.0, allow_inf_nan=False)
    G0: float = Field(1.0, ge=1.0, allow_inf_nan=False)
    omega0: float = Field(1.0, gt=0.0, allow_inf_nan=False)

    def params(self) -> ReservoirParams:
        return ReservoirParams(G=self.G, G0=self.G0, omega0=self.omega0)


class ScheduleSection(_Section):
    """
    ``schedule.*`` keys.

    Args:
        n: Number of pulses.
        period: Repetition period, or "auto" for the resonance period of order m.
        m: Resonance order used by the automatic period.
        offset: Start of the first pulse.
    """

    n: Optional[int] = Field(None, ge=0)
    period: Union[Literal["auto"], float] = "auto"
    m: int = Field(1, ge=1)
    offset: float = Field(0.0, ge=0.0, allow_inf_nan=False)

    @field_validator("period")
    @classmethod
    def _positive_period(cls, v: Union[str, float]) -> Union[str, float]:
        if v != "auto" and not (np.isfinite(v) and v > 0):
            raise ValueError("period must be 'auto' or a positive number")
        return v


class StateSection(_Section):
    """``state.*`` keys: a covariance state given directly."""

    sigma_xx: float = Field(gt=0.0, allow_inf_nan=False)
    sigma_pp: float = Field(gt=0.0, allow_inf_nan=False)
    sigma_xp: float = Field(0.0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _physical(self) -> "StateSection":
        self.covariance()
        return self

    def covariance(self) -> CovarianceState:
        return CovarianceState(sigma_xx=self.sigma_xx, sigma_pp=self.sigma_pp, sigma_xp=self.sigma_xp)


class OutputsSection(_Section):
    """
    ``outputs.*`` keys.

    Args:
        m_max: Highest photon number in the distribution table, or "auto".
        moments: Highest moment order reported in the summary, 0 for none.
        distribution: Whether the distribution table is written.
        dir: Output directory, overridden by --out-dir.
    """

    m_max: Union[Literal["auto"], int] = "auto"
    moments: int = Field(0, ge=0, le=8)
    distribution: bool = True
    dir: Optional[Path] = None

    @field_validator("m_max")
    @classmethod
    def _non_negative(cls, v: Union[str, int]) -> Union[str, int]:
        if v != "auto" and v < 0:
            raise ValueError("m_max must be 'auto' or a non-negative integer")
        return v


class SweepSection(_Section):
    """
    ``sweep.*`` keys.

    Args:
        param: Dotted key that is varied, e.g. ``schedule.n``.
        values: Comma-separated list of values.
        range: Inclusive arithmetic range ``start:stop:step``.
        mode: Pipeline evaluated at every point.
    """

    param: str
    values: Optional[List[float]] = None
    range: Optional[str] = None
    mode: Literal["dynamics", "pulsetrain", "pdf"] = "pulsetrain"

    @field_validator("values", mode="before")
    @classmethod
    def _split(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [item.strip() for item in v.split(",") if item.strip()]
        return v

    @field_validator("range")
    @classmethod
    def _range_format(cls, v: Optional[str]) -> Optional[str]:
        if v is not None:
            parts = v.split(":")
            if len(parts) != 3:
                raise ValueError("range must look like start:stop:step")
            start, stop, step = (float(p) for p in parts)
            if step <= 0 or stop < start:
                raise ValueError("range needs step > 0 and stop >= start")
        return v

    @model_validator(mode="after")
    def _one_source(self) -> "SweepSection":
        if (self.values is None) == (self.range is None):
            raise ValueError("give exactly one of sweep.values and sweep.range")
        if "." not in self.param:
            raise ValueError("sweep.param must be a dotted key such as schedule.n")
        return self

    def points(self) -> List[float]:
        """The sweep values in order."""
        if self.values is not None:
            return list(self.values)
        start, stop, step = (float(p) for p in self.range.split(":"))
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]


class ExperimentConfig(_Section):
    """
    A parsed experiment configuration.

    Args:
        mode: Pipeline to run; may also be given on the command line.
        pulse: Pulse shape or coefficients.
        reservoir: Thermal factors and omega0.
        schedule: Number of pulses and their timing.
        state: Covariance state for the pdf pipeline.
        outputs: What to write.
        sweep: Parameter sweep definition.
    """

    mode: Optional[Mode] = None
    pulse: Optional[PulseSection] = None
    reservoir: ReservoirSection = ReservoirSection()
    schedule: ScheduleSection = ScheduleSection()
    state: Optional[StateSection] = None
    outputs: OutputsSection = OutputsSection()
    sweep: Optional[SweepSection] = None


class RunResult(BaseModel):
    """
    Outcome of a run.

    Args:
        exit_code: 0 on success.
        paths: Files written, by table name.
        rows: Summary rows in output order.
    """

    exit_code: int = 0
    paths: Dict[str, Path] = {}
    rows: List[SummaryRow] = []

from .api import thermal_G, derived_scalars, make_state, assemble_covariance
from .models import (
    ReservoirParams,
    CovarianceState,
    DerivedScalars,
    PhotonDistribution,
)
from .pulses import (
    PulseProfile,
    RectangularPulse,
    RiseDecayPulse,
    SampledPulse,
    FreeEvolution,
    PulseTrain,
)

__all__ = [
    "thermal_G",
    "derived_scalars",
    "make_state",
    "assemble_covariance",
    "ReservoirParams",
    "CovarianceState",
    "DerivedScalars",
    "PhotonDistribution",
    "PulseProfile",
    "RectangularPulse",
    "RiseDecayPulse",
    "SampledPulse",
    "FreeEvolution",
    "PulseTrain",
]

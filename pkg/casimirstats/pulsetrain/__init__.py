from .api import (
    pulse_coefficients,
    resonance_period,
    evolve_summary,
    asymptotic_N,
    asymptotic_Delta,
    covariance_from_summary,
)
from .models import PulseTrainSummary

__all__ = [
    "pulse_coefficients",
    "resonance_period",
    "evolve_summary",
    "asymptotic_N",
    "asymptotic_Delta",
    "covariance_from_summary",
    "PulseTrainSummary",
]

"""
casimirstats

Photon statistics of a cavity mode created by a dissipative dynamical
Casimir effect: mode dynamics, closed-form pulse trains, exact and asymptotic
photon distributions, and a number-basis oracle.
"""

__version__ = "0.1.0"

from .exceptions import (
    CasimirStatsError,
    ValidationError,
    ConfigurationError,
    DomainError,
    RegimeError,
    PrecisionError,
    TruncationError,
    IntegrationError,
    RangeError,
    NumericalConsistencyError,
    PreconditionError,
    ValidityWarning,
)
from .config import Configuration
from .core import (
    ReservoirParams,
    CovarianceState,
    DerivedScalars,
    PhotonDistribution,
    RectangularPulse,
    RiseDecayPulse,
    SampledPulse,
    FreeEvolution,
    PulseTrain,
    thermal_G,
    derived_scalars,
)
from .dynamics import simulate, covariance_at, mean_photons
from .pulsetrain import evolve_summary, covariance_from_summary, resonance_period
from .pdf import exact_pdf, asymptotic_distribution, classify_regime
from .stats import invariant_squeezing, number_variance, distribution_moments
from .oracle import decompose, fock_pdf

__all__ = [
    "__version__",
    "CasimirStatsError",
    "ValidationError",
    "ConfigurationError",
    "DomainError",
    "RegimeError",
    "PrecisionError",
    "TruncationError",
    "IntegrationError",
    "RangeError",
    "NumericalConsistencyError",
    "PreconditionError",
    "ValidityWarning",
    "Configuration",
    "ReservoirParams",
    "CovarianceState",
    "DerivedScalars",
    "PhotonDistribution",
    "RectangularPulse",
    "RiseDecayPulse",
    "SampledPulse",
    "FreeEvolution",
    "PulseTrain",
    "thermal_G",
    "derived_scalars",
    "simulate",
    "covariance_at",
    "mean_photons",
    "evolve_summary",
    "covariance_from_summary",
    "resonance_period",
    "exact_pdf",
    "asymptotic_distribution",
    "classify_regime",
    "invariant_squeezing",
    "number_variance",
    "distribution_moments",
    "decompose",
    "fock_pdf",
]

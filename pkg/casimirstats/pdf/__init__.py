from .api import (
    exact_pdf,
    ideal_squeezed_pdf,
    ideal_squeezed_distribution,
    asymptotic_smooth,
    asymptotic_oscillating,
    asymptotic_small_dissipation,
    asymptotic_distribution,
    classify_regime,
    oscillating_ratios,
    expanded_ratios,
)
from .legendre import legendre_eval, legendre_sequence
from .models import LegendreEval

__all__ = [
    "exact_pdf",
    "ideal_squeezed_pdf",
    "ideal_squeezed_distribution",
    "asymptotic_smooth",
    "asymptotic_oscillating",
    "asymptotic_small_dissipation",
    "asymptotic_distribution",
    "classify_regime",
    "oscillating_ratios",
    "expanded_ratios",
    "legendre_eval",
    "legendre_sequence",
    "LegendreEval",
]

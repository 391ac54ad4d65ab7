from .api import (
    default_grid,
    integrate_xi,
    accumulate_quadratures,
    covariance_at,
    mean_photons,
    simulate,
    period_scan,
)
from .models import ModeTrajectory

__all__ = [
    "default_grid",
    "integrate_xi",
    "accumulate_quadratures",
    "covariance_at",
    "mean_photons",
    "simulate",
    "period_scan",
    "ModeTrajectory",
]

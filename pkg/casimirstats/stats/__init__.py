from .api import (
    invariant_squeezing,
    squeezing_asymptote,
    number_variance,
    distribution_moments,
    moment_tail_bound,
    euler_maclaurin_norm_check,
    purity,
    rotated_variance,
    minimize_rotated_variance,
    double_factorial,
    log_double_factorial,
    superchaotic_moment,
)
from .models import SqueezingReport, NormCheck

__all__ = [
    "invariant_squeezing",
    "squeezing_asymptote",
    "number_variance",
    "distribution_moments",
    "moment_tail_bound",
    "euler_maclaurin_norm_check",
    "purity",
    "rotated_variance",
    "minimize_rotated_variance",
    "double_factorial",
    "log_double_factorial",
    "superchaotic_moment",
    "SqueezingReport",
    "NormCheck",
]

from typing import Optional
import logging
import math
import warnings

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln, logsumexp

from ..core import CovarianceState, PhotonDistribution
from ..exceptions import DomainError, PrecisionError, RegimeValidityWarning
from .models import NormCheck, SqueezingReport

logger = logging.getLogger(__name__)

# Highest moment order accepted by distribution_moments
MAX_MOMENT_ORDER = 8

# Allowed truncation error of a moment, relative to its value
MOMENT_RTOL = 1e-6

# Smallest photon number used when fitting the decay of alternating pairs
_PAIR_FIT_START = 10

_COMPLETE_METHODS = ("exact", "ideal-squeezed", "oracle")


def purity(state: CovarianceState) -> float:
    """Purity 1/(2 sqrt(Delta)) of a Gaussian state."""
    return min(1.0, 0.5 / math.sqrt(state.Delta))


def rotated_variance(state: CovarianceState, t: float) -> float:
    """
    Coordinate variance after free evolution over the scaled time t.

    sigma_xx(t) = sigma_xx cos^2 t + sigma_pp sin^2 t + sigma_xp sin 2t.
    """
    c, s = math.cos(t), math.sin(t)
    return state.sigma_xx * c * c + state.sigma_pp * s * s + state.sigma_xp * math.sin(2.0 * t)


def minimize_rotated_variance(state: CovarianceState) -> float:
    """
    Smallest rotated variance, found numerically over one half period.

    A coarse scan brackets the minimum and golden-section search refines it.
    Independent of the closed form in ``invariant_squeezing``.
    """
    grid = np.linspace(0.0, math.pi, 65)
    values = [rotated_variance(state, t) for t in grid]
    i = int(np.argmin(values))
    h = grid[1] - grid[0]
    result = minimize_scalar(
        lambda t: rotated_variance(state, t),
        bracket=(grid[i] - h, grid[i], grid[i] + h),
        method="golden",
        options={"xtol": 1e-12},
    )
    return float(min(result.fun, values[i]))


def squeezing_asymptote(nu: float, Lambda: float, G: float) -> float:
    """
    Limit G Lambda/(nu + Lambda) of S after many resonant pulses.

    Independent of G0. Lambda = 0 gives 0, so a lossless cavity can be
    squeezed without bound.

    Args:
        nu: Gain per pulse.
        Lambda: Loss per pulse.
        G: Reservoir factor.

    Returns:
        The asymptotic squeezing coefficient.

    Raises:
        DomainError: If nu + Lambda == 0.
    """
    if nu < 0 or Lambda < 0:
        raise DomainError("nu and Lambda must be non-negative", module="stats", parameter="nu")
    if nu + Lambda == 0.0:
        raise DomainError("nu + Lambda must be positive", module="stats", parameter="nu")
    if nu <= Lambda:
        warnings.warn(
            f"nu={nu!r} <= Lambda={Lambda!r}: no growth, the asymptote is not approached",
            RegimeValidityWarning,
            stacklevel=2,
        )
    return G * Lambda / (nu + Lambda)


def invariant_squeezing(
    state: CovarianceState,
    *,
    nu: Optional[float] = None,
    Lambda: Optional[float] = None,
    G: Optional[float] = None,
) -> SqueezingReport:
    """
    Invariant squeezing coefficient S = 4 Delta/(tau + sqrt(tau^2 - 4 Delta)).

    S equals twice the minimum over t of sigma_xx(t), so it does not change
    under free evolution.

    Args:
        state: The state.
        nu: Optional gain per pulse.
        Lambda: Optional loss per pulse.
        G: Optional reservoir factor; with nu and Lambda, the report carries
            the pulse-train asymptote.

    Returns:
        The squeezing report.
    """
    S = 4.0 * state.Delta / (state.tau + state.r)
    angle = math.atan2(2.0 * state.sigma_xp, state.sigma_xx - state.sigma_pp)
    t_min = ((angle + math.pi) / 2.0) % math.pi
    asymptote = None
    if nu is not None and Lambda is not None:
        asymptote = squeezing_asymptote(nu, Lambda, 1.0 if G is None else G)
    return SqueezingReport(S=S, t_min=t_min, sigma_min=0.5 * S, asymptote=asymptote)


def number_variance(state: CovarianceState) -> float:
    """
    Variance of the photon number, tau^2/2 - Delta - 1/4.

    Reduces to N (N + 1) for thermal states and approaches 2 N^2 in the
    superchaotic limit.
    """
    return max(0.5 * state.tau**2 - state.Delta - 0.25, 0.0)


def log_double_factorial(n: int) -> float:
    """log n!!, with (-1)!! = 0!! = 1."""
    if n < -1:
        raise DomainError(f"double factorial undefined for {n}", module="stats", parameter="n")
    if n <= 0:
        return 0.0
    if n % 2:
        k = (n + 1) // 2
        return float(gammaln(2 * k + 1) - k * math.log(2.0) - gammaln(k + 1))
    k = n // 2
    return float(k * math.log(2.0) + gammaln(k + 1))


def double_factorial(n: int) -> float:
    return math.exp(log_double_factorial(n))


def superchaotic_moment(N: float, k: int) -> float:
    """Large-N moment N^k (2k - 1)!! of the smooth distribution."""
    return math.exp(k * math.log(N) + log_double_factorial(2 * k - 1)) if k else 1.0


def _check_order(k: int) -> int:
    if int(k) != k or not 0 <= k <= MAX_MOMENT_ORDER:
        raise DomainError(
            f"moment order must be an integer in [0, {MAX_MOMENT_ORDER}], got {k!r}",
            module="stats",
            parameter="k",
        )
    return int(k)


def moment_tail_bound(dist: PhotonDistribution, k: int) -> float:
    """
    Bound on the part of the k-th moment beyond dist.m_max.

    With a known tail ratio lambda the tail is dominated by
    2 max(f(M), f(M-1)) sum_{j>=1} (M + j)^k lambda^j; otherwise the stored
    tail probability is weighted by (2 (M + 1))^k.
    """
    k = _check_order(k)
    M = dist.m_max
    f_end = float(dist.values[-2:].max())
    ratio = dist.tail_ratio
    if ratio is None:
        return dist.tail_bound * (2.0 * (M + 1)) ** k
    if ratio == 0.0 or f_end == 0.0:
        return 0.0
    log_ratio = math.log(ratio)
    J = min(int(math.ceil((2.0 * k + 60.0) / -log_ratio)) + 1, 10_000_000)
    j = np.arange(1, J + 1, dtype=np.float64)
    log_series = float(logsumexp(k * np.log(M + j) + j * log_ratio))
    return math.exp(math.log(2.0 * f_end) + log_series)


def distribution_moments(dist: PhotonDistribution, k: int) -> float:
    """
    k-th raw moment sum_m m^k f(m).

    Args:
        dist: A distribution.
        k: Order, 0..8.

    Returns:
        The moment over the stored range.

    Raises:
        DomainError: If k is outside 0..8.
        PrecisionError: If the truncated tail could change the moment by more
            than one part in a million.
    """
    k = _check_order(k)
    m = np.arange(dist.values.size, dtype=np.float64)
    moment = float(np.dot(m**k, dist.values)) if k else math.fsum(dist.values)
    bound = moment_tail_bound(dist, k)
    if bound > MOMENT_RTOL * abs(moment):
        raise PrecisionError(
            f"tail of the {k}-th moment may reach {bound:.3e} (moment {moment:.6g})",
            module="stats",
            parameter="m_max",
            remedy="evaluate the distribution to a larger m_max",
        )
    return moment


def _source_tau(dist: PhotonDistribution) -> float:
    if dist.tau is not None:
        return dist.tau
    m = np.arange(dist.values.size, dtype=np.float64)
    return 2.0 * float(np.dot(m, dist.values)) + 1.0


def _paired_correction(values: np.ndarray) -> Optional[float]:
    """
    Sum of the alternating amplitude times its decay rate.

    a(k) = (f(2k) - f(2k+1))/2 follows the alternating part of f at
    m = 2k + 1; its decay rate kappa is the slope of
    -log(a sqrt(m + 1/2)).
    """
    pairs = values.size // 2
    if pairs < _PAIR_FIT_START:
        return None
    a = 0.5 * (values[0 : 2 * pairs : 2] - values[1 : 2 * pairs : 2])
    m = 2.0 * np.arange(pairs) + 1.0
    use = (m >= _PAIR_FIT_START) & (a > 0.0)
    if use.sum() < 3:
        return None
    slope = np.polyfit(m[use], np.log(a[use]) + 0.5 * np.log(m[use] + 0.5), 1)[0]
    kappa = -float(slope)
    if kappa <= 0.0:
        return None
    return kappa * float(np.sum(a))


def euler_maclaurin_norm_check(dist: PhotonDistribution) -> NormCheck:
    """
    Compare the sum of a distribution with the prediction for its deficit.

    Summing a density that behaves as x^{-1/2} at small x misses 1 by a term
    of order tau^{-1/2}: zeta(1/2, 1/2)/sqrt(2 pi N) for the smooth regime,
    and [zeta(1/2, 1/2) + A]/sqrt(pi tau) with the alternating constant
    A = 2^{-1/2} (zeta(1/2, 1/4) - zeta(1/2, 3/4)) for the oscillating one.
    For oscillating distributions the alternating pairs are also summed
    separately; their slowly decaying part gives G0/(2 tau).

    Args:
        dist: A distribution, usually from an asymptotic evaluator.

    Returns:
        The report.
    """
    total = math.fsum(dist.values)
    tau = _source_tau(dist)
    scale = 1.0 / math.sqrt(tau)
    hurwitz_half = float(mpmath.zeta(0.5, 0.5))

    if dist.method in _COMPLETE_METHODS:
        estimate = 0.0
    elif dist.method == "asymptotic-smooth":
        N = 0.5 * (tau - 1.0)
        estimate = hurwitz_half / math.sqrt(2.0 * math.pi * N)
    else:
        alternating = (float(mpmath.zeta(0.5, 0.25)) - float(mpmath.zeta(0.5, 0.75))) / math.sqrt(2.0)
        estimate = (hurwitz_half + alternating) / math.sqrt(math.pi * tau)

    paired = None
    if dist.regime == "oscillating":
        paired = _paired_correction(np.asarray(dist.values))
    logger.debug("Norm check: total=%.12g estimate=%.3e paired=%s", total, estimate, paired)
    return NormCheck(total=total, correction_estimate=estimate, scale=scale, paired_correction=paired)

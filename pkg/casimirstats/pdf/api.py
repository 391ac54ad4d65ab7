from typing import Optional, Tuple, Union
import logging
import math
import warnings

import mpmath
import numpy as np
from scipy.special import erfc, gammaln, xlogy

from ..config import Configuration
from ..core import CovarianceState, PhotonDistribution
from ..exceptions import (
    AsymptoticValidityWarning,
    DomainError,
    NumericalConsistencyError,
    PrecisionError,
    RegimeError,
    RegimeValidityWarning,
)
from ..types import ArrayLike, Regime
from .legendre import _three_term_scaled

logger = logging.getLogger(__name__)

# Half-width of the band around D- = 0 reported as the thermal boundary
REGIME_DEAD_BAND = 1e-9

# Bits cancelled in one recurrence step that trigger extended precision
_LOST_BITS_LIMIT = 40.0

# Negative rounding noise that is silently clamped to zero
_CLAMP_TOL = 1e-12

# Decimal digits of the extended-precision fallback
_EXTENDED_DPS = 40

Scalar = Union[float, np.ndarray]


def _as_m(m: ArrayLike) -> np.ndarray:
    arr = np.asarray(m, dtype=np.float64)
    if np.any(arr < 0) or np.any(arr != np.floor(arr)):
        raise DomainError("photon numbers must be non-negative integers", module="pdf", parameter="m")
    return arr


def _ret(arr: np.ndarray) -> Scalar:
    return float(arr) if arr.ndim == 0 else arr


def _tail_ratio(state: CovarianceState) -> float:
    """Asymptotic ratio (delta + 2r)/D+ of consecutive probabilities."""
    return (4.0 * state.Delta - 1.0 + 2.0 * state.r) / state.D_plus


def classify_regime(state: CovarianceState) -> Regime:
    """
    Shape class of the photon distribution of a state.

    D- < 0 gives parity oscillations and D- > 0 a smooth distribution. States
    with |D-| inside the dead band, and states of thermal form whose
    covariance matrix is isotropic (Legendre argument exactly 1), sit on the
    boundary.

    Args:
        state: A valid covariance state.

    Returns:
        "smooth", "oscillating" or "thermal-boundary".
    """
    D_minus = state.D_minus
    if abs(D_minus) < REGIME_DEAD_BAND:
        return "thermal-boundary"
    if state.tau**2 - 4.0 * state.Delta <= REGIME_DEAD_BAND * state.tau**2:
        return "thermal-boundary"
    return "oscillating" if D_minus < 0 else "smooth"


def _extended_values(state: CovarianceState, m_max: int) -> np.ndarray:
    """The folded recurrence in mpmath arithmetic."""
    with mpmath.workdps(_EXTENDED_DPS):
        xx = mpmath.mpf(state.sigma_xx)
        pp = mpmath.mpf(state.sigma_pp)
        xp = mpmath.mpf(state.sigma_xp)
        tau = xx + pp
        Delta = xx * pp - xp * xp
        D_plus = 1 + 4 * Delta + 2 * tau
        a = (4 * Delta - 1) / D_plus
        c = (1 + 4 * Delta - 2 * tau) / D_plus
        f = [2 / mpmath.sqrt(D_plus)]
        if m_max >= 1:
            f.append(f[0] * a)
        for m in range(1, m_max):
            f.append(((2 * m + 1) * a * f[m] - m * c * f[m - 1]) / (m + 1))
        return np.array([float(v) for v in f], dtype=np.float64)


def _exact_values(
    state: CovarianceState, m_max: int, extended_precision: bool
) -> Tuple[np.ndarray, bool]:
    D_plus = state.D_plus
    a = (4.0 * state.Delta - 1.0) / D_plus
    c = state.D_minus / D_plus
    mant, log_scale, lost = _three_term_scaled(a, c, m_max)

    if lost > _LOST_BITS_LIMIT:
        if not extended_precision:
            raise PrecisionError(
                f"recurrence cancelled {lost:.0f} bits near the thermal boundary (D- = {state.D_minus:.3e})",
                module="pdf",
                parameter="state",
                remedy="enable extended_precision",
            )
        logger.info("Cancellation of %.0f bits; recomputing with %d digits", lost, _EXTENDED_DPS)
        values = _extended_values(state, m_max)
    else:
        log_f0 = math.log(2.0) - 0.5 * math.log(D_plus)
        values = mant * np.exp(log_f0 + log_scale)

    negative = values < 0.0
    clamped = bool(negative.any())
    if clamped:
        worst = float(values.min())
        if worst < -_CLAMP_TOL:
            raise NumericalConsistencyError(
                f"negative probability {worst!r} from the exact formula",
                module="pdf",
                remedy="enable extended_precision",
            )
        values = np.where(negative, 0.0, values)
    return values, clamped


def _tail_bounds(values: np.ndarray, ratio: float) -> np.ndarray:
    """Tail bound after truncation at each possible m_max."""
    prev = np.concatenate(([0.0], values[:-1]))
    geometric = 2.0 * np.maximum(values, prev) * ratio / (1.0 - ratio)
    deficit = 1.0 - np.cumsum(values)
    return np.maximum(np.maximum(geometric, deficit), 0.0)


def _initial_guess(ratio: float, target: float) -> int:
    if ratio <= 0.0:
        return 32
    return max(32, int(math.ceil(math.log(0.5 * target * (1.0 - ratio)) / math.log(ratio))))


def exact_pdf(
    state: CovarianceState,
    m_max: Optional[int] = None,
    *,
    extended_precision: bool = True,
    config: Optional[Configuration] = None,
) -> PhotonDistribution:
    """
    Photon distribution of a zero-mean Gaussian state.

    f(m) = 2 D-^{m/2} D+^{-(m+1)/2} P_m(delta/sqrt(D+ D-)) with
    delta = 4 Delta - 1. For D- < 0 the branch sqrt(D-) = i sqrt(|D-|) is used
    throughout; the imaginary units then cancel and every factor is real and
    positive. The powers of D+- are absorbed into the recurrence so that no
    large logarithms are subtracted; at D- = 0 the factor 0^0 is taken as 1.

    Args:
        state: Source state.
        m_max: Highest photon number. By default the smallest m_max whose tail
            bound is below ``config.pdf_tail_target`` is used, capped at
            ``config.m_max_cap``.
        extended_precision: Recompute in 40-digit arithmetic when the
            recurrence loses too many digits; otherwise raise.
        config: Numerical settings; defaults to ``Configuration()``.

    Returns:
        A complete distribution with method "exact".

    Raises:
        DomainError: If m_max is negative.
        PrecisionError: If digits are lost and extended precision is disabled.
        NumericalConsistencyError: If a clearly negative probability appears.
    """
    ratio = _tail_ratio(state)

    if m_max is None:
        config = config or Configuration()
        guess = _initial_guess(ratio, config.pdf_tail_target)
        while True:
            trial = min(guess, config.m_max_cap)
            values, clamped = _exact_values(state, trial, extended_precision)
            bounds = _tail_bounds(values, ratio)
            hits = np.nonzero(bounds < config.pdf_tail_target)[0]
            if hits.size:
                m_max = int(hits[0])
                values = values[: m_max + 1]
                break
            if trial >= config.m_max_cap:
                warnings.warn(
                    f"tail bound {bounds[-1]:.3e} still above target at m_max_cap={config.m_max_cap}",
                    AsymptoticValidityWarning,
                    stacklevel=2,
                )
                m_max = trial
                break
            guess *= 2
        logger.debug("Automatic m_max=%d for tau=%.6g", m_max, state.tau)
    else:
        if int(m_max) != m_max or m_max < 0:
            raise DomainError(f"m_max must be a non-negative integer, got {m_max!r}", module="pdf", parameter="m_max")
        m_max = int(m_max)
        values, clamped = _exact_values(state, m_max, extended_precision)

    tail = float(_tail_bounds(values, ratio)[-1])
    return PhotonDistribution(
        values=values,
        method="exact",
        tail_bound=tail,
        regime=classify_regime(state),
        clamped=clamped,
        tail_ratio=ratio,
        tau=state.tau,
        Delta=state.Delta,
    )


def ideal_squeezed_pdf(n_mean: float, m: ArrayLike) -> Scalar:
    """
    Photon distribution of the pure squeezed vacuum.

    f(2k) = n^k (2k)! / ((1 + n)^{k+1/2} (2^k k!)^2) and f(2k+1) = 0,
    evaluated with log-gamma functions.

    Args:
        n_mean: Mean photon number, >= 0.
        m: Photon number or array of photon numbers.

    Returns:
        The probabilities, with the shape of ``m``.

    Raises:
        DomainError: If n_mean or m is negative.
    """
    if not n_mean >= 0:
        raise DomainError(f"n_mean must be non-negative, got {n_mean!r}", module="pdf", parameter="n_mean")
    m = _as_m(m)
    k = np.floor(m / 2.0)
    log_f = (
        xlogy(k, n_mean)
        + gammaln(2.0 * k + 1.0)
        - (k + 0.5) * math.log1p(n_mean)
        - 2.0 * (k * math.log(2.0) + gammaln(k + 1.0))
    )
    values = np.where(m % 2 == 0, np.exp(log_f), 0.0)
    return _ret(values)


def ideal_squeezed_distribution(
    n_mean: float, m_max: Optional[int] = None, *, config: Optional[Configuration] = None
) -> PhotonDistribution:
    """
    ``ideal_squeezed_pdf`` over 0..m_max as a distribution.

    Args:
        n_mean: Mean photon number.
        m_max: Highest photon number; chosen from the tail target by default.
        config: Numerical settings.

    Returns:
        A distribution with method "ideal-squeezed".
    """
    if not n_mean >= 0:
        raise DomainError(f"n_mean must be non-negative, got {n_mean!r}", module="pdf", parameter="n_mean")
    ratio = math.sqrt(n_mean / (1.0 + n_mean))
    if m_max is None:
        config = config or Configuration()
        m_max = 2 * _initial_guess(ratio, config.pdf_tail_target)
        while True:
            values = ideal_squeezed_pdf(n_mean, np.arange(m_max + 1))
            hits = np.nonzero(_tail_bounds(values, ratio) < config.pdf_tail_target)[0]
            if hits.size or m_max >= config.m_max_cap:
                break
            m_max = min(2 * m_max, config.m_max_cap)
        if hits.size:
            values = values[: int(hits[0]) + 1]
    else:
        values = ideal_squeezed_pdf(n_mean, np.arange(int(m_max) + 1))
    values = np.atleast_1d(values)
    tau = 2.0 * n_mean + 1.0
    return PhotonDistribution(
        values=values,
        method="ideal-squeezed",
        tail_bound=float(_tail_bounds(values, ratio)[-1]),
        regime="thermal-boundary" if n_mean == 0 else "oscillating",
        tail_ratio=ratio,
        tau=tau,
        Delta=0.25,
        G0=1.0,
    )


def asymptotic_smooth(N: float, m: ArrayLike) -> Scalar:
    """
    Large-N density of the superchaotic distribution.

    f(m) ~ exp(-(m + 1/2)/(2N)) / sqrt(2 pi N (m + 1/2)), valid for N >> 1
    and m >> 1 when D- > 0. Its integral over m is exactly 1.

    Args:
        N: Mean photon number.
        m: Photon number or array of photon numbers.

    Returns:
        The approximate probabilities.
    """
    if not N > 0:
        raise DomainError(f"N must be positive, got {N!r}", module="pdf", parameter="N")
    m = _as_m(m)
    if N < 50 or (m.size and m.min() < 5):
        warnings.warn(
            f"smooth asymptote used outside N >> 1, m >> 1 (N={N!r}, min m={m.min() if m.size else None})",
            AsymptoticValidityWarning,
            stacklevel=2,
        )
    return _ret(_smooth_values(N, m))


def _smooth_values(N: float, m: np.ndarray) -> np.ndarray:
    x = m + 0.5
    return np.exp(-x / (2.0 * N) - 0.5 * np.log(2.0 * math.pi * N * x))


def oscillating_ratios(tau: float, Delta: float) -> Tuple[float, float]:
    """
    Bases of the smooth and alternating parts for D- < 0.

    Returns:
        ((2r + delta)/D+, |D-|/(2r + delta)) with r = sqrt(tau^2 - 4 Delta).
    """
    r = math.sqrt(max(tau * tau - 4.0 * Delta, 0.0))
    delta = 4.0 * Delta - 1.0
    D_plus = 1.0 + 4.0 * Delta + 2.0 * tau
    D_minus = 1.0 + 4.0 * Delta - 2.0 * tau
    return (2.0 * r + delta) / D_plus, abs(D_minus) / (2.0 * r + delta)


def expanded_ratios(tau: float, b: float, c: float) -> Tuple[float, float]:
    """
    Leading 1/tau expansions of ``oscillating_ratios`` with 2 Delta = b tau + c.

    Returns:
        (1 - 1/tau, ((1 - b)/(1 + b)) (1 - (b^2 + 2c)/(tau (1 - b^2)))).
    """
    if not 0 <= b < 1:
        raise DomainError(f"b must lie in [0, 1), got {b!r}", module="pdf", parameter="b")
    return (
        1.0 - 1.0 / tau,
        (1.0 - b) / (1.0 + b) * (1.0 - (b * b + 2.0 * c) / (tau * (1.0 - b * b))),
    )


def asymptotic_oscillating(
    tau: float,
    Delta: float,
    m: ArrayLike,
    *,
    b: Optional[float] = None,
    c: Optional[float] = None,
) -> Scalar:
    """
    Large-m distribution with parity oscillations, for D- < 0.

    f(m) ~ [rho1^{m+1/2} + (-1)^m rho2^{m+1/2}] / sqrt(pi (m + 1/2) r),
    the cosine of the uniform approximation written as two exponentials.
    The bases are exact unless ``b`` and ``c`` (2 Delta = b tau + c) are
    given, in which case their 1/tau expansions are used.

    Args:
        tau: Trace of the covariance matrix.
        Delta: Its determinant.
        m: Photon number or array of photon numbers.
        b: Optional slope of Delta in tau.
        c: Optional offset; required together with b.

    Returns:
        The approximate probabilities.

    Raises:
        RegimeError: If D- >= 0.
    """
    D_minus = 1.0 + 4.0 * Delta - 2.0 * tau
    if D_minus >= 0.0:
        raise RegimeError(
            f"D- = {D_minus:.6g} >= 0: the distribution does not oscillate",
            module="pdf",
            parameter="Delta",
            remedy="use asymptotic_smooth",
        )
    if (b is None) != (c is None):
        raise DomainError("b and c must be given together", module="pdf", parameter="b")
    b_check = 2.0 * Delta / tau if b is None else b
    if b_check > 0.9:
        warnings.warn(
            f"b = {b_check:.3g} is close to 1; the oscillating asymptote is unreliable",
            RegimeValidityWarning,
            stacklevel=2,
        )
    m = _as_m(m)
    if b is None:
        rho1, rho2 = oscillating_ratios(tau, Delta)
    else:
        rho1, rho2 = expanded_ratios(tau, b, c)
    r = math.sqrt(max(tau * tau - 4.0 * Delta, 0.0))
    x = m + 0.5
    sign = np.where(m % 2 == 0, 1.0, -1.0)
    log_pref = -0.5 * np.log(math.pi * x * r)
    values = np.exp(x * math.log(rho1) + log_pref) + sign * np.exp(x * math.log(rho2) + log_pref)
    return _ret(values)


def asymptotic_small_dissipation(tau: float, G0: float, m: ArrayLike) -> Scalar:
    """
    Oscillating distribution in the limit of weak losses.

    f(m) ~ [pi tau (m + 1/2)]^{-1/2} {exp(-(m + 1/2)/tau)
    + (-1)^m exp(-(m + 1/2) G0^2/tau)}. At G0 = 1 the odd terms vanish and
    the result coincides with the large-m form of the ideal squeezed vacuum.
    Valid for tau >> 1 and 1 << m << tau^2.

    Args:
        tau: Trace of the covariance matrix.
        G0: Initial-state factor.
        m: Photon number or array of photon numbers.

    Returns:
        The approximate probabilities.
    """
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau!r}", module="pdf", parameter="tau")
    if not G0 >= 1:
        raise DomainError(f"G0 must be >= 1, got {G0!r}", module="pdf", parameter="G0")
    m = _as_m(m)
    if tau < 10 or (m.size and m.max() >= tau * tau / 100.0):
        warnings.warn(
            f"small-dissipation form needs tau >> 1 and m << tau^2 (tau={tau!r})",
            AsymptoticValidityWarning,
            stacklevel=2,
        )
    x = m + 0.5
    sign = np.where(m % 2 == 0, 1.0, -1.0)
    pref = 1.0 / np.sqrt(math.pi * tau * x)
    return _ret(pref * (np.exp(-x / tau) + sign * np.exp(-x * G0 * G0 / tau)))


def asymptotic_distribution(
    state: CovarianceState,
    m_max: Optional[int] = None,
    *,
    config: Optional[Configuration] = None,
) -> PhotonDistribution:
    """
    Regime-appropriate asymptotic distribution of a state over 0..m_max.

    Smooth states use ``asymptotic_smooth`` with N of the state and
    oscillating states use ``asymptotic_oscillating`` with exact bases.

    Args:
        state: Source state.
        m_max: Highest photon number; chosen from the tail target by default.
        config: Numerical settings.

    Returns:
        The asymptotic distribution; it is not complete by construction.

    Raises:
        RegimeError: For states on the thermal boundary, which have no
            asymptotic form distinct from the exact one.
    """
    regime = classify_regime(state)
    if regime == "thermal-boundary":
        raise RegimeError(
            "no asymptotic form on the thermal boundary",
            module="pdf",
            parameter="state",
            remedy="use exact_pdf",
        )
    ratio = _tail_ratio(state)
    if m_max is None:
        config = config or Configuration()
        m_max = min(_initial_guess(ratio, config.pdf_tail_target), config.m_max_cap)
    m = np.arange(int(m_max) + 1, dtype=np.float64)

    if regime == "smooth":
        N = state.N
        if N < 50:
            warnings.warn(f"smooth asymptote at small N={N:.4g}", AsymptoticValidityWarning, stacklevel=2)
        values = _smooth_values(N, m)
        # Integral of the density beyond m_max
        tail = float(erfc(math.sqrt((m_max + 1.0) / (2.0 * N))))
        method = "asymptotic-smooth"
        ratio = math.exp(-1.0 / (2.0 * N))
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeValidityWarning)
            values = np.asarray(asymptotic_oscillating(state.tau, state.Delta, m))
        if 2.0 * state.Delta / state.tau > 0.9:
            warnings.warn("oscillating asymptote with b close to 1", RegimeValidityWarning, stacklevel=2)
        values = np.maximum(values, 0.0)
        tail = 2.0 * float(values[-2:].max()) * ratio / (1.0 - ratio)
        method = "asymptotic-oscillating"

    return PhotonDistribution(
        values=values,
        method=method,
        tail_bound=max(tail, 0.0),
        regime=regime,
        tail_ratio=ratio,
        tau=state.tau,
        Delta=state.Delta,
    )

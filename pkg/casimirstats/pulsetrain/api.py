from typing import Tuple
import logging
import math
import warnings

import numpy as np
import pydantic

from ..core import CovarianceState, PulseProfile
from ..exceptions import (
    AsymptoticValidityWarning,
    DomainError,
    NumericalConsistencyError,
    RegimeError,
    RegimeValidityWarning,
    ValidationError,
)
from .models import PulseTrainSummary, _checked_exp

logger = logging.getLogger(__name__)


def pulse_coefficients(profile: PulseProfile, omega0: float = 1.0) -> Tuple[float, float, float]:
    """
    Gain, loss and phase shift of a single pulse.

    nu = |int omega0 chi(t) e^{-2 i omega0 t} dt|, Lambda = int gamma dt and
    phi = -omega0 int chi dt, all over the pulse.

    The integrals use adaptive quadrature split at the pulse kinks, with the
    oscillating factor as a cos/sin weight of ``quad``. dynamics accumulates
    Gamma by integrating gamma alongside the mode equation at the
    integrator's tolerance instead; both agree to that tolerance, so Lambda
    here equals Gamma over one integrated pulse.

    Args:
        profile: The pulse.
        omega0: Reference angular frequency.

    Returns:
        (nu, Lambda, phi).
    """
    chi = lambda t: float(profile._chi(t))  # noqa: E731
    c = profile.integrate(chi, weight="cos", wvar=2.0 * omega0)
    s = profile.integrate(chi, weight="sin", wvar=2.0 * omega0)
    nu = omega0 * math.hypot(c, s)
    Lambda = profile.gamma_integral()
    phi = -omega0 * profile.chi_integral()
    logger.debug("Pulse coefficients: nu=%.10g Lambda=%.10g phi=%.10g", nu, Lambda, phi)
    return nu, Lambda, phi


def resonance_period(omega0: float, phi: float, m: int) -> float:
    """
    Repetition period that keeps n pulses in parametric resonance.

    Over one period the mode accumulates the phase omega0 * T - phi, which
    must equal m * pi; hence T = (T0/2)(m + phi/pi) with T0 = 2 pi/omega0.
    An asymmetric pulse with positive chi (phi < 0) therefore shortens the
    period.

    Args:
        omega0: Reference angular frequency.
        phi: Phase shift of one pulse, -omega0 * integral of chi.
        m: Resonance order, >= 1.

    Returns:
        The period T.

    Raises:
        DomainError: If m < 1 or the resulting period is not positive.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}", module="pulsetrain", parameter="m")
    if not omega0 > 0:
        raise DomainError(f"omega0 must be positive, got {omega0!r}", module="pulsetrain", parameter="omega0")
    T0 = 2.0 * math.pi / omega0
    T = 0.5 * T0 * (m + phi / math.pi)
    if T <= 0.0:
        raise DomainError(
            f"phase shift {phi!r} leaves no positive period for m={m}",
            module="pulsetrain",
            parameter="phi",
        )
    return T


def evolve_summary(
    nu: float,
    Lambda: float,
    G: float,
    G0: float,
    n: int,
    *,
    phi: float = 0.0,
    beta: float = 0.0,
) -> PulseTrainSummary:
    """
    Closed-form summary of the mode after n resonant pulses.

    E_n = cosh(2 n nu), |E_tilde_n| = sinh(2 n nu), J_n = A+ + A-,
    |J_tilde_n| = |A+ - A-| with
    A+- = G Lambda/(4 (Lambda +- nu)) (e^{+-2 n nu} - e^{-2 n Lambda});
    the removable singularity of A- at nu = Lambda is replaced by its limit.

    Args:
        nu: Gain per pulse.
        Lambda: Loss per pulse.
        G: Reservoir factor.
        G0: Initial-state factor.
        n: Number of pulses.
        phi: Phase shift per pulse, carried along for reporting.
        beta: Constant squeezing phase.

    Returns:
        The summary; N_n and Delta_n are guaranteed to be finite.

    Raises:
        ValidationError: If a parameter is out of range.
        RangeError: If N_n or Delta_n overflows.
    """
    try:
        summary = PulseTrainSummary(nu=nu, Lambda=Lambda, phi=phi, n=n, G=G, G0=G0, beta=beta)
    except pydantic.ValidationError as e:
        err = e.errors()[0]
        raise ValidationError(
            f"Invalid pulse-train parameters: {err['msg']}",
            module="pulsetrain",
            parameter=".".join(str(p) for p in err["loc"]) or None,
        )
    # Fail early rather than on first access
    summary.N
    summary.Delta
    return summary


def asymptotic_N(nu: float, Lambda: float, G: float, G0: float, n: int) -> float:
    """
    Leading exponential term of N_n for nu > Lambda.

    N_n ~ (1/4) e^{2 n (nu - Lambda)} (G0 + G Lambda/(nu - Lambda)).

    Raises:
        RegimeError: If nu <= Lambda, where the photon number does not grow.
        RangeError: If the value overflows.
    """
    if nu <= Lambda:
        raise RegimeError(
            f"no exponential growth for nu={nu!r} <= Lambda={Lambda!r}",
            module="pulsetrain",
            parameter="nu",
            remedy="use evolve_summary for the exact photon number",
        )
    if 2.0 * n * nu < 3.0:
        warnings.warn(
            f"2 n nu = {2.0 * n * nu:.3g} is not large; the asymptote is inaccurate",
            AsymptoticValidityWarning,
            stacklevel=2,
        )
    log_value = (
        2.0 * n * (nu - Lambda)
        - math.log(4.0)
        + math.log(G0 + G * Lambda / (nu - Lambda))
    )
    return _checked_exp(log_value, "N_n")


def asymptotic_Delta(nu: float, Lambda: float, G: float, N_n: float) -> float:
    """
    Leading term Delta_n ~ N_n G Lambda/(nu + Lambda).

    The ratio Delta_n/N_n does not depend on G0.

    Raises:
        DomainError: If nu + Lambda == 0.
    """
    if nu + Lambda <= 0.0:
        raise DomainError("nu + Lambda must be positive", module="pulsetrain", parameter="nu")
    if nu <= Lambda:
        warnings.warn(
            f"nu={nu!r} <= Lambda={Lambda!r}: the mode does not grow and the ratio is not reached",
            RegimeValidityWarning,
            stacklevel=2,
        )
    return N_n * G * Lambda / (nu + Lambda)


def covariance_from_summary(summary: PulseTrainSummary) -> CovarianceState:
    """
    Covariance state after the pulse train.

    With the representative amplitude xi = cosh(n nu) + sinh(n nu) e^{i beta}
    the assembled moments at beta = 0 are diagonal,
    sigma_xx = e^{2 n nu} (2 A- + g0) and sigma_pp = e^{-2 n nu} (2 A+ + g0)
    with g0 = (G0/2) e^{-2 n Lambda}; a nonzero beta rotates that state by
    beta/2. Both entries are formed from logarithms.

    Args:
        summary: Result of ``evolve_summary``.

    Returns:
        A state with tau = 1 + 2 N_n and determinant Delta_n.

    Raises:
        RangeError: If a variance overflows.
        NumericalConsistencyError: If the moments are not a valid state.
    """
    log_2 = math.log(2.0)
    log_xx = summary.x + float(np.logaddexp(log_2 + summary.log_A_minus, summary.log_g0))
    log_pp = -summary.x + float(np.logaddexp(log_2 + summary.log_A_plus, summary.log_g0))
    sigma_xx = _checked_exp(log_xx, "sigma_xx")
    sigma_pp = _checked_exp(log_pp, "sigma_pp")
    try:
        state = CovarianceState(sigma_xx=sigma_xx, sigma_pp=sigma_pp, sigma_xp=0.0)
        if summary.beta != 0.0:
            state = state.rotated(0.5 * summary.beta)
    except pydantic.ValidationError as e:
        raise NumericalConsistencyError(
            f"pulse-train moments are not a physical state: {e.errors()[0]['msg']}",
            module="pulsetrain",
        )
    return state

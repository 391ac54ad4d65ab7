from typing import Optional
import math

import numpy as np
import pydantic

from ..exceptions import DomainError, NumericalConsistencyError, ValidationError
from .models import CovarianceState, DerivedScalars


def thermal_G(omega: float, theta: float) -> float:
    """
    Thermal factor G = coth(omega/(2 theta)) = 1 + 2<n>_th.

    Args:
        omega: Angular frequency, > 0.
        theta: Temperature in units where hbar*omega/k_B is the scale, >= 0.

    Returns:
        The factor; exactly 1 at theta = 0.

    Raises:
        DomainError: If omega <= 0 or theta < 0.
    """
    if not omega > 0:
        raise DomainError(
            f"omega must be positive, got {omega!r}", module="core", parameter="omega"
        )
    if not theta >= 0:
        raise DomainError(
            f"theta must be non-negative, got {theta!r}", module="core", parameter="theta"
        )
    if theta == 0:
        return 1.0
    x = omega / (2.0 * theta)
    if x == 0.0:
        return math.inf
    # coth x = 1 + 2/(e^{2x} - 1)
    return 1.0 + 2.0 / math.expm1(2.0 * x)


def derived_scalars(state: CovarianceState) -> DerivedScalars:
    """
    Compute the invariants of a covariance state.

    Args:
        state: A valid covariance state.

    Returns:
        tau, Delta, N, D_plus, D_minus and the purity mu.
    """
    Delta = state.Delta
    return DerivedScalars(
        tau=state.tau,
        Delta=Delta,
        N=state.N,
        D_plus=state.D_plus,
        D_minus=state.D_minus,
        mu=min(1.0, 1.0 / (2.0 * math.sqrt(Delta))),
    )


def make_state(sigma_xx: float, sigma_pp: float, sigma_xp: float = 0.0) -> CovarianceState:
    """
    Construct a covariance state, reporting violations as ValidationError.

    Raises:
        ValidationError: If the variances are not positive or Delta < 1/4.
    """
    try:
        return CovarianceState(sigma_xx=sigma_xx, sigma_pp=sigma_pp, sigma_xp=sigma_xp)
    except pydantic.ValidationError as e:
        raise ValidationError(
            f"Invalid covariance state: {e.errors()[0]['msg']}",
            module="core",
            parameter="state",
        )


def assemble_covariance(
    xi: complex,
    xi_dot: complex,
    J_eff: float,
    J_tilde: complex,
    *,
    module: str = "core",
    time: Optional[float] = None,
) -> CovarianceState:
    """
    Second moments of the mode from its classical amplitude and noise integrals.

    Args:
        xi: Mode amplitude.
        xi_dot: Its derivative with respect to omega0 * t.
        J_eff: Real quadrature J + G0 exp(-2 Gamma)/2, including the initial state.
        J_tilde: Complex quadrature.
        module: Module name reported on failure.
        time: Time reported on failure.

    Returns:
        The covariance state.

    Raises:
        NumericalConsistencyError: If the assembled moments are not a valid state.
    """
    xi_c, xid_c = np.conj(xi), np.conj(xi_dot)
    sigma_xx = abs(xi) ** 2 * J_eff - (xi_c**2 * J_tilde).real
    sigma_pp = abs(xi_dot) ** 2 * J_eff - (xid_c**2 * J_tilde).real
    sigma_xp = (xi * xid_c * J_eff - xi_c * xid_c * J_tilde).real
    try:
        return CovarianceState(
            sigma_xx=float(sigma_xx), sigma_pp=float(sigma_pp), sigma_xp=float(sigma_xp)
        )
    except pydantic.ValidationError as e:
        where = "" if time is None else f" at t={time!r}"
        raise NumericalConsistencyError(
            f"assembled moments are not a physical state{where}: {e.errors()[0]['msg']}",
            module=module,
            remedy="tighten the integrator tolerances (rtol/atol)",
        )

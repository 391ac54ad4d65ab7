from typing import List
import math
import warnings

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import logsumexp

from ..exceptions import PulseValidityWarning, RangeError

# Largest natural logarithm representable as a float64
LOG_FLOAT_MAX = math.log(np.finfo(np.float64).max)

_LOG2 = math.log(2.0)


def log_cosh(x: float) -> float:
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - _LOG2


def log_sinh(x: float) -> float:
    """log sinh(x) for x >= 0; -inf at 0."""
    if x == 0.0:
        return -math.inf
    if x < 1.0:
        return math.log(math.sinh(x))
    return x - _LOG2 + math.log1p(-math.exp(-2.0 * x))


def log_expm1(y: float) -> float:
    """log(e^y - 1) for y > 0."""
    if y > 1.0:
        return y + math.log1p(-math.exp(-y))
    return math.log(math.expm1(y))


def log_h(z: float, n: int) -> float:
    """log of (e^{2nz} - 1)/z, continued to 2n at z = 0."""
    y = 2.0 * n * z
    if abs(y) < 1e-8:
        return math.log(2.0 * n) + math.log1p(n * z)
    if z > 0.0:
        return log_expm1(y) - math.log(z)
    return math.log(-math.expm1(y)) - math.log(-z)


def _checked_exp(log_value: float, quantity: str) -> float:
    if log_value > LOG_FLOAT_MAX:
        raise RangeError(
            f"{quantity} overflows double precision (log = {log_value:.6g})",
            quantity=quantity,
            module="pulsetrain",
            remedy="reduce the number of pulses or report the logarithm instead",
        )
    return math.exp(log_value)


class PulseTrainSummary(BaseModel):
    """
    Closed-form state of the mode after n identical resonant pulses.

    All derived quantities are evaluated from logarithms so that 2 n nu can
    reach several hundred before anything overflows.

    Args:
        nu: Parametric gain per pulse.
        Lambda: Loss per pulse, the integral of gamma over one pulse.
        phi: Phase shift -omega0 * integral of chi over one pulse.
        n: Number of pulses.
        G: Reservoir factor.
        G0: Initial-state factor.
        beta: Constant phase of the squeezing axis; no statistic depends on it.
    """

    model_config = ConfigDict(frozen=True)

    nu: float = Field(ge=0.0, allow_inf_nan=False)
    Lambda: float = Field(ge=0.0, allow_inf_nan=False)
    phi: float = 0.0
    n: int = Field(ge=0)
    G: float = Field(1.0, ge=1.0)
    G0: float = Field(1.0, ge=1.0)
    beta: float = 0.0

    @model_validator(mode="after")
    def _check_weak(self) -> "PulseTrainSummary":
        if self.nu > 0.1 or self.Lambda > 0.1:
            warnings.warn(
                f"closed forms assume nu, Lambda << 1 (nu={self.nu!r}, Lambda={self.Lambda!r})",
                PulseValidityWarning,
                stacklevel=2,
            )
        return self

    @property
    def x(self) -> float:
        return 2.0 * self.n * self.nu

    @property
    def log_E(self) -> float:
        return log_cosh(self.x)

    @property
    def log_E_tilde_abs(self) -> float:
        return log_sinh(self.x)

    @property
    def log_g0(self) -> float:
        """log of (G0/2) e^{-2 n Lambda}, the decayed initial-state term."""
        return math.log(0.5 * self.G0) - 2.0 * self.n * self.Lambda

    @property
    def log_A_plus(self) -> float:
        if self.Lambda == 0.0 or self.n == 0:
            return -math.inf
        return (
            math.log(0.25 * self.G * self.Lambda)
            - math.log(self.Lambda + self.nu)
            - 2.0 * self.n * self.Lambda
            + log_expm1(2.0 * self.n * (self.nu + self.Lambda))
        )

    @property
    def log_A_minus(self) -> float:
        if self.Lambda == 0.0 or self.n == 0:
            return -math.inf
        return (
            math.log(0.25 * self.G * self.Lambda)
            - 2.0 * self.n * self.Lambda
            + log_h(self.Lambda - self.nu, self.n)
        )

    @property
    def log_N_plus_half(self) -> float:
        """log(N_n + 1/2)."""
        terms: List[float] = [
            self.log_A_plus - self.x,
            self.log_A_minus + self.x,
            self.log_g0 + self.log_E,
        ]
        return float(logsumexp(terms))

    @property
    def log_Delta(self) -> float:
        log_2 = _LOG2
        return float(
            np.logaddexp(log_2 + self.log_A_plus, self.log_g0)
            + np.logaddexp(log_2 + self.log_A_minus, self.log_g0)
        )

    @property
    def E(self) -> float:
        return _checked_exp(self.log_E, "E_n")

    @property
    def E_tilde_abs(self) -> float:
        return _checked_exp(self.log_E_tilde_abs, "E_tilde_n")

    @property
    def A_plus(self) -> float:
        return _checked_exp(self.log_A_plus, "A_n_plus")

    @property
    def A_minus(self) -> float:
        return _checked_exp(self.log_A_minus, "A_n_minus")

    @property
    def J(self) -> float:
        return self.A_plus + self.A_minus

    @property
    def J_tilde(self) -> complex:
        return complex(np.exp(1j * self.beta) * (self.A_plus - self.A_minus))

    @property
    def J_tilde_abs(self) -> float:
        return abs(self.A_plus - self.A_minus)

    @property
    def N(self) -> float:
        return _checked_exp(self.log_N_plus_half, "N_n") - 0.5

    @property
    def Delta(self) -> float:
        return _checked_exp(self.log_Delta, "Delta_n")

    def log_unimodularity(self) -> float:
        """
        log(E_n^2 - |E_tilde_n|^2), which is exactly 0.

        Evaluated as 2 log sinh x + log(expm1(2 log coth x)) with
        log coth x = 2 atanh(e^{-2x}), so it stays accurate where cosh and
        sinh themselves would overflow.
        """
        x = self.x
        if x == 0.0:
            return 0.0
        log_q = -2.0 * x
        if log_q < -30.0:
            # atanh(q) = q (1 + q^2/3 + ...)
            log_d = _LOG2 + log_q
        else:
            log_d = math.log(2.0 * math.atanh(math.exp(log_q)))
        d = math.exp(log_d)
        if d < 1e-8:
            log_tail = _LOG2 + log_d + d
        else:
            log_tail = math.log(math.expm1(2.0 * d))
        return 2.0 * self.log_E_tilde_abs + log_tail

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class SqueezingReport(BaseModel):
    """
    Invariant squeezing of a state.

    Args:
        S: Twice the smallest quadrature variance over all phases; below 1
            only for squeezed states.
        t_min: Phase in [0, pi) at which the rotated variance sigma_xx(t) is
            smallest.
        sigma_min: That smallest variance, S/2.
        asymptote: G Lambda/(nu + Lambda) when pulse-train parameters were given.
    """

    model_config = ConfigDict(frozen=True)

    S: float = Field(gt=0.0)
    t_min: float
    sigma_min: float = Field(gt=0.0)
    asymptote: Optional[float] = None

    @property
    def squeezed(self) -> bool:
        return self.S < 1.0


class NormCheck(BaseModel):
    """
    Normalization report of a distribution.

    Args:
        total: Sum of the stored probabilities.
        correction_estimate: Predicted deviation of the full sum from 1 for an
            asymptotic distribution; 0 for complete ones.
        scale: tau^{-1/2}, the order of magnitude of the deviation.
        paired_correction: For oscillating distributions, the contribution of
            the slowly decaying alternating pairs; close to G0/(2 tau).
    """

    model_config = ConfigDict(frozen=True)

    total: float
    correction_estimate: float
    scale: float = Field(ge=0.0)
    paired_correction: Optional[float] = None

    @property
    def deviation(self) -> float:
        return self.total - 1.0

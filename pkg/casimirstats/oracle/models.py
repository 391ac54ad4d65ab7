import math

from pydantic import BaseModel, ConfigDict, Field

from ..core import CovarianceState


class SqueezedThermalDecomposition(BaseModel):
    """
    A Gaussian state written as a squeezed thermal state.

    The covariance matrix equals (n_bar + 1/2) R(theta) diag(e^{2r}, e^{-2r}) R(theta)^T.

    Args:
        n_bar: Thermal occupation, from 1 + 2 n_bar = 2 sqrt(Delta).
        r: Squeeze magnitude.
        theta: Orientation of the stretched quadrature.
    """

    model_config = ConfigDict(frozen=True)

    n_bar: float = Field(ge=0.0)
    r: float = Field(ge=0.0)
    theta: float = 0.0

    def covariance(self) -> CovarianceState:
        """Rebuild the covariance state."""
        nu = self.n_bar + 0.5
        return CovarianceState.from_invariants(
            2.0 * nu * math.cosh(2.0 * self.r), nu * nu, angle=self.theta
        )

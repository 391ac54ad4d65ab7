import cmath
import math

from pydantic import BaseModel, ConfigDict, Field


class LegendreEval(BaseModel):
    """
    A Legendre polynomial value stored as mantissa and exponent.

    P_m(argument) = value * exp(log_scale); the split lets degrees in the
    hundreds of thousands be represented without overflow.

    Args:
        degree: Polynomial degree m.
        argument: Point of evaluation, real or complex.
        log_scale: Natural logarithm of the accumulated rescaling factor.
        value: Scaled polynomial value.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    degree: int = Field(ge=0)
    argument: complex
    log_scale: float
    value: complex

    @property
    def polynomial(self) -> complex:
        """The unscaled value; overflows to inf for very large results."""
        if self.value == 0:
            return 0j
        try:
            return self.value * cmath.exp(self.log_scale)
        except OverflowError:
            return complex(math.inf, 0.0)

    @property
    def log_abs(self) -> float:
        """log |P_m(argument)|; -inf at a zero."""
        if self.value == 0:
            return -math.inf
        return math.log(abs(self.value)) + self.log_scale

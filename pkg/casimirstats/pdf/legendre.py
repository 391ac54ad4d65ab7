"""
Scaled three-term recurrences of Legendre type.

Every sequence used by the package obeys

    (m + 1) y[m+1] = (2m + 1) a y[m] - m c y[m-1],   y[0] = 1, y[1] = a.

With c = 1 this is the Legendre recurrence for P_m(a). With c = -1 and a = y
it yields Q_m = i^{-m} P_m(i y), which is positive term by term. With
a = delta/D+ and c = D-/D+ it yields f(m) sqrt(D+)/2 directly, the photon
distribution with its D+- powers folded into the coefficients.

For a real argument outside (-1, 1) the wanted solution dominates, so the
upward direction is stable. Both carried terms are rescaled by a power of two
after every step and the exponent is accumulated separately.
"""

from typing import Tuple, Union
import math

import numpy as np
from scipy.special import ive

from ..exceptions import DomainError
from .models import LegendreEval

_LN2 = math.log(2.0)

Number = Union[float, complex]


def _three_term_scaled(a: Number, c: Number, m_max: int) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Run the recurrence up to m_max.

    Args:
        a: Diagonal coefficient.
        c: Coefficient of the two-steps-back term.
        m_max: Highest index, >= 0.

    Returns:
        (mantissa, log_scale, lost_bits): y[m] = mantissa[m] * exp(log_scale[m]),
        and the largest number of bits cancelled in a single step.
    """
    is_complex = isinstance(a, complex) or isinstance(c, complex)
    mant = np.zeros(m_max + 1, dtype=np.complex128 if is_complex else np.float64)
    log_scale = np.zeros(m_max + 1)
    mant[0] = 1.0
    if m_max == 0:
        return mant, log_scale, 0.0

    prev, cur, L = 1.0, a, 0.0
    mant[1] = cur
    lost = 0.0
    for m in range(1, m_max):
        u = (2 * m + 1) * a * cur
        v = m * c * prev
        diff = u - v
        big = max(abs(u), abs(v))
        if big > 0.0 and abs(diff) < 0.25 * big:
            lost = max(lost, math.inf if diff == 0 else math.log2(big / abs(diff)))
        prev, cur = cur, diff / (m + 1)

        norm = max(abs(cur), abs(prev))
        if norm == 0.0:
            break
        shift = math.frexp(norm)[1] - 1
        if shift:
            factor = math.ldexp(1.0, -shift)
            prev *= factor
            cur *= factor
            L += shift * _LN2
        mant[m + 1] = cur
        log_scale[m + 1] = L
    return mant, log_scale, lost


def legendre_sequence(z: Number, m_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    P_0(z) .. P_{m_max}(z) in mantissa/exponent form.

    Args:
        z: Argument; real or complex.
        m_max: Highest degree.

    Returns:
        (mantissa, log_scale) arrays of length m_max + 1.
    """
    if int(m_max) != m_max or m_max < 0:
        raise DomainError(f"degree must be a non-negative integer, got {m_max!r}", module="pdf", parameter="m")
    mant, log_scale, _ = _three_term_scaled(z, 1.0, int(m_max))
    return mant, log_scale


def legendre_eval(m: int, z: Number) -> LegendreEval:
    """
    Evaluate P_m(z) by the scaled upward recurrence.

    Args:
        m: Degree, >= 0.
        z: Argument; the recurrence is stable for real |z| >= 1 and for
            purely imaginary z.

    Returns:
        The scaled value.

    Raises:
        DomainError: If m is negative or not an integer.
    """
    mant, log_scale = legendre_sequence(z, m)
    return LegendreEval(
        degree=int(m),
        argument=complex(z),
        log_scale=float(log_scale[-1]),
        value=complex(mant[-1]),
    )


def _olver_log_legendre(m: int, x: float) -> float:
    """
    Uniform large-degree approximation of log P_m(x) for x > 1.

    P_m(cosh t) ~ sqrt(t/sinh t) I_0((m + 1/2) t), with relative error O(1/m)
    uniformly in t. Used only to cross-check the recurrence.
    """
    t = math.acosh(x)
    if t == 0.0:
        return 0.0
    nu = (m + 0.5) * t
    return 0.5 * math.log(t / math.sinh(t)) + math.log(float(ive(0, nu))) + nu

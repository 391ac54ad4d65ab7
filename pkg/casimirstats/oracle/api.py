"""
Brute-force photon statistics in a truncated number basis.

Nothing here uses Legendre functions or the D+- invariants, so agreement
with ``casimirstats.pdf`` is an independent check.
"""

from typing import Optional
import logging
import math

import numpy as np
from scipy.linalg import expm
from scipy.special import xlogy

from ..core import CovarianceState, PhotonDistribution
from ..exceptions import NumericalConsistencyError, TruncationError
from .models import SqueezedThermalDecomposition

logger = logging.getLogger(__name__)

# Largest dense basis the oracle will build
MAX_DIM = 4000

# Probability allowed to leak past the usable part of the basis
TRUNCATION_TOL = 1e-6

# Allowed deviation of U^T U from the identity on the interior block
ORTHOGONALITY_TOL = 1e-9

# Fraction of the basis at its upper edge treated as unreliable
_EDGE_FRACTION = 0.05


def decompose(state: CovarianceState) -> SqueezedThermalDecomposition:
    """
    Split a state into thermal occupation, squeeze and orientation.

    Args:
        state: A valid covariance state.

    Returns:
        n_bar from the symplectic eigenvalue sqrt(Delta), r from the ratio of
        the largest covariance eigenvalue to sqrt(Delta) and theta from the
        orientation of the major axis.
    """
    root = math.sqrt(state.Delta)
    n_bar = max(root - 0.5, 0.0)
    lam_max = 0.5 * (state.tau + state.r)
    r = max(0.5 * math.log(lam_max / root), 0.0)
    theta = 0.5 * math.atan2(2.0 * state.sigma_xp, state.sigma_xx - state.sigma_pp)
    return SqueezedThermalDecomposition(n_bar=n_bar, r=r, theta=theta)


def default_dim(decomp: SqueezedThermalDecomposition) -> int:
    """Basis size large enough for the thermal and squeeze tails."""
    growth = math.exp(2.0 * decomp.r)
    tau = (2.0 * decomp.n_bar + 1.0) * math.cosh(2.0 * decomp.r)
    dim = max(8.0 * (decomp.n_bar + 1.0) * growth + 20.0, 25.0 * tau + 60.0)
    return int(min(math.ceil(dim), MAX_DIM))


def _thermal_weights(n_bar: float, dim: int) -> np.ndarray:
    n = np.arange(dim, dtype=np.float64)
    return np.exp(xlogy(n, n_bar) - (n + 1.0) * math.log1p(n_bar))


def fock_pdf(
    decomp: SqueezedThermalDecomposition, dim: Optional[int] = None
) -> PhotonDistribution:
    """
    Photon distribution from an explicit squeezed thermal density matrix.

    The squeeze operator exp(r (a^2 - a^dag^2)/2) is built as a dense matrix
    exponential in a basis of ``dim`` number states and applied to the
    diagonal thermal state; the distribution is then
    f(m) = sum_n p_n |U_mn|^2. The orientation does not enter photon
    statistics.

    Args:
        decomp: The state to evaluate.
        dim: Basis size; by default ``default_dim(decomp)``.

    Returns:
        A distribution with method "oracle" over the rows not affected by
        the truncation edge.

    Raises:
        TruncationError: If more than 1e-6 of the probability reaches the
            edge of the basis or lies beyond it.
        NumericalConsistencyError: If the transformation is not orthogonal.
    """
    dim = default_dim(decomp) if dim is None else int(dim)
    if dim < 2:
        raise TruncationError(f"basis of {dim} states is too small", module="oracle", parameter="dim")

    lowering = np.diag(np.sqrt(np.arange(1.0, dim)), k=1)
    generator = 0.5 * decomp.r * (lowering @ lowering - lowering.T @ lowering.T)
    U = expm(generator)

    interior = dim - int(math.ceil(4.0 * math.exp(2.0 * decomp.r)))
    if interior > 0:
        gram = U.T[:interior] @ U[:, :interior]
        orth_error = float(np.max(np.abs(gram - np.eye(interior))))
        if orth_error > ORTHOGONALITY_TOL:
            raise NumericalConsistencyError(
                f"squeeze transformation is not orthogonal (error {orth_error:.2e})",
                module="oracle",
            )

    weights = _thermal_weights(decomp.n_bar, dim)
    values = (U * U) @ weights
    thermal_tail = (decomp.n_bar / (decomp.n_bar + 1.0)) ** dim

    keep = dim - max(1, int(math.ceil(_EDGE_FRACTION * dim)))
    edge_mass = float(np.sum(values[keep:]))
    tail = thermal_tail + edge_mass
    logger.debug("Oracle dim=%d edge mass=%.3e thermal tail=%.3e", dim, edge_mass, thermal_tail)
    if tail > TRUNCATION_TOL:
        raise TruncationError(
            f"{tail:.3e} of the probability reaches the edge of a {dim}-state basis",
            module="oracle",
            parameter="dim",
            remedy="increase dim",
        )

    state = decomp.covariance()
    return PhotonDistribution(
        values=np.clip(values[:keep], 0.0, None),
        method="oracle",
        tail_bound=tail,
        tau=state.tau,
        Delta=state.Delta,
    )

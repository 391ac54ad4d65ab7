from functools import lru_cache
from typing import List, Optional, Sequence, Tuple
import logging
import math
import warnings

import numpy as np
from scipy.integrate import cumulative_simpson, simpson, solve_ivp

from ..config import Configuration
from ..core import CovarianceState, PulseProfile, PulseTrain, ReservoirParams, assemble_covariance
from ..exceptions import IntegrationError, PreconditionError, PulseValidityWarning
from .models import ModeTrajectory

logger = logging.getLogger(__name__)

# Drift of Im(xi conj(xi_dot)) from 1 that aborts an integration
WRONSKIAN_FAIL = 1e-6

# Drift that is reported but tolerated
WRONSKIAN_WARN = 1e-9

# Richardson error estimate of a segment quadrature that gets reported
QUADRATURE_WARN = 1e-8


class _PulsePropagator:
    """
    Fundamental matrix of the mode equation across one pulse.

    The two real solutions with (q, q') = (1, 0) and (0, 1) at the pulse start
    form the columns of Phi(s); any complex solution is Phi(s) @ (xi, xi_dot)
    at the start. Each smooth piece between kinks is integrated separately
    and the pieces are composed.
    """

    def __init__(self, profile: PulseProfile, omega0: float, rtol: float, atol: float):
        self.profile = profile
        self.omega0 = omega0
        self.pieces: List[Tuple[float, float, object, np.ndarray, float]] = []
        self.nfev = 0

        edges = [0.0, *profile.kinks(), profile.duration]
        start_matrix = np.eye(2)
        start_Gamma = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            sol = self._solve_piece(a, b, rtol, atol)
            self.pieces.append((a, b, sol, start_matrix, start_Gamma))
            y_end = sol.y[:, -1]
            start_matrix = _as_matrix(y_end[:4]) @ start_matrix
            start_Gamma += y_end[4]

        det = float(np.linalg.det(start_matrix))
        self.det_deviation = abs(det - 1.0)
        if self.det_deviation > WRONSKIAN_FAIL:
            raise IntegrationError(
                f"pulse transfer matrix lost unimodularity (det-1 = {det - 1.0:.3e})",
                time=profile.duration,
                module="dynamics",
                remedy="lower rtol/atol or increase samples per pulse",
            )
        # Project onto det = 1 so that chaining many pulses keeps the Wronskian
        self.end_matrix = start_matrix / math.sqrt(det)
        self.end_Gamma = start_Gamma
        logger.debug(
            "Integrated pulse over [0, %g]: %d pieces, %d rhs evaluations, det-1=%.2e, Lambda=%.6g",
            profile.duration, len(self.pieces), self.nfev, det - 1.0, start_Gamma,
        )

    def _solve_piece(self, a: float, b: float, rtol: float, atol: float):
        omega0 = self.omega0
        profile = self.profile

        def rhs(s: float, y: np.ndarray) -> np.ndarray:
            # Clamp to the piece so kink values never leak across
            t = min(max(s / omega0, a), b)
            w = 1.0 + float(profile._chi(np.asarray(t)))
            w2 = w * w
            return np.array(
                [y[1], -w2 * y[0], y[3], -w2 * y[2], float(profile._gamma(np.asarray(t))) / omega0]
            )

        y0 = np.array([1.0, 0.0, 0.0, 1.0, 0.0])
        sol = solve_ivp(
            rhs,
            (omega0 * a, omega0 * b),
            y0,
            method="DOP853",
            rtol=rtol,
            atol=atol,
            dense_output=True,
        )
        self.nfev += sol.nfev
        if sol.status != 0:
            raise IntegrationError(
                f"mode equation integration failed: {sol.message}",
                time=float(sol.t[-1]) / omega0,
                module="dynamics",
                remedy="check that omega(t) stays positive and chi, gamma are bounded",
            )
        return sol

    def evaluate(self, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Transfer matrices and accumulated damping at local times u.

        Returns:
            Arrays of shape (len(u), 2, 2) and (len(u),).
        """
        u = np.asarray(u, dtype=np.float64)
        phi = np.empty((u.size, 2, 2))
        Gamma = np.empty(u.size)
        kinks = np.array([piece[0] for piece in self.pieces[1:]])
        which = np.searchsorted(kinks, u, side="right")
        for i, (a, b, sol, start_matrix, start_Gamma) in enumerate(self.pieces):
            mask = which == i
            if not np.any(mask):
                continue
            y = sol.sol(self.omega0 * np.clip(u[mask], a, b))
            local = np.moveaxis(np.array([[y[0], y[2]], [y[1], y[3]]]), -1, 0)
            phi[mask] = local @ start_matrix
            Gamma[mask] = start_Gamma + y[4]
        return phi, Gamma


def _as_matrix(y: np.ndarray) -> np.ndarray:
    return np.array([[y[0], y[2]], [y[1], y[3]]])


@lru_cache(maxsize=32)
def _propagator(profile: PulseProfile, omega0: float, rtol: float, atol: float) -> _PulsePropagator:
    return _PulsePropagator(profile, omega0, rtol, atol)


def _free_matrices(angle: np.ndarray) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.moveaxis(np.array([[c, s], [-s, c]]), -1, 0)


def default_grid(
    train: PulseTrain, omega0: float = 1.0, config: Optional[Configuration] = None
) -> np.ndarray:
    """
    Sample times resolving both the mode oscillation and every pulse.

    Each free segment gets at least ``samples_per_period`` samples per period
    2 pi/omega0, each pulse at least ``samples_per_pulse`` samples; all
    breakpoints of the train are included.

    Args:
        train: The pulse train.
        omega0: Reference angular frequency.
        config: Sampling settings.

    Returns:
        Sorted unique sample times from 0 to the end of the train.
    """
    config = config or Configuration()
    per_unit = config.samples_per_period * omega0 / (2.0 * math.pi)
    pieces = [train.breakpoints()]
    for start, stop, k in train.segments():
        count = max(2, math.ceil((stop - start) * per_unit))
        if k is not None:
            count = max(count, config.samples_per_pulse)
        pieces.append(np.linspace(start, stop, count + 1))
    return np.unique(np.concatenate(pieces))


def integrate_xi(
    train: PulseTrain,
    grid: Optional[Sequence[float]] = None,
    *,
    omega0: float = 1.0,
    config: Optional[Configuration] = None,
) -> ModeTrajectory:
    """
    Solve xi'' + (1 + chi)^2 xi = 0 with xi(0) = 1, xi'(0) = -i.

    Derivatives are with respect to s = omega0 * t. Before the first pulse
    the solution is exactly exp(-i s). Pulses are integrated once with an
    adaptive eighth-order Runge-Kutta method and chained as transfer
    matrices; free segments use the exact rotation.

    Args:
        train: Pulse train providing chi(t) and gamma(t).
        grid: Sample times in [0, train.end]; the train's breakpoints are
            always added. Defaults to ``default_grid``.
        omega0: Reference angular frequency.
        config: Integrator tolerances and sampling settings.

    Returns:
        Trajectory with xi, xi_dot, Gamma and gamma filled in.

    Raises:
        PreconditionError: If the grid leaves [0, train.end].
        IntegrationError: If the integrator fails or the Wronskian drifts
            by more than 1e-6.
    """
    config = config or Configuration()
    end = train.end
    if grid is None:
        grid_arr = default_grid(train, omega0, config)
    else:
        grid_arr = np.asarray(grid, dtype=np.float64)
        if grid_arr.size and (grid_arr.min() < 0.0 or grid_arr.max() > end):
            raise PreconditionError(
                f"grid must lie within [0, {end!r}]", module="dynamics", parameter="grid"
            )
        grid_arr = np.union1d(grid_arr, train.breakpoints())

    n = grid_arr.size
    xi = np.empty(n, dtype=np.complex128)
    xi_dot = np.empty(n, dtype=np.complex128)
    Gamma = np.empty(n)
    xi[0], xi_dot[0], Gamma[0] = 1.0, -1.0j, 0.0
    segments: List[Tuple[int, int, bool]] = []

    propagator = None
    if train.n > 0:
        propagator = _propagator(train.profile, omega0, config.rtol, config.atol)

    v = np.array([1.0 + 0.0j, -1.0j])
    Gamma_start = 0.0
    for start, stop, k in train.segments():
        i0 = int(np.searchsorted(grid_arr, start, side="left"))
        i1 = int(np.searchsorted(grid_arr, stop, side="right")) - 1
        segments.append((i0, i1, k is not None))
        u = grid_arr[i0:i1 + 1] - start
        if k is None:
            phi = _free_matrices(omega0 * u)
            Gamma[i0:i1 + 1] = Gamma_start
            end_matrix = _free_matrices(np.array([omega0 * (stop - start)]))[0]
            Gamma_end = Gamma_start
        else:
            phi, local_Gamma = propagator.evaluate(u)
            Gamma[i0:i1 + 1] = Gamma_start + local_Gamma
            end_matrix = propagator.end_matrix
            Gamma_end = Gamma_start + propagator.end_Gamma
        values = phi @ v
        xi[i0:i1 + 1] = values[:, 0]
        xi_dot[i0:i1 + 1] = values[:, 1]
        v = end_matrix @ v
        Gamma_start = Gamma_end
        # The boundary sample belongs to the next segment's start
        xi[i1], xi_dot[i1] = v
        Gamma[i1] = Gamma_start

    wronskian = (xi * np.conj(xi_dot)).imag
    deviation = np.abs(wronskian - 1.0)
    worst = int(np.argmax(deviation))
    drift = float(deviation[worst])
    if drift > WRONSKIAN_FAIL:
        raise IntegrationError(
            f"Wronskian drifted by {drift:.3e}",
            time=float(grid_arr[worst]),
            module="dynamics",
            remedy="lower rtol/atol in the configuration",
        )
    if drift > WRONSKIAN_WARN:
        logger.warning("Wronskian drift %.3e at t=%g exceeds %g", drift, grid_arr[worst], WRONSKIAN_WARN)
    logger.info(
        "Integrated %d pulses over [0, %g] on %d samples; Wronskian drift %.2e",
        train.n, end, n, drift,
    )

    in_pulse = train.in_pulse(grid_arr)
    return ModeTrajectory(
        grid=grid_arr,
        xi=xi,
        xi_dot=xi_dot,
        Gamma=np.maximum.accumulate(Gamma),
        gamma=train.gamma(grid_arr),
        in_pulse=in_pulse,
        segments=tuple(segments),
        omega0=omega0,
        wronskian_drift=drift,
    )


def accumulate_quadratures(
    traj: ModeTrajectory, train: PulseTrain, G: float
) -> ModeTrajectory:
    """
    Fill in the reservoir quadratures J(t) and J_tilde(t).

    J = (G/2) e^{-2 Gamma(t)} int_0^t e^{2 Gamma} gamma (|xi|^2 + |xi_dot|^2),
    and J_tilde likewise with xi^2 + xi_dot^2. The integrals use the composite
    Simpson rule on each smooth segment with the weight folded as
    e^{2 (Gamma(tau) - Gamma(segment start))}.

    Args:
        traj: Trajectory from ``integrate_xi``.
        train: The pulse train the trajectory was computed for.
        G: Reservoir factor, >= 1.

    Returns:
        A copy of the trajectory with G, J and J_tilde set.

    Raises:
        PreconditionError: If gamma of the train does not match the trajectory's samples.
    """
    if not np.allclose(train.gamma(traj.grid), traj.gamma, rtol=1e-12, atol=1e-15):
        raise PreconditionError(
            "trajectory was not computed on this pulse train's gamma(t)",
            module="dynamics",
            parameter="train",
        )
    n = traj.grid.size
    K = np.zeros(n)
    K_tilde = np.zeros(n, dtype=np.complex128)
    energy = np.abs(traj.xi) ** 2 + np.abs(traj.xi_dot) ** 2
    energy_tilde = traj.xi**2 + traj.xi_dot**2

    K_start, K_tilde_start = 0.0, 0.0j
    worst_estimate = 0.0
    for i0, i1, is_pulse in traj.segments:
        sl = slice(i0, i1 + 1)
        t = traj.grid[sl]
        G_rel = traj.Gamma[sl] - traj.Gamma[i0]
        decay = np.exp(-2.0 * G_rel)
        # Pulse-local gamma keeps both ends of the pulse even when pulses touch
        gamma = train.profile.gamma(t - t[0]) if is_pulse else np.zeros(t.size)
        if not np.any(gamma > 0.0):
            K[sl] = decay * K_start
            K_tilde[sl] = decay * K_tilde_start
        else:
            weight = np.exp(2.0 * G_rel) * gamma
            y = weight * energy[sl]
            y_tilde = weight * energy_tilde[sl]
            C = cumulative_simpson(y, x=t, initial=0.0)
            C_tilde = cumulative_simpson(y_tilde.real, x=t, initial=0.0) + 1j * cumulative_simpson(
                y_tilde.imag, x=t, initial=0.0
            )
            K[sl] = decay * (K_start + C)
            K_tilde[sl] = decay * (K_tilde_start + C_tilde)
            worst_estimate = max(worst_estimate, _richardson_estimate(t, y))
        K_start, K_tilde_start = K[i1], K_tilde[i1]

    if worst_estimate > QUADRATURE_WARN:
        logger.warning(
            "Quadrature error estimate %.2e for J exceeds %g; refine the grid", worst_estimate, QUADRATURE_WARN
        )
    else:
        logger.debug("Quadrature error estimate for J: %.2e", worst_estimate)

    return traj.model_copy(update={"G": G, "J": 0.5 * G * K, "J_tilde": 0.5 * G * K_tilde})


def _richardson_estimate(t: np.ndarray, y: np.ndarray) -> float:
    """Relative difference of Simpson on h and 2h, divided by 15."""
    if t.size < 5 or t.size % 2 == 0:
        return 0.0
    fine = simpson(y, x=t)
    coarse = simpson(y[::2], x=t[::2])
    scale = max(abs(fine), 1e-300)
    return abs(fine - coarse) / 15.0 / scale


def _require_index(traj: ModeTrajectory, t: float) -> int:
    i = traj.index_of(t)
    if i is None:
        raise PreconditionError(
            f"t={t!r} is not a sample of the trajectory", module="dynamics", parameter="t"
        )
    if not traj.has_quadratures:
        raise PreconditionError(
            "trajectory has no reservoir quadratures; call accumulate_quadratures first",
            module="dynamics",
        )
    return i


def covariance_at(traj: ModeTrajectory, t: float, G0: float) -> CovarianceState:
    """
    Assemble the covariance state at a sample time.

    The initial thermal state enters through J_eff = J + (G0/2) e^{-2 Gamma}.

    Args:
        traj: Trajectory with quadratures.
        t: A time on the trajectory's grid.
        G0: Thermal factor of the initial mode state.

    Returns:
        The state at time t.

    Raises:
        PreconditionError: If t is not on the grid or J is missing.
        NumericalConsistencyError: If the moments violate Delta >= 1/4.
    """
    i = _require_index(traj, t)
    J_eff = traj.J[i] + 0.5 * G0 * math.exp(-2.0 * traj.Gamma[i])
    return assemble_covariance(
        traj.xi[i], traj.xi_dot[i], J_eff, traj.J_tilde[i], module="dynamics", time=float(traj.grid[i])
    )


def mean_photons(traj: ModeTrajectory, t: float, G0: float) -> Tuple[float, float, float]:
    """
    Mean photon number split into initial-state and reservoir parts.

    The photon number is defined with respect to the unmodulated mode, so
    the result is only meaningful between pulses.

    Args:
        traj: Trajectory with quadratures.
        t: A time on the trajectory's grid.
        G0: Thermal factor of the initial mode state.

    Returns:
        (N_total, N_signal, N_reservoir).
    """
    i = _require_index(traj, t)
    if traj.in_pulse[i]:
        warnings.warn(
            f"t={t!r} lies inside a pulse where omega differs from omega0",
            PulseValidityWarning,
            stacklevel=2,
        )
    E = float(traj.E[i])
    E_tilde = complex(traj.E_tilde[i])
    N_signal = 0.5 * (G0 * math.exp(-2.0 * traj.Gamma[i]) * E - 1.0)
    N_reservoir = E * traj.J[i] - (E_tilde.conjugate() * traj.J_tilde[i]).real
    return N_signal + N_reservoir, N_signal, float(N_reservoir)


def simulate(
    train: PulseTrain,
    reservoir: ReservoirParams,
    grid: Optional[Sequence[float]] = None,
    config: Optional[Configuration] = None,
) -> ModeTrajectory:
    """
    Integrate the mode and accumulate the reservoir quadratures in one call.

    Args:
        train: Pulse train.
        reservoir: Thermal factors and omega0.
        grid: Optional sample times.
        config: Numerical settings.

    Returns:
        The completed trajectory.
    """
    traj = integrate_xi(train, grid, omega0=reservoir.omega0, config=config)
    return accumulate_quadratures(traj, train, reservoir.G)


def period_scan(
    profile: PulseProfile,
    n: int,
    periods: Sequence[float],
    reservoir: ReservoirParams,
    offset: float = 0.0,
    config: Optional[Configuration] = None,
) -> np.ndarray:
    """
    Mean photon number after n pulses as a function of the repetition period.

    Args:
        profile: Pulse shape.
        n: Number of pulses.
        periods: Repetition periods to try.
        reservoir: Thermal factors and omega0.
        offset: Start of the first pulse.
        config: Numerical settings.

    Returns:
        N at the end of each train, in the order of ``periods``.
    """
    out = np.empty(len(periods))
    for j, period in enumerate(periods):
        train = PulseTrain(profile=profile, n=n, period=float(period), offset=offset)
        traj = simulate(train, reservoir, config=config)
        out[j] = mean_photons(traj, train.end, reservoir.G0)[0]
        logger.debug("Period %.8g: N=%.6g", period, out[j])
    return out

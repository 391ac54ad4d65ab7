"""
Basic usage example for casimirstats.
"""

import warnings

import numpy as np

from casimirstats import (
    CovarianceState,
    PulseTrain,
    RectangularPulse,
    ReservoirParams,
    asymptotic_distribution,
    covariance_at,
    covariance_from_summary,
    evolve_summary,
    exact_pdf,
    invariant_squeezing,
    simulate,
)
from casimirstats.exceptions import ValidityWarning
from casimirstats.pulsetrain import pulse_coefficients, resonance_period


def closed_form_example():
    """
    Example of the closed-form pulse-train summary.
    """
    print("=== Closed Form ===")
    summary = evolve_summary(nu=0.01, Lambda=0.005, G=1.0, G0=1.0, n=500)
    state = covariance_from_summary(summary)
    report = invariant_squeezing(state, nu=0.01, Lambda=0.005, G=1.0)
    print(f"N = {summary.N:.2f}, S = {report.S:.4f} (asymptote {report.asymptote:.4f})")
    print()


def dynamics_example():
    """
    Example of integrating the mode through a resonant train.
    """
    print("=== Mode Dynamics ===")
    pulse = RectangularPulse(duration=1.1656, chi=0.01089, gamma=0.00429)
    nu, Lambda, phi = pulse_coefficients(pulse)
    train = PulseTrain(profile=pulse, n=500, period=resonance_period(1.0, phi, 1))
    traj = simulate(train, ReservoirParams())
    state = covariance_at(traj, train.end, G0=1.0)
    print(f"nu = {nu:.5f}, Lambda = {Lambda:.5f}, T = {train.period:.6f}")
    print(f"N = {state.N:.2f}, Wronskian drift = {traj.wronskian_drift:.1e}")
    print()


def distribution_example():
    """
    Example of exact and asymptotic photon distributions.
    """
    print("=== Photon Distribution ===")
    state = CovarianceState.from_invariants(tau=2001.0, Delta=2001.0 / 6.0)
    exact = exact_pdf(state)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        approx = asymptotic_distribution(state, m_max=exact.m_max)
    m = np.arange(500, 510)
    print(f"regime: {exact.regime}, m_max = {exact.m_max}")
    for k, f, g in zip(m, exact.values[m], approx.values[m]):
        print(f"  f({k}) = {f:.4e}   asymptotic {g:.4e}")
    print()


def main():
    """
    Run the examples.
    """
    closed_form_example()
    dynamics_example()
    distribution_example()


if __name__ == "__main__":
    main()

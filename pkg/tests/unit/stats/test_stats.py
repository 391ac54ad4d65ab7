import math
import unittest
import warnings


from casimirstats.core import CovarianceState, PhotonDistribution
from casimirstats.exceptions import (
    AsymptoticValidityWarning,
    DomainError,
    PrecisionError,
    RegimeValidityWarning,
)
from casimirstats.pdf import asymptotic_distribution, exact_pdf
from casimirstats.pulsetrain import covariance_from_summary, evolve_summary
from casimirstats.stats import (
    distribution_moments,
    double_factorial,
    euler_maclaurin_norm_check,
    invariant_squeezing,
    minimize_rotated_variance,
    moment_tail_bound,
    number_variance,
    purity,
    rotated_variance,
    squeezing_asymptote,
    superchaotic_moment,
)


class TestInvariantSqueezing(unittest.TestCase):
    """Test the invariant squeezing coefficient."""

    def test_examples(self):
        """Test S for the vacuum, a thermal state and a squeezed vacuum."""
        self.assertAlmostEqual(invariant_squeezing(CovarianceState.vacuum()).S, 1.0, places=15)
        self.assertAlmostEqual(invariant_squeezing(CovarianceState.thermal(1.0)).S, 3.0, places=14)
        report = invariant_squeezing(CovarianceState.squeezed_vacuum(1.0))
        self.assertAlmostEqual(report.S, math.exp(-2.0), places=12)
        self.assertTrue(report.squeezed)
        self.assertAlmostEqual(report.sigma_min, 0.5 * report.S, places=15)

    def test_matches_numerical_minimum(self):
        """Test S/2 against a direct minimization over the rotation phase."""
        for state in (
            CovarianceState(sigma_xx=2.0, sigma_pp=0.8, sigma_xp=0.5),
            CovarianceState(sigma_xx=0.3, sigma_pp=5.0, sigma_xp=-0.9),
            CovarianceState.from_invariants(50.0, 30.0, angle=2.0),
        ):
            with self.subTest(state=state):
                report = invariant_squeezing(state)
                self.assertAlmostEqual(minimize_rotated_variance(state), report.sigma_min, places=10)
                self.assertAlmostEqual(rotated_variance(state, report.t_min), report.sigma_min, places=10)
                self.assertGreaterEqual(report.t_min, 0.0)
                self.assertLess(report.t_min, math.pi)

    def test_free_evolution_invariance(self):
        """Test that S does not change under rotation."""
        state = CovarianceState(sigma_xx=2.0, sigma_pp=0.8, sigma_xp=0.5)
        self.assertAlmostEqual(invariant_squeezing(state.rotated(1.3)).S, invariant_squeezing(state).S, places=13)

    def test_pulse_train(self):
        """Test that S reaches G Lambda/(nu + Lambda) independently of G0."""
        reports = []
        for G0 in (1.0, 10.0):
            state = covariance_from_summary(evolve_summary(0.01, 0.005, 1.0, G0, 500))
            reports.append(invariant_squeezing(state, nu=0.01, Lambda=0.005, G=1.0))
        for report in reports:
            self.assertAlmostEqual(report.asymptote, 1.0 / 3.0, places=14)
            self.assertLess(abs(report.S * 3.0 - 1.0), 0.05)
        self.assertLess(abs(reports[1].S / reports[0].S - 1.0), 0.01)


class TestSqueezingAsymptote(unittest.TestCase):
    """Test the asymptotic squeezing coefficient."""

    def test_values(self):
        """Test a few asymptotes."""
        self.assertAlmostEqual(squeezing_asymptote(0.01, 0.005, 1.0), 1.0 / 3.0, places=15)
        self.assertEqual(squeezing_asymptote(0.01, 0.0, 1.0), 0.0)
        self.assertAlmostEqual(squeezing_asymptote(0.01, 0.005, 4.5), 1.5, places=14)

    def test_no_growth_warns(self):
        """Test the warning for nu <= Lambda."""
        with self.assertWarns(RegimeValidityWarning):
            squeezing_asymptote(0.005, 0.01, 1.0)

    def test_domain(self):
        """Test the argument checks."""
        with self.assertRaises(DomainError):
            squeezing_asymptote(0.0, 0.0, 1.0)


class TestNumberVariance(unittest.TestCase):
    """Test the photon-number variance."""

    def test_thermal(self):
        """Test N (N + 1) for thermal states."""
        for n in (0.0, 1.0, 7.5):
            self.assertAlmostEqual(number_variance(CovarianceState.thermal(n)), n * (n + 1.0), places=12)

    def test_squeezed_vacuum(self):
        """Test 2 n (n + 1) for the squeezed vacuum."""
        n = math.sinh(1.0) ** 2
        self.assertAlmostEqual(
            number_variance(CovarianceState.squeezed_vacuum(1.0)), 2.0 * n * (n + 1.0), places=11
        )

    def test_superchaotic(self):
        """Test that sigma_N/N^2 approaches 2 for large N."""
        N = 1.0e4
        state = CovarianceState.from_invariants(2.0 * N + 1.0, 2.0 * N)
        self.assertLess(abs(number_variance(state) / N**2 - 2.0), 0.02)

    def test_matches_distribution(self):
        """Test the closed form against the exact distribution."""
        state = CovarianceState(sigma_xx=3.0, sigma_pp=1.2, sigma_xp=0.4)
        dist = exact_pdf(state, m_max=200)
        mean = distribution_moments(dist, 1)
        second = distribution_moments(dist, 2)
        self.assertAlmostEqual(second - mean**2, number_variance(state), places=7)
        self.assertAlmostEqual(purity(state), 0.5 / math.sqrt(state.Delta), places=15)


class TestMoments(unittest.TestCase):
    """Test the moments of distributions."""

    def test_double_factorial(self):
        """Test small double factorials."""
        self.assertAlmostEqual(double_factorial(5), 15.0, places=10)
        self.assertAlmostEqual(double_factorial(6), 48.0, places=10)
        self.assertEqual(double_factorial(0), 1.0)
        self.assertEqual(double_factorial(-1), 1.0)
        with self.assertRaises(DomainError):
            double_factorial(-3)

    def test_thermal_moments(self):
        """Test the first moments of a thermal distribution."""
        dist = exact_pdf(CovarianceState.thermal(1.0), m_max=200)
        self.assertAlmostEqual(distribution_moments(dist, 0), 1.0, places=12)
        self.assertAlmostEqual(distribution_moments(dist, 1), 1.0, places=12)
        self.assertAlmostEqual(distribution_moments(dist, 2), 3.0, places=11)

    def test_superchaotic_limit(self):
        """Test <m^k> -> N^k (2k - 1)!! for k <= 3 at N = 1000."""
        N = 1000.0
        state = CovarianceState.from_invariants(2.0 * N + 1.0, 2.0 * N)
        dist = exact_pdf(state, m_max=int(80 * N))
        for k in (1, 2, 3):
            with self.subTest(k=k):
                moment = distribution_moments(dist, k)
                self.assertLess(abs(moment / superchaotic_moment(N, k) - 1.0), 0.05)

    def test_truncated_tail(self):
        """Test that a too short distribution raises PrecisionError."""
        dist = exact_pdf(CovarianceState.thermal(5.0), m_max=20)
        self.assertGreater(moment_tail_bound(dist, 2), 1e-6)
        with self.assertRaises(PrecisionError):
            distribution_moments(dist, 2)

    def test_order(self):
        """Test that orders outside 0..8 are rejected."""
        dist = exact_pdf(CovarianceState.thermal(1.0), m_max=50)
        with self.assertRaises(DomainError):
            distribution_moments(dist, 9)
        with self.assertRaises(DomainError):
            distribution_moments(dist, -1)

    def test_bound_without_ratio(self):
        """Test the fallback bound when no tail ratio is known."""
        dist = PhotonDistribution(values=[0.5, 0.25], method="asymptotic-smooth", tail_bound=1e-3)
        self.assertAlmostEqual(moment_tail_bound(dist, 1), 1e-3 * 4.0, places=15)


class TestNormCheck(unittest.TestCase):
    """Test the normalization report."""

    def test_exact_is_complete(self):
        """Test that an exact distribution sums to 1 with no correction."""
        report = euler_maclaurin_norm_check(exact_pdf(CovarianceState.from_invariants(60.0, 40.0)))
        self.assertEqual(report.correction_estimate, 0.0)
        self.assertLess(abs(report.deviation), 1e-8)

    def test_smooth_deficit(self):
        """Test the O(tau^-1/2) deficit of the smooth asymptote."""
        for tau in (1.0e2, 1.0e3, 1.0e4):
            with self.subTest(tau=tau):
                N = 0.5 * (tau - 1.0)
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", AsymptoticValidityWarning)
                    dist = asymptotic_distribution(CovarianceState.from_invariants(tau, 2.0 * N))
                report = euler_maclaurin_norm_check(dist)
                self.assertLess(report.deviation, 0.0)
                self.assertLessEqual(abs(report.deviation) / report.scale, 2.0)
                if tau >= 1.0e3:
                    self.assertAlmostEqual(
                        report.deviation, report.correction_estimate, delta=0.05 * abs(report.correction_estimate)
                    )

    def test_oscillating_excess(self):
        """Test the oscillating deficit and the alternating-pair correction."""
        tau = 2001.0
        dist = asymptotic_distribution(CovarianceState.from_invariants(tau, 0.25))
        report = euler_maclaurin_norm_check(dist)
        self.assertAlmostEqual(
            report.deviation, report.correction_estimate, delta=0.1 * abs(report.correction_estimate)
        )
        self.assertIsNotNone(report.paired_correction)
        ratio = report.paired_correction / (1.0 / (2.0 * tau))
        self.assertGreater(ratio, 0.5)
        self.assertLess(ratio, 2.0)


if __name__ == "__main__":
    unittest.main()

import math
import unittest

import numpy as np
import pytest

from casimirstats.core import CovarianceState
from casimirstats.exceptions import TruncationError
from casimirstats.oracle import (
    MAX_DIM,
    SqueezedThermalDecomposition,
    decompose,
    default_dim,
    fock_pdf,
)
from casimirstats.pdf import exact_pdf, ideal_squeezed_pdf


def _assert_matches_exact(test: unittest.TestCase, state: CovarianceState) -> None:
    oracle = fock_pdf(decompose(state))
    exact = exact_pdf(state, m_max=oracle.m_max)
    # Rows near the basis edge see the truncation; compare the lower half
    mask = (exact.values > 1e-12) & (np.arange(exact.m_max + 1) <= exact.m_max // 2)
    test.assertTrue(mask.any())
    np.testing.assert_allclose(oracle.values[mask], exact.values[mask], rtol=1e-8, atol=1e-19)


class TestDecompose(unittest.TestCase):
    """Test the squeezed thermal decomposition."""

    def test_vacuum(self):
        """Test that the vacuum has no occupation and no squeeze."""
        decomp = decompose(CovarianceState.vacuum())
        self.assertEqual(decomp.n_bar, 0.0)
        self.assertEqual(decomp.r, 0.0)

    def test_thermal(self):
        """Test that a thermal state is not squeezed."""
        decomp = decompose(CovarianceState.thermal(2.5))
        self.assertAlmostEqual(decomp.n_bar, 2.5, places=14)
        self.assertAlmostEqual(decomp.r, 0.0, places=14)

    def test_squeezed_vacuum(self):
        """Test that the squeeze and orientation are recovered."""
        decomp = decompose(CovarianceState.squeezed_vacuum(0.7, angle=0.3))
        self.assertAlmostEqual(decomp.n_bar, 0.0, places=12)
        self.assertAlmostEqual(decomp.r, 0.7, places=12)
        self.assertAlmostEqual(decomp.theta, 0.3, places=12)

    def test_round_trip(self):
        """Test that the covariance is rebuilt from the decomposition."""
        state = CovarianceState(sigma_xx=3.0, sigma_pp=1.2, sigma_xp=0.4)
        rebuilt = decompose(state).covariance()
        self.assertAlmostEqual(rebuilt.sigma_xx, state.sigma_xx, places=12)
        self.assertAlmostEqual(rebuilt.sigma_pp, state.sigma_pp, places=12)
        self.assertAlmostEqual(rebuilt.sigma_xp, state.sigma_xp, places=12)


class TestDefaultDim(unittest.TestCase):
    """Test the automatic basis size."""

    def test_grows_with_squeeze(self):
        """Test that stronger squeezing needs a larger basis."""
        small = default_dim(SqueezedThermalDecomposition(n_bar=1.0, r=0.2))
        large = default_dim(SqueezedThermalDecomposition(n_bar=1.0, r=1.0))
        self.assertLess(small, large)

    def test_cap(self):
        """Test the cap on the basis size."""
        self.assertEqual(default_dim(SqueezedThermalDecomposition(n_bar=10.0, r=2.0)), MAX_DIM)


class TestFockPdf(unittest.TestCase):
    """Test the number-basis photon distribution."""

    def test_vacuum(self):
        """Test the vacuum."""
        dist = fock_pdf(SqueezedThermalDecomposition(n_bar=0.0, r=0.0))
        self.assertEqual(dist.method, "oracle")
        self.assertAlmostEqual(dist.values[0], 1.0, places=15)
        self.assertEqual(float(np.sum(dist.values[1:])), 0.0)

    def test_thermal(self):
        """Test the geometric distribution of a thermal state."""
        n = 2.0
        dist = fock_pdf(SqueezedThermalDecomposition(n_bar=n, r=0.0))
        m = np.arange(dist.m_max + 1)
        np.testing.assert_allclose(dist.values, n**m / (1.0 + n) ** (m + 1), rtol=1e-12, atol=1e-300)

    def test_squeezed_vacuum(self):
        """Test against the closed form of the squeezed vacuum."""
        r = 0.8
        dist = fock_pdf(SqueezedThermalDecomposition(n_bar=0.0, r=r))
        m = np.arange(dist.m_max + 1)
        expected = ideal_squeezed_pdf(math.sinh(r) ** 2, m)
        mask = (expected > 1e-12) & (m <= dist.m_max // 2)
        np.testing.assert_allclose(dist.values[mask], expected[mask], rtol=1e-8)
        self.assertLess(float(np.max(dist.values[1::2])), 1e-20)

    def test_matches_exact(self):
        """Test agreement with the exact distribution for fixed states."""
        for state in (
            CovarianceState(sigma_xx=3.0, sigma_pp=1.2, sigma_xp=0.4),
            CovarianceState.from_invariants(21.0, 10.0, angle=0.5),
            CovarianceState.from_invariants(11.0, 20.0),
        ):
            with self.subTest(state=state):
                _assert_matches_exact(self, state)

    @pytest.mark.slow
    def test_random_states(self):
        """Test agreement with the exact distribution for 50 random states."""
        rng = np.random.default_rng(20240611)
        for _ in range(50):
            decomp = SqueezedThermalDecomposition(
                n_bar=rng.uniform(0.0, 3.0),
                r=rng.uniform(0.0, 1.2),
                theta=rng.uniform(0.0, math.pi),
            )
            state = decomp.covariance()
            self.assertLessEqual(state.N, 30.0)
            with self.subTest(n_bar=decomp.n_bar, r=decomp.r):
                _assert_matches_exact(self, state)

    def test_small_basis(self):
        """Test that a basis too small for the state raises TruncationError."""
        with self.assertRaises(TruncationError):
            fock_pdf(SqueezedThermalDecomposition(n_bar=5.0, r=0.0), dim=20)
        with self.assertRaises(TruncationError):
            fock_pdf(SqueezedThermalDecomposition(n_bar=0.0, r=0.0), dim=1)


if __name__ == "__main__":
    unittest.main()

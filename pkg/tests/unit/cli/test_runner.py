import contextlib
import io
import math
import tempfile
import unittest
from pathlib import Path

import pytest
from scipy.optimize import brentq

from casimirstats.cli import parse_config, read_summary, read_table, run
from casimirstats.cli.main import main
from casimirstats.config import Configuration
from casimirstats.exceptions import DomainError, MissingKeyError

PULSETRAIN_CONFIG = """\
mode = pulsetrain
pulse.nu = 0.01
pulse.Lambda = 0.005
schedule.n = 500
outputs.distribution = false
"""


def _rectangular_config(n: int) -> str:
    d = brentq(lambda x: x / math.tan(x) - 0.5, 1.0, 1.5)
    return (
        "mode = compare\n"
        "pulse.shape = rectangular\n"
        f"pulse.chi = {0.01 / math.sin(d)!r}\n"
        f"pulse.gamma = {0.005 / d!r}\n"
        f"pulse.duration = {d!r}\n"
        f"schedule.n = {n}\n"
        "outputs.distribution = false\n"
    )


class TestRun(unittest.TestCase):
    """Test the pipelines behind the command line."""

    def setUp(self):
        """Set up a scratch output directory."""
        self._tmp = tempfile.TemporaryDirectory()
        self.out = Path(self._tmp.name)

    def tearDown(self):
        """Remove the output directory."""
        self._tmp.cleanup()

    def test_pdf(self):
        """Test the pdf pipeline on a thermal state."""
        config = parse_config("mode = pdf\nstate.sigma_xx = 1.5\nstate.sigma_pp = 1.5\noutputs.m_max = 30\n")
        result = run(config, out_dir=self.out)
        self.assertEqual(result.exit_code, 0)
        row = result.rows[0]
        self.assertEqual(row["source"], "state")
        self.assertAlmostEqual(row["N"], 1.0, places=14)
        self.assertAlmostEqual(row["sigma_N"], 2.0, places=12)
        self.assertEqual(row["regime"], "thermal-boundary")

        table = read_table(result.paths["distribution"])
        self.assertEqual(len(table), 31)
        self.assertEqual(table[3]["m"], 3)
        self.assertAlmostEqual(table[3]["f_exact"], 0.5**4, places=12)
        self.assertIsNone(table[3]["f_asymptotic"])

    def test_pdf_with_asymptote(self):
        """Test that smooth states get an asymptotic column."""
        text = "mode = pdf\nstate.sigma_xx = 40.0\nstate.sigma_pp = 10.0\noutputs.m_max = 200\noutputs.moments = 2\n"
        result = run(parse_config(text), out_dir=self.out)
        table = read_table(result.paths["distribution"])
        self.assertEqual(table[0]["regime"], "smooth")
        self.assertIsNotNone(table[100]["f_asymptotic"])
        self.assertAlmostEqual(table[100]["abs_diff"], abs(table[100]["f_exact"] - table[100]["f_asymptotic"]))
        row = result.rows[0]
        self.assertAlmostEqual(row["moment_1"], row["N"], delta=1e-6 * row["N"])
        self.assertAlmostEqual(row["moment_2"] - row["moment_1"] ** 2, row["sigma_N"], delta=1e-5 * row["sigma_N"])

    def test_pulsetrain(self):
        """Test N and S of 500 pulses against the closed form."""
        result = run(parse_config(PULSETRAIN_CONFIG), out_dir=self.out)
        row = result.rows[0]
        self.assertLess(abs(row["N"] / 73.54 - 1.0), 0.05)
        self.assertLess(abs(row["S"] * 3.0 - 1.0), 0.05)
        self.assertAlmostEqual(row["T"], math.pi, places=14)
        self.assertAlmostEqual(row["N_asymptote"], 0.5 * math.exp(5.0), places=9)
        self.assertNotIn("distribution", result.paths)

    def test_compare_state_only(self):
        """Test that compare with only a state tabulates its distribution."""
        config = parse_config("mode = compare\nstate.sigma_xx = 1.5\nstate.sigma_pp = 1.5\noutputs.m_max = 10\n")
        result = run(config, out_dir=self.out)
        self.assertEqual(len(result.rows), 1)
        self.assertEqual(result.rows[0]["source"], "state")
        table = read_table(result.paths["distribution"])
        self.assertEqual(len(table), 11)
        for row in table:
            self.assertAlmostEqual(row["f_exact"], 2.0 ** -(row["m"] + 1), places=14)

    def test_summary_round_trip(self):
        """Test that the summary reads back to the computed values."""
        result = run(parse_config(PULSETRAIN_CONFIG), out_dir=self.out)
        rows = read_summary(result.paths["summary"])
        self.assertEqual(len(rows), 1)
        for key in ("tau", "Delta", "N", "S", "nu", "Lambda", "T"):
            self.assertEqual(rows[0][key], result.rows[0][key])
        self.assertEqual(rows[0]["source"], "pulsetrain")

    def test_deterministic(self):
        """Test that identical inputs give identical files."""
        config = parse_config(PULSETRAIN_CONFIG)
        first = run(config, out_dir=self.out / "a").paths["summary"].read_bytes()
        second = run(config, out_dir=self.out / "b").paths["summary"].read_bytes()
        self.assertEqual(first, second)
        self.assertTrue(first.startswith(b"# casimirstats "))

    def test_sweep(self):
        """Test a sweep over the number of pulses."""
        text = "pulse.nu = 0.01\npulse.Lambda = 0.005\nsweep.param = schedule.n\nsweep.values = 100, 200, 400\n"
        result = run(parse_config(text), mode="sweep", out_dir=self.out)
        N = [row["N"] for row in result.rows]
        self.assertEqual([row["sweep_value"] for row in result.rows], [100.0, 200.0, 400.0])
        self.assertTrue(N[0] < N[1] < N[2])
        rows = read_summary(result.paths["summary"])
        self.assertEqual(rows[2]["sweep_param"], "schedule.n")
        self.assertNotIn("distribution", result.paths)

    def test_parallel_sweep_matches_serial(self):
        """Test that worker processes give the same rows."""
        text = "pulse.nu = 0.01\npulse.Lambda = 0.005\nschedule.n = 300\nsweep.param = reservoir.G\nsweep.range = 1:3:1\n"
        config = parse_config(text)
        serial = run(config, mode="sweep", out_dir=self.out / "serial", workers=1)
        parallel = run(config, mode="sweep", out_dir=self.out / "parallel", workers=2)
        self.assertEqual(serial.paths["summary"].read_bytes(), parallel.paths["summary"].read_bytes())

    def test_m_max_override(self):
        """Test that the m_max argument replaces outputs.m_max."""
        config = parse_config("mode = pdf\nstate.sigma_xx = 1.5\nstate.sigma_pp = 1.5\n")
        result = run(config, out_dir=self.out, m_max=12)
        self.assertEqual(len(read_table(result.paths["distribution"])), 13)

    def test_no_mode(self):
        """Test that a mode is required."""
        with self.assertRaises(MissingKeyError):
            run(parse_config("state.sigma_xx = 1.5\nstate.sigma_pp = 1.5\n"), out_dir=self.out)

    def test_negative_period(self):
        """Test that a phase shift leaving no period is a domain error."""
        config = parse_config(PULSETRAIN_CONFIG + "pulse.phi = -10.0\n")
        with self.assertRaises(DomainError):
            run(config, out_dir=self.out)

    @pytest.mark.slow
    def test_compare(self):
        """Test that the integrated and closed-form pipelines agree."""
        result = run(parse_config(_rectangular_config(200)), out_dir=self.out, settings=Configuration())
        dynamics, pulsetrain = result.rows
        self.assertEqual(dynamics["source"], "dynamics")
        self.assertEqual(pulsetrain["source"], "pulsetrain")
        self.assertAlmostEqual(dynamics["nu"], 0.01, places=10)
        self.assertLess(abs(dynamics["N"] / pulsetrain["N"] - 1.0), 0.05)
        self.assertLess(abs(dynamics["S"] / pulsetrain["S"] - 1.0), 0.05)


class TestMain(unittest.TestCase):
    """Test the command-line entry point."""

    def setUp(self):
        """Set up a scratch directory."""
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        """Remove the scratch directory."""
        self._tmp.cleanup()

    def _main(self, text: str, *args: str) -> int:
        path = self.tmp / "run.cfg"
        path.write_text(text)
        with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
            return main(["run", str(path), "--out-dir", str(self.tmp / "out"), *args])

    def test_success(self):
        """Test a successful run."""
        self.assertEqual(self._main(PULSETRAIN_CONFIG), 0)
        self.assertTrue((self.tmp / "out" / "summary.csv").is_file())

    def test_mode_override(self):
        """Test that --mode replaces the configured mode."""
        text = PULSETRAIN_CONFIG.replace("mode = pulsetrain\n", "mode = dynamics\n")
        self.assertEqual(self._main(text, "--mode", "pulsetrain"), 0)

    def test_configuration_error(self):
        """Test the exit code for an invalid configuration."""
        self.assertEqual(self._main(PULSETRAIN_CONFIG + "reservoir.G0 = 0.5\n"), 2)

    def test_domain_error(self):
        """Test the exit code for a domain error."""
        self.assertEqual(self._main(PULSETRAIN_CONFIG + "pulse.phi = -10.0\n"), 3)

    def test_error_message(self):
        """Test that errors are printed with their position."""
        path = self.tmp / "run.cfg"
        path.write_text("mode = pdf\nstate.colour = blue\n")
        err = io.StringIO()
        with contextlib.redirect_stderr(err):
            code = main(["run", str(path)])
        self.assertEqual(code, 2)
        self.assertIn("line 2, column 1", err.getvalue())
        self.assertIn("[cli]", err.getvalue())


if __name__ == "__main__":
    unittest.main()

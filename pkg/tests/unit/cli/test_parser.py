import os
import tempfile
import unittest
from pathlib import Path

from casimirstats.cli import ExperimentConfig, check_mode, load_config, parse_config
from casimirstats.exceptions import (
    ConfigurationError,
    MissingKeyError,
    TypeMismatchError,
    UnknownKeyError,
)

PDF_CONFIG = """\
# thermal state with one photon
mode = pdf
state.sigma_xx = 1.5
state.sigma_pp = 1.5
"""


class TestParseConfig(unittest.TestCase):
    """Test parsing of key = value configurations."""

    def test_defaults(self):
        """Test the values of keys that are not given."""
        config = parse_config(PDF_CONFIG)
        self.assertIsInstance(config, ExperimentConfig)
        self.assertEqual(config.mode, "pdf")
        self.assertEqual(config.state.sigma_xp, 0.0)
        self.assertEqual(config.reservoir.G, 1.0)
        self.assertEqual(config.reservoir.G0, 1.0)
        self.assertEqual(config.reservoir.omega0, 1.0)
        self.assertEqual(config.schedule.period, "auto")
        self.assertEqual(config.schedule.m, 1)
        self.assertEqual(config.outputs.m_max, "auto")
        self.assertEqual(config.outputs.moments, 0)
        self.assertTrue(config.outputs.distribution)
        self.assertIsNone(config.pulse)
        self.assertIsNone(config.sweep)

    def test_value_types(self):
        """Test that values are converted to the declared types."""
        config = parse_config(
            "pulse.shape = rectangular\n"
            "pulse.chi = 0.01  # detuning\n"
            "pulse.gamma = 0.004\n"
            "pulse.duration = 1.2\n"
            "schedule.n = 50\n"
            "schedule.period = 3.1\n"
            "outputs.distribution = false\n"
            "outputs.m_max = 400\n"
        )
        self.assertEqual(config.pulse.chi, 0.01)
        self.assertEqual(config.schedule.n, 50)
        self.assertEqual(config.schedule.period, 3.1)
        self.assertFalse(config.outputs.distribution)
        self.assertEqual(config.outputs.m_max, 400)
        self.assertEqual(config.pulse.profile().duration, 1.2)

    def test_sweep_values(self):
        """Test the comma-separated sweep values and ranges."""
        config = parse_config("sweep.param = schedule.n\nsweep.values = 100, 200,300\n")
        self.assertEqual(config.sweep.points(), [100.0, 200.0, 300.0])
        config = parse_config("sweep.param = reservoir.G\nsweep.range = 1:2:0.25\n")
        self.assertEqual(config.sweep.points(), [1.0, 1.25, 1.5, 1.75, 2.0])
        self.assertEqual(config.sweep.mode, "pulsetrain")

    def test_sweep_needs_one_source(self):
        """Test that values and range exclude each other."""
        with self.assertRaises(ConfigurationError):
            parse_config("sweep.param = schedule.n\nsweep.values = 1\nsweep.range = 1:2:1\n")

    def test_G0_below_one(self):
        """Test that G0 < 1 is rejected with its position."""
        with self.assertRaises(ConfigurationError) as ctx:
            parse_config(PDF_CONFIG + "reservoir.G0 = 0.5\n")
        self.assertEqual(ctx.exception.line, 5)
        self.assertEqual(ctx.exception.column, 16)
        self.assertEqual(ctx.exception.parameter, "reservoir.G0")
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_unknown_key(self):
        """Test that keys outside the format are rejected."""
        with self.assertRaises(UnknownKeyError) as ctx:
            parse_config("mode = pdf\n  pulse.colour = red\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.column, 3)
        self.assertIn("line 2, column 3", str(ctx.exception))

    def test_unknown_section(self):
        """Test that unknown sections are rejected."""
        with self.assertRaises(UnknownKeyError):
            parse_config("cavity.length = 1.0\n")

    def test_type_mismatch(self):
        """Test that a value of the wrong type is reported as such."""
        with self.assertRaises(TypeMismatchError) as ctx:
            parse_config("mode = pulsetrain\nschedule.n = many\n")
        self.assertEqual(ctx.exception.line, 2)
        with self.assertRaises(TypeMismatchError):
            parse_config("mode = everything\n")

    def test_missing_state_key(self):
        """Test that an incomplete state is reported."""
        with self.assertRaises(MissingKeyError) as ctx:
            parse_config("state.sigma_xx = 1.0\n")
        self.assertEqual(ctx.exception.parameter, "state.sigma_pp")

    def test_missing_shape_key(self):
        """Test that a shape without its parameters is reported at the shape."""
        with self.assertRaises(MissingKeyError) as ctx:
            parse_config("mode = dynamics\npulse.shape = rectangular\npulse.chi = 0.1\npulse.gamma = 0.0\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.parameter, "pulse.duration")

    def test_unphysical_state(self):
        """Test that a state violating Delta >= 1/4 is rejected."""
        with self.assertRaises(ConfigurationError):
            parse_config("state.sigma_xx = 0.3\nstate.sigma_pp = 0.3\n")

    def test_malformed_lines(self):
        """Test lines without '=' and repeated keys."""
        with self.assertRaises(ConfigurationError) as ctx:
            parse_config("mode = pdf\njust text\n")
        self.assertEqual(ctx.exception.line, 2)
        with self.assertRaises(ConfigurationError):
            parse_config("mode = pdf\nmode = pulsetrain\n")
        with self.assertRaises(ConfigurationError):
            parse_config("a.b.c = 1\n")

    def test_comments_and_blank_lines(self):
        """Test that comments and blank lines are ignored."""
        config = parse_config("\n# nothing here\n\nmode = pulsetrain  # trailing\n")
        self.assertEqual(config.mode, "pulsetrain")


class TestLoadConfig(unittest.TestCase):
    """Test reading configurations from files."""

    def test_relative_pulse_file(self):
        """Test that a pulse file is found next to the configuration."""
        with tempfile.TemporaryDirectory() as tmp:
            Path(tmp, "pulse.csv").write_text("t,chi\n0.0,0.0\n0.5,0.1\n1.0,0.0\n")
            path = Path(tmp, "run.cfg")
            path.write_text("mode = dynamics\npulse.shape = sampled\npulse.file = pulse.csv\nschedule.n = 1\n")
            config = load_config(path)
            self.assertEqual(config.pulse.file, Path(tmp) / "pulse.csv")

    def test_missing_file(self):
        """Test that an unreadable file is a configuration error."""
        with self.assertRaises(ConfigurationError):
            load_config(os.path.join(tempfile.gettempdir(), "does-not-exist.cfg"))


class TestCheckMode(unittest.TestCase):
    """Test the per-mode requirements."""

    def test_pdf_needs_state(self):
        """Test that the pdf pipeline needs a state."""
        with self.assertRaises(MissingKeyError):
            check_mode(parse_config("mode = pdf\n"), "pdf")

    def test_pulsetrain_coefficients(self):
        """Test that explicit nu and Lambda replace the pulse shape."""
        config = parse_config("pulse.nu = 0.01\npulse.Lambda = 0.005\nschedule.n = 10\n")
        check_mode(config, "pulsetrain")
        with self.assertRaises(MissingKeyError):
            check_mode(config, "dynamics")

    def test_compare_with_state_only(self):
        """Test that compare accepts a state without a pulse."""
        check_mode(parse_config(PDF_CONFIG), "compare")
        with self.assertRaises(MissingKeyError):
            check_mode(parse_config("mode = compare\n"), "compare")

    def test_pulsetrain_needs_n(self):
        """Test that the number of pulses is required."""
        with self.assertRaises(MissingKeyError) as ctx:
            check_mode(parse_config("pulse.nu = 0.01\npulse.Lambda = 0.005\n"), "pulsetrain")
        self.assertEqual(ctx.exception.parameter, "schedule.n")

    def test_sweep_checks_inner_mode(self):
        """Test that a sweep checks the pipeline it runs."""
        config = parse_config("sweep.param = schedule.n\nsweep.values = 1, 2\nsweep.mode = pdf\n")
        with self.assertRaises(MissingKeyError):
            check_mode(config, "sweep")

    def test_swept_key_counts_as_given(self):
        """Test that the swept key satisfies the inner pipeline."""
        config = parse_config("pulse.nu = 0.01\npulse.Lambda = 0.005\nsweep.param = schedule.n\nsweep.values = 10\n")
        check_mode(config, "sweep")

    def test_sweep_of_unknown_key(self):
        """Test that sweeping a key outside the format is rejected."""
        config = parse_config("schedule.n = 5\nsweep.param = pulse.colour\nsweep.values = 1\n")
        with self.assertRaises(UnknownKeyError):
            check_mode(config, "sweep")


if __name__ == "__main__":
    unittest.main()

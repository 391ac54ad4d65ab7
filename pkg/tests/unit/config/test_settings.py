import unittest
from unittest.mock import patch, mock_open
import os

from casimirstats.config.settings import Configuration


class TestConfiguration(unittest.TestCase):
    """Test the configuration settings."""

    def setUp(self):
        """Set up the test environment."""
        # Save the original environment variables
        self.original_env = os.environ.copy()
        os.environ["CASIMIRSTATS_CONFIG_FILE"] = "/nonexistent/casimirstats.json"
        os.environ["CASIMIRSTATS_RTOL"] = "1e-10"
        os.environ["CASIMIRSTATS_WORKERS"] = "4"

    def tearDown(self):
        """Tear down the test environment."""
        # Restore the original environment variables
        os.environ.clear()
        os.environ.update(self.original_env)

    def test_configuration_with_explicit_values(self):
        """Test configuration with explicit values."""
        config = Configuration(rtol=1e-9, workers=2, pdf_tail_target=1e-6)

        self.assertEqual(config.rtol, 1e-9)
        self.assertEqual(config.workers, 2)
        self.assertEqual(config.pdf_tail_target, 1e-6)

    def test_configuration_from_environment(self):
        """Test configuration from environment variables."""
        config = Configuration()

        self.assertEqual(config.rtol, 1e-10)
        self.assertEqual(config.workers, 4)

    def test_configuration_with_defaults(self):
        """Test configuration with defaults."""
        os.environ.pop("CASIMIRSTATS_RTOL")
        os.environ.pop("CASIMIRSTATS_WORKERS")

        config = Configuration()

        self.assertEqual(config.rtol, 1e-12)
        self.assertEqual(config.atol, 1e-14)
        self.assertEqual(config.samples_per_period, 40)
        self.assertEqual(config.pdf_tail_target, 1e-9)
        self.assertEqual(config.m_max_cap, 1_000_000)
        self.assertEqual(config.workers, 1)
        self.assertEqual(config.log_level, "WARNING")

    @patch("os.path.exists")
    @patch(
        "builtins.open",
        new_callable=mock_open,
        read_data='{"rtol": 1e-11, "m_max_cap": 5000, "plot_style": "dark"}',
    )
    def test_configuration_from_file(self, mock_file, mock_exists):
        """Test configuration from file."""
        os.environ.pop("CASIMIRSTATS_RTOL")
        os.environ["CASIMIRSTATS_CONFIG_FILE"] = "/path/to/config.json"
        mock_exists.return_value = True

        config = Configuration()

        mock_exists.assert_called_with("/path/to/config.json")
        mock_file.assert_called_with("/path/to/config.json", "r")
        self.assertEqual(config.rtol, 1e-11)
        self.assertEqual(config.m_max_cap, 5000)
        # Environment wins over the file
        self.assertEqual(config.workers, 4)
        self.assertEqual(config.get("plot_style"), "dark")

    @patch("os.path.exists")
    @patch("builtins.open", new_callable=mock_open, read_data="not json")
    def test_configuration_with_bad_file(self, mock_file, mock_exists):
        """Test that an unreadable file falls back to defaults."""
        os.environ.pop("CASIMIRSTATS_RTOL")
        mock_exists.return_value = True

        with self.assertLogs("casimirstats.config.settings", level="WARNING"):
            config = Configuration()

        self.assertEqual(config.rtol, 1e-12)

    def test_invalid_values(self):
        """Test that out-of-range settings are rejected."""
        with self.assertRaises(ValueError):
            Configuration(rtol=1e-3)
        with self.assertRaises(ValueError):
            Configuration(samples_per_period=10)
        with self.assertRaises(ValueError):
            Configuration(workers=0)

    def test_get_set(self):
        """Test getting and setting additional settings."""
        config = Configuration(custom_setting="custom-value")

        self.assertEqual(config.get("custom_setting"), "custom-value")
        self.assertIsNone(config.get("nonexistent_setting"))
        self.assertEqual(config.get("nonexistent_setting", "default"), "default")

        config.set("new_setting", "new-value")
        self.assertEqual(config.get("new_setting"), "new-value")

    def test_to_dict(self):
        """Test converting the configuration to a dictionary."""
        config = Configuration(custom_setting="custom-value")

        config_dict = config.to_dict()

        self.assertEqual(config_dict["rtol"], 1e-10)
        self.assertEqual(config_dict["workers"], 4)
        self.assertEqual(config_dict["custom_setting"], "custom-value")


if __name__ == "__main__":
    unittest.main()

from typing import Optional, Dict, Any, Callable
import os
import json
import logging
from pathlib import Path

logger = logging.getLogger(__name__)

_DEFAULTS: Dict[str, Any] = {
    "rtol": 1e-12,
    "atol": 1e-14,
    "samples_per_period": 40,
    "samples_per_pulse": 40,
    "pdf_tail_target": 1e-9,
    "m_max_cap": 1_000_000,
    "workers": 1,
    "log_level": "WARNING",
}

_CASTS: Dict[str, Callable[[Any], Any]] = {
    "rtol": float,
    "atol": float,
    "samples_per_period": int,
    "samples_per_pulse": int,
    "pdf_tail_target": float,
    "m_max_cap": int,
    "workers": int,
    "log_level": str,
}


class Configuration:
    """
    Numerical run settings for casimirstats.

    Each setting is resolved in the order explicit argument, environment
    variable (``CASIMIRSTATS_<NAME>``), JSON config file, built-in default.

    Args:
        rtol: Relative tolerance of the mode-equation integrator.
        atol: Absolute tolerance of the mode-equation integrator.
        samples_per_period: Minimum trajectory samples per period of omega0.
        samples_per_pulse: Minimum trajectory samples across each pulse.
        pdf_tail_target: Tail probability at which automatic PDF truncation stops.
        m_max_cap: Hard cap on automatically chosen PDF lengths.
        workers: Worker processes used by parameter sweeps.
        log_level: Logging level configured by the command-line front end.
        **kwargs: Additional settings, kept verbatim.
    """

    def __init__(
        self,
        rtol: Optional[float] = None,
        atol: Optional[float] = None,
        samples_per_period: Optional[int] = None,
        samples_per_pulse: Optional[int] = None,
        pdf_tail_target: Optional[float] = None,
        m_max_cap: Optional[int] = None,
        workers: Optional[int] = None,
        log_level: Optional[str] = None,
        **kwargs,
    ):
        explicit = {
            "rtol": rtol,
            "atol": atol,
            "samples_per_period": samples_per_period,
            "samples_per_pulse": samples_per_pulse,
            "pdf_tail_target": pdf_tail_target,
            "m_max_cap": m_max_cap,
            "workers": workers,
            "log_level": log_level,
        }

        # Store additional settings
        self._settings: Dict[str, Any] = dict(kwargs)

        file_values = self._load_from_file()

        for name, default in _DEFAULTS.items():
            value = explicit[name]
            if value is None:
                value = os.environ.get(f"CASIMIRSTATS_{name.upper()}")
            if value is None:
                value = file_values.get(name)
            if value is None:
                value = default
            setattr(self, name, _CASTS[name](value))

        self._check()

    def _load_from_file(self) -> Dict[str, Any]:
        """
        Load settings from a JSON config file.

        The file is named by the CASIMIRSTATS_CONFIG_FILE environment variable
        and defaults to ~/.casimirstats/config.json. Keys that are not known
        settings are stored as additional settings.

        Returns:
            The known settings found in the file.
        """
        config_file = os.environ.get(
            "CASIMIRSTATS_CONFIG_FILE",
            str(Path.home() / ".casimirstats" / "config.json"),
        )

        if not os.path.exists(config_file):
            return {}

        try:
            with open(config_file, "r") as f:
                config_data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("Error loading config file %s: %s", config_file, e)
            return {}

        known = {}
        for key, value in config_data.items():
            if key in _DEFAULTS:
                known[key] = value
            else:
                self._settings.setdefault(key, value)
        return known

    def _check(self) -> None:
        if not (0 < self.rtol < 1e-4):
            raise ValueError(f"rtol must lie in (0, 1e-4), got {self.rtol}")
        if self.atol <= 0:
            raise ValueError(f"atol must be positive, got {self.atol}")
        if self.samples_per_period < 40 or self.samples_per_pulse < 40:
            raise ValueError("at least 40 samples per period and per pulse are required")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get an additional setting.

        Args:
            key: Setting key.
            default: Default value if the key is not found.

        Returns:
            The setting value, or the default if not found.
        """
        return self._settings.get(key, default)

    def set(self, key: str, value: Any) -> None:
        """
        Set an additional setting.

        Args:
            key: Setting key.
            value: Setting value.
        """
        self._settings[key] = value

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the configuration to a dictionary.

        Returns:
            Dict containing all settings.
        """
        return {
            **{name: getattr(self, name) for name in _DEFAULTS},
            **self._settings,
        }

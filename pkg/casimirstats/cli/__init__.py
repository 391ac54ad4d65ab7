from .models import (
    ExperimentConfig,
    PulseSection,
    ReservoirSection,
    ScheduleSection,
    StateSection,
    OutputsSection,
    SweepSection,
    RunResult,
)
from .parser import parse_config, load_config, check_mode
from .runner import run
from .output import read_summary, read_table, write_table, config_hash

__all__ = [
    "ExperimentConfig",
    "PulseSection",
    "ReservoirSection",
    "ScheduleSection",
    "StateSection",
    "OutputsSection",
    "SweepSection",
    "RunResult",
    "parse_config",
    "load_config",
    "check_mode",
    "run",
    "read_summary",
    "read_table",
    "write_table",
    "config_hash",
]

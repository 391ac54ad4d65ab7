"""Comma-separated tables with a ``#`` header block."""

from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union
import csv
import hashlib
import json

from .. import __version__
from ..types import SummaryRow
from .models import ExperimentConfig

SUMMARY_COLUMNS = [
    "source",
    "tau",
    "Delta",
    "N",
    "S",
    "sigma_N",
    "mu",
    "nu",
    "Lambda",
    "phi",
    "N_asymptote",
    "T",
    "regime",
]

DISTRIBUTION_COLUMNS = ["m", "f_exact", "f_asymptotic", "regime", "abs_diff"]

_TEXT_COLUMNS = ("source", "regime", "sweep_param")


def format_value(value: Any) -> str:
    """Shortest text that reads back to the same value."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "item"):
        return format_value(value.item())
    return str(value)


def config_hash(config: ExperimentConfig) -> str:
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def header_lines(config: ExperimentConfig, mode: str) -> List[str]:
    return [
        f"casimirstats {__version__}",
        f"mode: {mode}",
        f"config-sha256: {config_hash(config)}",
    ]


def write_table(
    path: Union[str, Path],
    columns: Sequence[str],
    rows: Iterable[Dict[str, Any]],
    header: Optional[Sequence[str]] = None,
) -> Path:
    """
    Write rows as CSV; missing entries are left empty.

    Args:
        path: Output file.
        columns: Column order.
        rows: Records keyed by column name.
        header: Lines written first, each prefixed with ``# ``.

    Returns:
        The path written.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        for line in header or ():
            f.write(f"# {line}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row.get(c)) for c in columns])
    return path


def _parse_cell(column: str, text: str) -> Any:
    if text == "":
        return None
    if column in _TEXT_COLUMNS:
        return text
    if column == "m":
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def read_table(path: Union[str, Path]) -> List[SummaryRow]:
    """Read a table written by ``write_table``, skipping the header block."""
    with open(path, newline="") as f:
        lines = [line for line in f if not line.startswith("#")]
    reader = csv.DictReader(lines)
    return [{k: _parse_cell(k, v) for k, v in row.items()} for row in reader]


def read_summary(path: Union[str, Path]) -> List[SummaryRow]:
    """Summary rows with every number restored to the value that was written."""
    return read_table(path)

from pathlib import Path
from typing import Dict, Optional, Tuple, Union
import logging

import pydantic

from ..exceptions import (
    ConfigurationError,
    MissingKeyError,
    TypeMismatchError,
    UnknownKeyError,
)
from ..types import Mode
from .models import ExperimentConfig

logger = logging.getLogger(__name__)

# Error types reported as a wrong value type rather than a wrong value
_TYPE_ERRORS = (
    "float_parsing",
    "float_type",
    "int_parsing",
    "int_type",
    "int_from_float",
    "bool_parsing",
    "bool_type",
    "literal_error",
    "string_type",
    "list_type",
    "path_type",
    "model_type",
    "dict_type",
)

Position = Tuple[int, int]


def _split_lines(text: str) -> Tuple[Dict, Dict[Tuple[str, ...], Position]]:
    data: Dict = {}
    positions: Dict[Tuple[str, ...], Position] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise ConfigurationError(
                "expected 'key = value'",
                line=lineno,
                column=len(line) - len(line.lstrip()) + 1,
                module="cli",
            )
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        column = len(key_part) - len(key_part.lstrip()) + 1
        value_column = len(key_part) + 1 + len(value_part) - len(value_part.lstrip()) + 1
        path = tuple(key.split("."))
        if not key or any(not p for p in path) or len(path) > 2:
            raise ConfigurationError(f"malformed key {key!r}", line=lineno, column=column, module="cli")
        if path in positions:
            raise ConfigurationError(f"duplicate key {key!r}", line=lineno, column=column, module="cli")

        node = data
        for part in path[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigurationError(f"{part!r} is not a section", line=lineno, column=column, module="cli")
        if path[-1] in node and isinstance(node[path[-1]], dict):
            raise ConfigurationError(f"{key!r} is a section", line=lineno, column=column, module="cli")
        node[path[-1]] = value_part.strip()
        positions[path] = (lineno, column)
        positions[path + ("=",)] = (lineno, value_column)
    return data, positions


def _locate(
    loc: Tuple, positions: Dict[Tuple[str, ...], Position], key_column: bool
) -> Tuple[Tuple[str, ...], Optional[Position]]:
    loc = tuple(str(p) for p in loc)
    # Union members add their own suffix to the location
    for i in range(len(loc), 0, -1):
        if loc[:i] in positions:
            key = loc[:i]
            pos = positions[key] if key_column else positions.get(key + ("=",), positions[key])
            return key, pos
    # A section-level error is reported at the first key of the section
    matches = [pos for path, pos in positions.items() if path[: len(loc)] == loc and path[-1] != "="]
    return loc, (min(matches) if matches else None)


def _raise_first(error: pydantic.ValidationError, positions: Dict[Tuple[str, ...], Position]) -> None:
    located = []
    for err in error.errors():
        key_column = err["type"] in ("extra_forbidden", "missing")
        loc, pos = _locate(err["loc"], positions, key_column)
        located.append((pos or (10**9, 0), loc, err))
    (line, column), loc, err = min(located, key=lambda item: item[0])
    if line == 10**9:
        line, column = None, None

    key = ".".join(loc)
    kwargs = dict(line=line, column=column, module="cli", parameter=key or None)
    if err["type"] == "extra_forbidden":
        raise UnknownKeyError(f"unknown key {key!r}", **kwargs)
    if err["type"] == "missing":
        raise MissingKeyError(f"missing required key {key!r}", **kwargs)
    if err["type"] in _TYPE_ERRORS:
        raise TypeMismatchError(f"{key}: {err['msg']}", **kwargs)
    raise ConfigurationError(f"{key}: {err['msg']}", **kwargs)


def parse_config(text: str, base_dir: Optional[Union[str, Path]] = None) -> ExperimentConfig:
    """
    Parse an experiment configuration.

    The format is one ``key = value`` per line with dotted keys
    (``reservoir.G = 1.5``); ``#`` starts a comment. Values are validated
    strictly and unknown keys are rejected.

    Args:
        text: Configuration text.
        base_dir: Directory that relative file paths are resolved against.

    Returns:
        The validated configuration.

    Raises:
        UnknownKeyError: For a key that is not part of the format.
        MissingKeyError: For a required key that is absent.
        TypeMismatchError: For a value of the wrong type.
        ConfigurationError: For any other invalid value, with line and column.
    """
    data, positions = _split_lines(text)
    pulse = data.get("pulse")
    if isinstance(pulse, dict) and "file" in pulse and base_dir is not None:
        file_path = Path(pulse["file"])
        if not file_path.is_absolute():
            pulse["file"] = str(Path(base_dir) / file_path)
    try:
        config = ExperimentConfig.model_validate(data)
    except pydantic.ValidationError as e:
        _raise_first(e, positions)
    if config.pulse is not None:
        for name in config.pulse.required_keys():
            if getattr(config.pulse, name) is None:
                line, _ = positions.get(("pulse", "shape"), (None, None))
                raise MissingKeyError(
                    f"pulse.shape = {config.pulse.shape} needs pulse.{name}",
                    line=line,
                    column=1 if line else None,
                    module="cli",
                    parameter=f"pulse.{name}",
                )
    logger.debug("Parsed configuration with %d keys", len(positions) // 2)
    return config


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read and parse a configuration file; relative paths are resolved next to it."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigurationError(f"cannot read {str(path)!r}: {e}", module="cli", parameter="config")
    return parse_config(text, base_dir=path.parent)


def check_mode(config: ExperimentConfig, mode: Mode) -> None:
    """
    Verify that a configuration has what a pipeline needs.

    Raises:
        MissingKeyError: Naming the first absent key.
    """

    def missing(key: str) -> MissingKeyError:
        return MissingKeyError(f"mode {mode!r} requires {key}", module="cli", parameter=key)

    if mode == "pdf":
        if config.state is None:
            raise missing("state.sigma_xx")
        return
    if mode == "sweep":
        if config.sweep is None:
            raise missing("sweep.param")
        check_mode(_sweep_probe(config), config.sweep.mode)
        return
    if mode == "compare" and config.pulse is None and config.state is not None:
        # state-only comparison: exact against asymptotic distribution
        return

    if config.schedule.n is None:
        raise missing("schedule.n")
    if config.pulse is None:
        raise missing("pulse.shape")
    if mode == "pulsetrain":
        if config.pulse.shape is None and (config.pulse.nu is None or config.pulse.Lambda is None):
            raise missing("pulse.shape")
        return
    # dynamics and compare integrate the mode equation
    if config.pulse.shape is None:
        raise missing("pulse.shape")


def _sweep_probe(config: ExperimentConfig) -> ExperimentConfig:
    """The configuration at the first sweep point, so the swept key counts as given."""
    sweep = config.sweep
    points = sweep.points()
    if not points:
        raise ConfigurationError("sweep has no points", module="cli", parameter="sweep.values")
    data = config.model_dump(exclude_none=True)
    section, key = sweep.param.split(".", 1)
    data.setdefault(section, {})[key] = points[0]
    data.pop("sweep", None)
    try:
        return ExperimentConfig.model_validate(data)
    except pydantic.ValidationError as e:
        err = e.errors()[0]
        if err["type"] == "extra_forbidden":
            raise UnknownKeyError(f"cannot sweep unknown key {sweep.param!r}", module="cli", parameter="sweep.param")
        raise ConfigurationError(
            f"sweep value {points[0]!r} is invalid for {sweep.param}: {err['msg']}",
            module="cli",
            parameter=sweep.param,
        )

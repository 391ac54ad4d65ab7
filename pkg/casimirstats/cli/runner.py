from multiprocessing import Pool
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union
import logging

import pydantic

from ..config import Configuration
from ..core import CovarianceState, PulseTrain
from ..dynamics import covariance_at, simulate
from ..exceptions import MissingKeyError, RegimeError, ValidationError
from ..pdf import asymptotic_distribution, classify_regime, exact_pdf
from ..pulsetrain import (
    asymptotic_N,
    covariance_from_summary,
    evolve_summary,
    pulse_coefficients,
    resonance_period,
)
from ..stats import distribution_moments, invariant_squeezing, number_variance, purity
from ..types import Mode, SummaryRow
from .models import ExperimentConfig, RunResult
from .output import DISTRIBUTION_COLUMNS, SUMMARY_COLUMNS, header_lines, write_table
from .parser import check_mode

logger = logging.getLogger(__name__)

DistributionRows = Optional[List[Dict[str, Any]]]


def _moments(state: CovarianceState, order: int, settings: Configuration) -> Dict[str, float]:
    if order == 0:
        return {}
    dist = exact_pdf(state, config=settings)
    # Higher moments weight the tail; evaluate well past the probability target
    wide = exact_pdf(state, m_max=min(4 * dist.m_max + 8, settings.m_max_cap), config=settings)
    return {f"moment_{k}": distribution_moments(wide, k) for k in range(1, order + 1)}


def _state_row(
    source: str,
    state: CovarianceState,
    config: ExperimentConfig,
    settings: Configuration,
    **extra: Any,
) -> SummaryRow:
    row: SummaryRow = {
        "source": source,
        "tau": state.tau,
        "Delta": state.Delta,
        "N": state.N,
        "S": invariant_squeezing(state).S,
        "sigma_N": number_variance(state),
        "mu": purity(state),
        "regime": classify_regime(state),
    }
    row.update(extra)
    row.update(_moments(state, config.outputs.moments, settings))
    return row


def _distribution_rows(
    state: CovarianceState, config: ExperimentConfig, settings: Configuration
) -> DistributionRows:
    if not config.outputs.distribution:
        return None
    m_max = None if config.outputs.m_max == "auto" else int(config.outputs.m_max)
    exact = exact_pdf(state, m_max, config=settings)
    try:
        asymptotic = asymptotic_distribution(state, exact.m_max, config=settings).values
    except RegimeError as e:
        logger.info("No asymptotic column: %s", e)
        asymptotic = None
    regime = classify_regime(state)
    rows = []
    for m, f in enumerate(exact.values):
        f_asym = None if asymptotic is None else float(asymptotic[m])
        rows.append(
            {
                "m": m,
                "f_exact": float(f),
                "f_asymptotic": f_asym,
                "regime": regime,
                "abs_diff": None if f_asym is None else abs(float(f) - f_asym),
            }
        )
    return rows


def _coefficients(config: ExperimentConfig) -> Tuple[float, float, float]:
    """nu, Lambda and phi from the pulse shape, overridden by explicit keys."""
    pulse = config.pulse
    nu = Lambda = None
    phi = 0.0
    if pulse.shape is not None:
        nu, Lambda, phi = pulse_coefficients(pulse.profile(), config.reservoir.omega0)
    nu = pulse.nu if pulse.nu is not None else nu
    Lambda = pulse.Lambda if pulse.Lambda is not None else Lambda
    phi = pulse.phi if pulse.phi is not None else phi
    return nu, Lambda, phi


def _period(config: ExperimentConfig, phi: float) -> float:
    schedule = config.schedule
    if schedule.period != "auto":
        return float(schedule.period)
    T = resonance_period(config.reservoir.omega0, phi, schedule.m)
    logger.info("Resonance period T=%.10g for m=%d (phase shift phi=%.6g)", T, schedule.m, phi)
    return T


def _pulse_extras(config: ExperimentConfig, nu: float, Lambda: float, phi: float, T: float) -> Dict[str, Any]:
    r = config.reservoir
    N_asym = None
    if nu > Lambda:
        N_asym = asymptotic_N(nu, Lambda, r.G, r.G0, config.schedule.n)
    return {"nu": nu, "Lambda": Lambda, "phi": phi, "N_asymptote": N_asym, "T": T}


def _without_distribution(config: ExperimentConfig) -> ExperimentConfig:
    return config.model_copy(update={"outputs": config.outputs.model_copy(update={"distribution": False})})


def _run_pdf(config: ExperimentConfig, settings: Configuration) -> Tuple[List[SummaryRow], DistributionRows]:
    state = config.state.covariance()
    return [_state_row("state", state, config, settings)], _distribution_rows(state, config, settings)


def _run_pulsetrain(config: ExperimentConfig, settings: Configuration) -> Tuple[List[SummaryRow], DistributionRows]:
    nu, Lambda, phi = _coefficients(config)
    T = _period(config, phi)
    r = config.reservoir
    summary = evolve_summary(nu, Lambda, r.G, r.G0, config.schedule.n, phi=phi)
    state = covariance_from_summary(summary)
    row = _state_row("pulsetrain", state, config, settings, **_pulse_extras(config, nu, Lambda, phi, T))
    return [row], _distribution_rows(state, config, settings)


def _dynamics_state(config: ExperimentConfig, settings: Configuration) -> Tuple[CovarianceState, Dict[str, Any]]:
    nu, Lambda, phi = _coefficients(config)
    T = _period(config, phi)
    train = PulseTrain(
        profile=config.pulse.profile(),
        n=config.schedule.n,
        period=T,
        offset=config.schedule.offset,
    )
    traj = simulate(train, config.reservoir.params(), config=settings)
    logger.info("Integrated %d pulses, Wronskian drift %.2e", train.n, traj.wronskian_drift)
    state = covariance_at(traj, train.end, config.reservoir.G0)
    return state, _pulse_extras(config, nu, Lambda, phi, T)


def _run_dynamics(config: ExperimentConfig, settings: Configuration) -> Tuple[List[SummaryRow], DistributionRows]:
    state, extras = _dynamics_state(config, settings)
    return [_state_row("dynamics", state, config, settings, **extras)], _distribution_rows(state, config, settings)


def _run_compare(config: ExperimentConfig, settings: Configuration) -> Tuple[List[SummaryRow], DistributionRows]:
    """Dynamics against the closed form; with only a state, its exact against its asymptotic distribution."""
    if config.pulse is None:
        return _run_pdf(config, settings)
    state, extras = _dynamics_state(config, settings)
    rows = [_state_row("dynamics", state, config, settings, **extras)]
    rows.extend(_run_pulsetrain(_without_distribution(config), settings)[0])
    source = config.state.covariance() if config.state is not None else state
    return rows, _distribution_rows(source, config, settings)


_PIPELINES = {
    "pdf": _run_pdf,
    "pulsetrain": _run_pulsetrain,
    "dynamics": _run_dynamics,
    "compare": _run_compare,
}


def _with_value(config: ExperimentConfig, param: str, value: float) -> ExperimentConfig:
    data = config.model_dump(exclude_none=True)
    section, key = param.split(".", 1)
    data.setdefault(section, {})[key] = value
    data.pop("sweep", None)
    try:
        return ExperimentConfig.model_validate(data)
    except pydantic.ValidationError as e:
        raise ValidationError(
            f"sweep value {value!r} is invalid for {param}: {e.errors()[0]['msg']}",
            module="cli",
            parameter=param,
        )


def _sweep_point(args: Tuple[ExperimentConfig, str, float, Mode, Configuration]) -> SummaryRow:
    config, param, value, mode, settings = args
    point = _with_value(config, param, value)
    row = _PIPELINES[mode](_without_distribution(point), settings)[0][0]
    return {"sweep_param": param, "sweep_value": value, **row}


def _run_sweep(config: ExperimentConfig, settings: Configuration, workers: int) -> List[SummaryRow]:
    sweep = config.sweep
    tasks = [(config, sweep.param, value, sweep.mode, settings) for value in sweep.points()]
    logger.info("Sweeping %s over %d points with %d workers", sweep.param, len(tasks), workers)
    if workers > 1 and len(tasks) > 1:
        with Pool(processes=min(workers, len(tasks))) as pool:
            return pool.map(_sweep_point, tasks)
    return [_sweep_point(task) for task in tasks]


def run(
    config: ExperimentConfig,
    *,
    mode: Optional[Mode] = None,
    out_dir: Optional[Union[str, Path]] = None,
    workers: Optional[int] = None,
    m_max: Optional[int] = None,
    settings: Optional[Configuration] = None,
) -> RunResult:
    """
    Run a pipeline and write its tables.

    Writes ``summary.csv`` and, unless disabled or in sweep mode,
    ``distribution.csv``. Identical inputs give byte-identical files.

    Args:
        config: Parsed configuration.
        mode: Pipeline; overrides ``config.mode``.
        out_dir: Output directory; overrides ``outputs.dir``.
        workers: Sweep worker processes; defaults to ``settings.workers``.
        m_max: Distribution length; overrides ``outputs.m_max``.
        settings: Numerical settings.

    Returns:
        The written paths and the summary rows.

    Raises:
        MissingKeyError: If no mode is given or a key the mode needs is absent.
        CasimirStatsError: Any error from the numerical modules.
    """
    settings = settings or Configuration()
    mode = mode or config.mode
    if mode is None:
        raise MissingKeyError("no mode given", module="cli", parameter="mode", remedy="set mode or pass --mode")
    if m_max is not None:
        config = config.model_copy(update={"outputs": config.outputs.model_copy(update={"m_max": int(m_max)})})
    check_mode(config, mode)

    out = Path(out_dir or config.outputs.dir or ".")
    header = header_lines(config, mode)
    moment_columns = [f"moment_{k}" for k in range(1, config.outputs.moments + 1)]

    try:
        if mode == "sweep":
            rows = _run_sweep(config, settings, workers or settings.workers)
            columns = ["sweep_param", "sweep_value"] + SUMMARY_COLUMNS + moment_columns
            distribution = None
        else:
            rows, distribution = _PIPELINES[mode](config, settings)
            columns = SUMMARY_COLUMNS + moment_columns
    except pydantic.ValidationError as e:
        raise ValidationError(f"invalid derived input: {e.errors()[0]['msg']}", module="cli")

    paths = {"summary": write_table(out / "summary.csv", columns, rows, header)}
    if distribution is not None:
        paths["distribution"] = write_table(out / "distribution.csv", DISTRIBUTION_COLUMNS, distribution, header)
    logger.info("Wrote %s", ", ".join(str(p) for p in paths.values()))
    return RunResult(exit_code=0, paths=paths, rows=rows)

from typing import List, Optional, Sequence
import argparse
import logging
import sys

from .. import __version__
from ..config import Configuration
from ..exceptions import CasimirStatsError
from .parser import load_config
from .runner import run

logger = logging.getLogger("casimirstats")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimirstats",
        description="Photon statistics of a dissipative parametrically driven cavity mode.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run the pipeline described by a config file")
    run_parser.add_argument("config", help="experiment configuration (key = value lines)")
    run_parser.add_argument(
        "--mode",
        choices=["dynamics", "pulsetrain", "pdf", "compare", "sweep"],
        help="pipeline to run; overrides the config's mode",
    )
    run_parser.add_argument("--out-dir", help="directory for the output tables")
    run_parser.add_argument("--workers", type=int, help="worker processes for sweeps")
    run_parser.add_argument("--m-max", type=int, help="highest photon number in the distribution table")
    run_parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="reserved; all pipelines are deterministic",
    )
    run_parser.add_argument("-v", "--verbose", action="count", default=0, help="more log output")
    return parser


def _setup_logging(level: str, verbose: int) -> None:
    if verbose >= 2:
        level = "DEBUG"
    elif verbose == 1:
        level = "INFO"
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    # Validity warnings from the numerical modules go to the log
    logging.captureWarnings(True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the ``casimirstats`` command.

    Returns:
        0 on success, otherwise the exit code of the error class raised.
    """
    args = build_parser().parse_args(argv)
    try:
        settings = Configuration(workers=args.workers)
    except ValueError as e:
        print(f"casimirstats: [config] {e}", file=sys.stderr)
        return 2
    _setup_logging(settings.log_level, args.verbose)
    if args.seed is not None:
        logger.debug("Seed %d ignored; pipelines are deterministic", args.seed)

    try:
        config = load_config(args.config)
        result = run(
            config,
            mode=args.mode,
            out_dir=args.out_dir,
            workers=args.workers,
            m_max=args.m_max,
            settings=settings,
        )
    except CasimirStatsError as e:
        print(f"casimirstats: {e.describe()}", file=sys.stderr)
        return e.exit_code
    for name, path in result.paths.items():
        print(f"{name}: {path}")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

"""
Command-line surface: flags -> ExperimentConfig -> coordinator, with exit
codes 0 (success), 2 (validation error) and 3 (runtime error)
"""

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from src.config import (
    DEFAULT_BENCHMARK_ITERATIONS,
    DEFAULT_DTSP_ITERATIONS,
    DEFAULT_POPULATION_SIZE,
    DEFAULT_SEED_COUNT,
    ledger_snapshot,
)
from src.coordinator import ExperimentCoordinator
from src.exceptions import VALIDATION_ERRORS, ConfigurationError
from src.models import ExperimentConfig, ExperimentMode, InstanceStyle

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


def _split(text: Optional[str]) -> List[str]:
    return [part.strip() for part in (text or "").split(",") if part.strip()]


def parse_seeds(text: Optional[str]) -> List[int]:
    """
    '1,2,5' is an explicit list; a bare integer N means seeds 0..N-1.
    A single explicit seed is written with a trailing comma ('7,').
    """
    if text is None:
        return list(range(DEFAULT_SEED_COUNT))
    try:
        if "," in text:
            return [int(part) for part in _split(text)]
        return list(range(int(text)))
    except ValueError:
        raise ConfigurationError(f"--seeds expects an integer list or count, got '{text}'") from None


def parse_overrides(items: Optional[Sequence[str]]) -> Dict[str, float]:
    """`--set group.name=value` pairs"""
    overrides: Dict[str, float] = {}
    for item in items or []:
        key, separator, value = item.partition("=")
        if not separator or not key.strip():
            raise ConfigurationError(f"--set expects <param>=<value>, got '{item}'")
        try:
            overrides[key.strip()] = float(value)
        except ValueError:
            raise ConfigurationError(f"--set {key.strip()}: '{value}' is not a number") from None
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="osoma",
        description="SOMA / OSOMA / DE / PSO experiments on benchmark functions and dynamic TSP",
    )
    parser.add_argument("--mode", choices=[mode.value for mode in ExperimentMode])
    parser.add_argument("--algorithms", default="soma,osoma,de,pso",
                        help="comma-separated subset of soma,osoma,de,pso")
    parser.add_argument("--function", default=None,
                        help="benchmark function name(s), comma-separated (e.g. sphere,f5)")
    parser.add_argument("--dims", default="2", help="dimension(s), comma-separated")
    parser.add_argument("--pop", type=int, default=DEFAULT_POPULATION_SIZE)
    parser.add_argument("--iters", type=int, default=None,
                        help=f"migrations (default {DEFAULT_BENCHMARK_ITERATIONS} benchmark, "
                             f"{DEFAULT_DTSP_ITERATIONS} dtsp)")
    parser.add_argument("--target", type=float, default=None,
                        help="stop a benchmark run once best fitness <= target")
    parser.add_argument("--seeds", default=None,
                        help=f"seed list '1,2,3' or count N (default {DEFAULT_SEED_COUNT})")
    parser.add_argument("--instance", type=Path, default=None)
    parser.add_argument("--schedule", type=Path, default=None)
    parser.add_argument("--reinit-on-event", action="store_true",
                        help="rebuild the population after each event instead of repairing it")
    parser.add_argument("--set", dest="overrides", action="append", metavar="PARAM=VALUE",
                        help="override a ledger parameter (repeatable)")
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--cities", type=int, default=11, help="city count for generate mode")
    parser.add_argument("--style", choices=[style.value for style in InstanceStyle],
                        default=InstanceStyle.EUCLIDEAN.value)
    parser.add_argument("--show-defaults", action="store_true",
                        help="print every ledger default as JSON and exit")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Validated ExperimentConfig; pydantic errors become ConfigurationError"""
    if args.mode is None:
        raise ConfigurationError("--mode is required")
    mode = ExperimentMode(args.mode)
    if args.iters is None:
        iterations = DEFAULT_DTSP_ITERATIONS if mode == ExperimentMode.DTSP else DEFAULT_BENCHMARK_ITERATIONS
    else:
        iterations = args.iters
    try:
        dimensions = [int(part) for part in _split(args.dims)]
    except ValueError:
        raise ConfigurationError(f"--dims expects integers, got '{args.dims}'") from None

    fields = dict(
        mode=mode,
        algorithms=[name.lower() for name in _split(args.algorithms)],
        functions=_split(args.function),
        dimensions=dimensions,
        population_size=args.pop,
        max_iterations=iterations,
        seeds=parse_seeds(args.seeds),
        overrides=parse_overrides(args.overrides),
        instance_path=args.instance,
        schedule_path=args.schedule,
        reinit_on_event=args.reinit_on_event,
        output_dir=args.out,
        cities=args.cities,
        style=args.style,
    )
    if args.target is not None:
        fields["target_fitness"] = args.target
    try:
        return ExperimentConfig(**fields)
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        message = error["msg"]
        raise ConfigurationError(f"{field}: {message}" if field else message) from None


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one CLI invocation and return its exit code"""
    args = build_parser().parse_args(argv)

    if args.show_defaults:
        print(json.dumps(ledger_snapshot(), indent=2))
        return EXIT_OK

    try:
        config = config_from_args(args)
        logger.info(f"Starting {config.mode.value} experiment, output to {config.output_dir}")
        paths = asyncio.run(ExperimentCoordinator().run(config))
    except VALIDATION_ERRORS as e:
        logger.error(f"Validation error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as e:
        logger.exception(f"Experiment failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME

    for path in paths:
        print(path)
    return EXIT_OK

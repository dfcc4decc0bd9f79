"""
Experiment Coordinator
Runs benchmark suites and dynamic TSP scenarios across algorithms and seeds
"""

import asyncio
import logging
import statistics
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from src.benchmarks import BenchmarkFunction, get_function
from src.config import ALGORITHMS, settings
from src.dynamic import CostProvider, ReplayProvider, simulate
from src.exceptions import ExperimentRuntimeError
from src.instances import (
    CONVERGENCE_COLUMNS,
    HISTORY_COLUMNS,
    SUMMARY_COLUMNS,
    generate_instance,
    read_instance,
    read_schedule,
    write_csv,
    write_final_tour,
    write_instance,
)
from src.models import (
    Algorithm,
    ExperimentConfig,
    ExperimentMode,
    FinalTourRecord,
    RunResult,
    ScenarioResult,
)
from src.optimizers import run

logger = logging.getLogger(__name__)

BenchmarkKey = Tuple[str, str, int, int]


class ExperimentCoordinator:
    """Fans independent seeded runs out to worker threads and writes sorted results"""

    def __init__(self, max_workers: Optional[int] = None):
        requested = settings.MAX_WORKERS if max_workers is None else max_workers
        if requested < 1:
            logger.warning(f"Worker count {requested} is not positive; using 1")
        self.max_workers = max(1, requested)
        logger.info(f"Initialized coordinator with {self.max_workers} workers")

    async def run(self, config: ExperimentConfig) -> List[Path]:
        """Dispatch on the experiment mode; returns the files written"""
        if config.mode == ExperimentMode.BENCHMARK:
            return await self.run_benchmark_suite(config)
        if config.mode == ExperimentMode.DTSP:
            return await self.run_dtsp_scenario(config)
        return self.generate(config)

    async def _gather(self, jobs: List[Callable[[], Any]], label: str) -> List[Any]:
        """Run blocking jobs in threads, at most `max_workers` at a time"""
        semaphore = asyncio.Semaphore(self.max_workers)

        async def run_job(job: Callable[[], Any]) -> Any:
            async with semaphore:
                return await asyncio.to_thread(job)

        results = await asyncio.gather(*(run_job(job) for job in jobs), return_exceptions=True)

        failures = [result for result in results if isinstance(result, Exception)]
        for failure in failures:
            logger.error(f"{label} run failed: {type(failure).__name__}: {failure}")
        if failures:
            raise ExperimentRuntimeError(
                f"{len(failures)} of {len(jobs)} {label} run(s) failed; see the log for details"
            )
        return results

    def validate_benchmark(self, config: ExperimentConfig) -> List[BenchmarkFunction]:
        """Resolve every function and check every dimension before any run starts"""
        functions = [get_function(name) for name in config.functions]
        for function in functions:
            for dim in config.dimensions:
                function.check_dimension(dim)
        return functions

    async def run_benchmark_suite(self, config: ExperimentConfig) -> List[Path]:
        """One run per (algorithm, function, dimension, seed); writes summary and convergence CSVs"""
        functions = self.validate_benchmark(config)
        run_config = config.run_config()

        keys: List[BenchmarkKey] = []
        jobs = []
        for algorithm in config.algorithms:
            for function in functions:
                for dim in config.dimensions:
                    space = function.space(dim)
                    for seed in config.seeds:
                        keys.append((algorithm.value, function.name, dim, seed))
                        jobs.append(
                            lambda a=algorithm, f=function, s=space, sd=seed: run(a, f, s, run_config, sd)
                        )

        logger.info(
            f"Starting benchmark suite: {len(config.algorithms)} algorithm(s), "
            f"{len(functions)} function(s), {len(config.dimensions)} dimension(s), "
            f"{len(config.seeds)} seed(s)"
        )
        results: List[RunResult] = await self._gather(jobs, "benchmark")
        runs = sorted(zip(keys, results), key=lambda pair: pair[0])

        for (algorithm, function, dim, seed), result in runs:
            logger.info(
                f"{ALGORITHMS[algorithm]['name']} {function} d={dim} seed {seed}: "
                f"{result.best_fitness:.6e} after {result.iterations} iterations"
            )

        output_dir = Path(config.output_dir)
        paths = [
            write_csv(self.summary_frame(runs), output_dir / "summary.csv"),
            write_csv(self.convergence_frame(runs), output_dir / "convergence.csv"),
        ]
        logger.info(f"Benchmark suite finished; wrote {', '.join(str(p) for p in paths)}")
        return paths

    @staticmethod
    def summary_frame(runs: List[Tuple[BenchmarkKey, RunResult]]) -> pd.DataFrame:
        """Per-seed rows, each cell closed by its aggregate row"""
        rows: List[Dict[str, Any]] = []
        cells: Dict[Tuple[str, str, int], List[RunResult]] = {}
        for (algorithm, function, dim, seed), result in runs:
            cells.setdefault((algorithm, function, dim), []).append(result)

        for (algorithm, function, dim), results in cells.items():
            finals = [result.best_fitness for result in results]
            for result in results:
                rows.append({
                    "algorithm": algorithm,
                    "function": function,
                    "dimension": dim,
                    "seed": result.seed,
                    "final_fitness": result.best_fitness,
                    "iterations": result.iterations,
                    "mean_fitness": None,
                    "median_fitness": None,
                })
            median = statistics.median(finals)
            rows.append({
                "algorithm": algorithm,
                "function": function,
                "dimension": dim,
                "seed": "aggregate",
                "final_fitness": median,
                "iterations": statistics.median(result.iterations for result in results),
                "mean_fitness": statistics.fmean(finals),
                "median_fitness": median,
            })
        return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)

    @staticmethod
    def convergence_frame(runs: List[Tuple[BenchmarkKey, RunResult]]) -> pd.DataFrame:
        rows = [
            (algorithm, function, dim, seed, iteration, best)
            for (algorithm, function, dim, seed), result in runs
            for iteration, best in result.history
        ]
        return pd.DataFrame(rows, columns=CONVERGENCE_COLUMNS)

    def load_scenario(self, config: ExperimentConfig) -> CostProvider:
        """Parse and cross-validate the instance and schedule files"""
        instance = read_instance(config.instance_path)
        schedule = read_schedule(config.schedule_path)
        provider = ReplayProvider(instance, schedule)
        ticks = schedule.ticks()
        logger.info(
            f"Loaded {len(instance.city_ids)} cities, events at iterations {ticks or 'none'}, "
            f"added cities {schedule.added_cities() or 'none'}"
        )
        late = [t for t in ticks if t > config.max_iterations]
        if late:
            logger.warning(f"Events at iterations {late} fall after the last iteration and never apply")
        return provider

    async def run_dtsp_scenario(
        self,
        config: ExperimentConfig,
        provider: Optional[CostProvider] = None,
    ) -> List[Path]:
        """All algorithms on identical seeds and instance; writes history CSV and final tours"""
        provider = provider or self.load_scenario(config)
        run_config = config.run_config()

        keys: List[Tuple[str, int]] = []
        jobs = []
        for algorithm in config.algorithms:
            for seed in config.seeds:
                keys.append((algorithm.value, seed))
                jobs.append(
                    lambda a=algorithm, sd=seed: simulate(
                        provider, a, run_config, sd, config.reinit_on_event
                    )
                )

        logger.info(
            f"Starting DTSP scenario: {len(config.algorithms)} algorithm(s), "
            f"{len(config.seeds)} seed(s), {run_config.max_iterations} iterations"
        )
        results: List[ScenarioResult] = await self._gather(jobs, "dtsp")
        scenarios = [result for _, result in sorted(zip(keys, results), key=lambda pair: pair[0])]

        output_dir = Path(config.output_dir)
        paths = [write_csv(self.history_frame(scenarios), output_dir / "history.csv")]
        for algorithm in config.algorithms:
            record = self.best_final_tour(scenarios, algorithm)
            logger.info(
                f"{ALGORITHMS[algorithm.value]['name']} best final cost {record.cost} (seed {record.seed})"
            )
            paths.append(write_final_tour(record, output_dir / f"final_tour_{algorithm.value}.json"))
        logger.info(f"DTSP scenario finished; wrote {len(paths)} file(s) to {output_dir}")
        return paths

    @staticmethod
    def history_frame(scenarios: List[ScenarioResult]) -> pd.DataFrame:
        rows = [
            (row.iteration, scenario.algorithm, row.best_cost, row.event, scenario.seed)
            for scenario in scenarios
            for row in scenario.history
        ]
        return pd.DataFrame(rows, columns=HISTORY_COLUMNS)

    @staticmethod
    def best_final_tour(scenarios: List[ScenarioResult], algorithm: Algorithm) -> FinalTourRecord:
        """Lowest final cost over seeds; ties go to the lowest seed"""
        own = [scenario for scenario in scenarios if scenario.algorithm == algorithm.value]
        best = min(own, key=lambda scenario: (scenario.final_cost, scenario.seed))
        return FinalTourRecord(
            algorithm=best.algorithm,
            tour=best.final_tour,
            cost=best.final_cost,
            seed=best.seed,
        )

    def generate(self, config: ExperimentConfig) -> List[Path]:
        """One instance file per seed (instance.json for a single seed)"""
        instances = [
            (seed, generate_instance(config.cities, seed, config.style)) for seed in config.seeds
        ]
        output_dir = Path(config.output_dir)
        paths = []
        for seed, instance in instances:
            name = "instance.json" if len(instances) == 1 else f"instance_{seed}.json"
            paths.append(write_instance(instance, output_dir / name))
        logger.info(f"Generated {len(paths)} instance file(s) in {output_dir}")
        return paths

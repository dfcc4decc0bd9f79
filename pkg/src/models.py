"""
Data models for the OSOMA toolkit
"""

import math
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from src.config import (
    DEFAULT_POPULATION_SIZE,
    PARAMETER_LEDGER,
    parameter_defaults,
)
from src.exceptions import ConfigurationError


class Algorithm(str, Enum):
    """Optimizers available to every experiment"""
    SOMA = "soma"
    OSOMA = "osoma"
    DE = "de"
    PSO = "pso"


class ExperimentMode(str, Enum):
    """What the CLI runs"""
    BENCHMARK = "benchmark"
    DTSP = "dtsp"
    GENERATE = "generate"


class EventKind(str, Enum):
    """Kinds of timed changes to the cost matrix"""
    ADD_CITY = "add_city"
    UPDATE_EDGES = "update_edges"


class InstanceStyle(str, Enum):
    """Synthetic instance generators"""
    EUCLIDEAN = "euclidean"
    RANDOM_ASYMMETRIC = "random-asymmetric"


class SomaParams(BaseModel):
    """Migration parameters shared by SOMA and OSOMA"""
    path_length: float = 3.0
    step: float = 0.11
    pr: float = 0.1
    lambda_low: float = 0.60
    lambda_high: float = 0.85

    @model_validator(mode="after")
    def _check_ranges(self) -> "SomaParams":
        if not 0 < self.step <= self.path_length:
            raise ValueError("step must satisfy 0 < step <= path_length")
        if not 0.0 <= self.pr <= 1.0:
            raise ValueError("pr must lie in [0, 1]")
        if not 0.0 < self.lambda_low < self.lambda_high < 1.0:
            raise ValueError("lambda bounds must satisfy 0 < low < high < 1")
        return self


class DeParams(BaseModel):
    """Differential evolution parameters"""
    f: float = 0.5
    cr: float = 0.9

    @model_validator(mode="after")
    def _check_ranges(self) -> "DeParams":
        if not 0.0 < self.f <= 2.0:
            raise ValueError("f must satisfy 0 < f <= 2")
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError("cr must lie in [0, 1]")
        return self


class PsoParams(BaseModel):
    """Particle swarm coefficients"""
    inertia: float = 0.729
    cognitive: float = 1.49445
    social: float = 1.49445

    @model_validator(mode="after")
    def _check_ranges(self) -> "PsoParams":
        if self.inertia < 0 or self.cognitive < 0 or self.social < 0:
            raise ValueError("PSO coefficients must be non-negative")
        return self


class RunConfig(BaseModel):
    """Everything one optimizer run needs besides objective, space and seed"""
    population_size: int = DEFAULT_POPULATION_SIZE
    max_iterations: int = Field(default=100, ge=0)
    target_fitness: float = -math.inf
    soma: SomaParams = Field(default_factory=SomaParams)
    de: DeParams = Field(default_factory=DeParams)
    pso: PsoParams = Field(default_factory=PsoParams)

    @classmethod
    def from_overrides(
        cls,
        overrides: Optional[Dict[str, float]] = None,
        **kwargs,
    ) -> "RunConfig":
        """Build a config from ledger defaults plus `group.name` overrides"""
        groups = {group: parameter_defaults(group) for group in ("soma", "de", "pso")}
        for key, value in (overrides or {}).items():
            if key not in PARAMETER_LEDGER:
                raise ConfigurationError(f"Unknown parameter '{key}'")
            group, name = key.split(".", 1)
            groups[group][name] = float(value)
        return cls(
            soma=SomaParams(**groups["soma"]),
            de=DeParams(**groups["de"]),
            pso=PsoParams(**groups["pso"]),
            **kwargs,
        )


class RunResult(BaseModel):
    """Outcome of one continuous optimizer run"""
    algorithm: str
    seed: int
    best_position: List[float]
    best_fitness: float
    history: List[Tuple[int, float]]

    @field_validator("history")
    @classmethod
    def _non_increasing(cls, history: List[Tuple[int, float]]) -> List[Tuple[int, float]]:
        for (_, previous), (iteration, current) in zip(history, history[1:]):
            if current > previous:
                raise ValueError(f"history increases at iteration {iteration}")
        return history

    @property
    def iterations(self) -> int:
        """Number of completed iterations"""
        return self.history[-1][0] if self.history else 0


class HistoryRow(BaseModel):
    """Best tour cost after one simulation iteration"""
    iteration: int
    best_cost: float
    events: List[EventKind] = []

    @property
    def event(self) -> str:
        return "+".join(kind.value for kind in self.events)


class ScenarioResult(BaseModel):
    """Outcome of one dynamic TSP simulation"""
    algorithm: str
    seed: int
    history: List[HistoryRow]
    final_tour: List[str]
    final_cost: float


class FinalTourRecord(BaseModel):
    """Final-tour JSON written per algorithm"""
    algorithm: str
    tour: List[str]
    cost: float
    seed: int


class CityRecord(BaseModel):
    """A city as stored in instance and schedule files"""
    id: str
    label: str = ""


class InstanceFile(BaseModel):
    """Instance file: cities plus a square cost matrix ordered like `cities`"""
    cities: List[CityRecord]
    costs: List[List[float]]
    directed: bool = True

    @model_validator(mode="after")
    def _check_matrix(self) -> "InstanceFile":
        n = len(self.cities)
        if n < 2:
            raise ValueError("an instance needs at least 2 cities")
        ids = [city.id for city in self.cities]
        if len(set(ids)) != n:
            raise ValueError("city ids must be unique")
        if len(self.costs) != n:
            raise ValueError(f"costs must have {n} rows, got {len(self.costs)}")
        for i, row in enumerate(self.costs):
            if len(row) != n:
                raise ValueError(f"costs row {i} must have {n} entries, got {len(row)}")
            for j, value in enumerate(row):
                if not math.isfinite(value) or value < 0:
                    raise ValueError(f"costs[{i}][{j}] must be finite and >= 0")
            if row[i] != 0:
                raise ValueError(f"diagonal entry costs[{i}][{i}] must be 0")
        if not self.directed:
            for i in range(n):
                for j in range(i + 1, n):
                    if self.costs[i][j] != self.costs[j][i]:
                        raise ValueError(
                            f"undirected instance is not symmetric at ({i}, {j})"
                        )
        return self

    @property
    def city_ids(self) -> List[str]:
        return [city.id for city in self.cities]


class ExperimentConfig(BaseModel):
    """Validated configuration of one CLI invocation"""
    mode: ExperimentMode
    algorithms: List[Algorithm] = Field(default_factory=lambda: list(Algorithm))
    functions: List[str] = []
    dimensions: List[int] = Field(default_factory=lambda: [2])
    population_size: int = DEFAULT_POPULATION_SIZE
    max_iterations: int = Field(default=100, ge=0)
    target_fitness: float = -math.inf
    seeds: List[int]
    overrides: Dict[str, float] = {}
    instance_path: Optional[Path] = None
    schedule_path: Optional[Path] = None
    reinit_on_event: bool = False
    output_dir: Path = Path("results")
    cities: int = 11
    style: InstanceStyle = InstanceStyle.EUCLIDEAN

    @field_validator("seeds")
    @classmethod
    def _check_seeds(cls, seeds: List[int]) -> List[int]:
        if not seeds:
            raise ValueError("seed list must not be empty")
        if len(set(seeds)) != len(seeds):
            raise ValueError("seed list contains duplicates")
        for seed in seeds:
            if not 0 <= seed < 2 ** 64:
                raise ValueError(f"seed {seed} is not a 64-bit unsigned integer")
        return seeds

    @field_validator("dimensions")
    @classmethod
    def _check_dimensions(cls, dimensions: List[int]) -> List[int]:
        if not dimensions:
            raise ValueError("at least one dimension is required")
        if any(dim < 1 for dim in dimensions):
            raise ValueError("dimensions must be positive")
        if len(set(dimensions)) != len(dimensions):
            raise ValueError("dimension list contains duplicates")
        return dimensions

    @field_validator("algorithms")
    @classmethod
    def _check_algorithms(cls, algorithms: List[Algorithm]) -> List[Algorithm]:
        if not algorithms:
            raise ValueError("at least one algorithm is required")
        if len(set(algorithms)) != len(algorithms):
            raise ValueError("algorithm list contains duplicates")
        return algorithms

    @field_validator("overrides")
    @classmethod
    def _check_overrides(cls, overrides: Dict[str, float]) -> Dict[str, float]:
        unknown = sorted(set(overrides) - set(PARAMETER_LEDGER))
        if unknown:
            raise ValueError(f"unknown parameter(s): {', '.join(unknown)}")
        return overrides

    @model_validator(mode="after")
    def _check_mode(self) -> "ExperimentConfig":
        if self.mode == ExperimentMode.BENCHMARK and not self.functions:
            raise ValueError("benchmark mode requires at least one function name")
        if self.mode == ExperimentMode.DTSP and self.instance_path is None:
            raise ValueError("dtsp mode requires an instance file")
        if self.mode != ExperimentMode.GENERATE:
            if self.population_size < 2:
                raise ValueError("population size must be at least 2")
            if Algorithm.DE in self.algorithms and self.population_size < 4:
                raise ValueError("differential evolution needs a population of at least 4")
            # Parameter values are checked here so nothing runs with a bad override
            self.run_config()
        return self

    def run_config(self) -> RunConfig:
        """Per-run configuration derived from this experiment"""
        return RunConfig.from_overrides(
            self.overrides,
            population_size=self.population_size,
            max_iterations=self.max_iterations,
            target_fitness=self.target_fitness,
        )

"""
Shared foundations for every optimizer: real vectors, box bounds,
populations with a leader, deterministic random streams and the
objective-evaluation contract.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, model_validator

from src.exceptions import ConfigurationError, DimensionError

logger = logging.getLogger(__name__)

# A point in d-dimensional continuous space (1-D float64 array)
RealVector = np.ndarray

# Objective contract: RealVector -> float. Objectives that also accept a
# (k, d) batch and return k values advertise it with `vectorized = True`.
Objective = Callable[[np.ndarray], Any]


def as_vector(values: Sequence[float], dim: Optional[int] = None) -> RealVector:
    """Copy `values` into a finite 1-D float vector, optionally of length `dim`"""
    vector = np.array(values, dtype=float)
    if vector.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got shape {vector.shape}")
    if dim is not None and vector.shape[0] != dim:
        raise DimensionError(f"expected {dim} components, got {vector.shape[0]}")
    if not np.all(np.isfinite(vector)):
        raise ConfigurationError("vector components must be finite")
    return vector


class RandomStream:
    """
    Seeded, splittable random stream.

    Backed by numpy's PCG64 bit generator fed through a SeedSequence, so a
    given seed yields the same draws on every platform. `split(key)` derives
    an independent child stream without consuming parent draws.
    """

    def __init__(self, seed: int, spawn_key: Tuple[int, ...] = ()):
        self.seed = int(seed)
        self.spawn_key = tuple(spawn_key)
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    def split(self, key: int) -> "RandomStream":
        """Independent child stream identified by `key`"""
        return RandomStream(self.seed, self.spawn_key + (int(key),))

    def uniform(self, low=0.0, high=1.0, size=None):
        """Draws in [low, high)"""
        return self._generator.uniform(low, high, size)

    def random(self, size=None):
        """Draws in [0, 1)"""
        return self._generator.random(size)

    def integers(self, low: int, high: Optional[int] = None, size=None):
        return self._generator.integers(low, high, size)

    def permutation(self, items):
        return self._generator.permutation(items)

    def choice(self, items, size=None, replace: bool = True):
        return self._generator.choice(items, size=size, replace=replace)

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, spawn_key={self.spawn_key})"


class SearchSpace(BaseModel):
    """Per-dimension box bounds"""
    lower: List[float]
    upper: List[float]

    @model_validator(mode="after")
    def _check_bounds(self) -> "SearchSpace":
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper bounds differ in length")
        if not self.lower:
            raise ValueError("a search space needs at least one dimension")
        for k, (low, high) in enumerate(zip(self.lower, self.upper)):
            if not low < high:
                raise ValueError(f"lower[{k}] must be < upper[{k}]")
        return self

    @classmethod
    def cube(cls, low: float, high: float, dim: int) -> "SearchSpace":
        """Same interval in every dimension"""
        return cls(lower=[low] * dim, upper=[high] * dim)

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @cached_property
    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.lower, dtype=float), np.asarray(self.upper, dtype=float)

    def contains(self, position: np.ndarray) -> bool:
        lower, upper = self.bounds
        position = np.asarray(position, dtype=float)
        return bool(np.all((position >= lower) & (position <= upper)))


@dataclass
class Individual:
    """One agent; `position` is a RealVector or, for tours, a city tuple"""
    position: Any
    fitness: float


@dataclass
class Population:
    """Agent set; the leader is the lowest-fitness member"""
    members: List[Individual]
    leader_index: int = 0

    def __post_init__(self):
        if not self.members:
            raise ConfigurationError("a population needs at least one member")

    def __len__(self) -> int:
        return len(self.members)

    @property
    def leader(self) -> Individual:
        return self.members[self.leader_index]

    @property
    def best_fitness(self) -> float:
        return self.leader.fitness

    def fitnesses(self) -> np.ndarray:
        return np.array([member.fitness for member in self.members], dtype=float)


def select_leader(pop: Population) -> int:
    """Index of the minimum fitness (ties -> lowest index); also stored on `pop`"""
    # np.argmin returns the first occurrence of the minimum
    pop.leader_index = int(np.argmin(pop.fitnesses()))
    return pop.leader_index


def evaluate_points(objective: Objective, points: np.ndarray) -> np.ndarray:
    """Evaluate `objective` on each row of a (k, d) array"""
    if getattr(objective, "vectorized", False):
        return np.asarray(objective(points), dtype=float).reshape(len(points))
    return np.array([float(objective(point)) for point in points], dtype=float)


def init_population(
    space: SearchSpace,
    size: int,
    objective: Objective,
    rng: RandomStream,
) -> Population:
    """Uniformly sampled population with evaluated fitness and leader set"""
    if size < 2:
        raise ConfigurationError(
            f"population size must be at least 2 (leader plus followers), got {size}"
        )
    lower, upper = space.bounds
    positions = rng.uniform(lower, upper, size=(size, space.dimension))
    fitness = evaluate_points(objective, positions)
    pop = Population(
        members=[Individual(position=positions[k].copy(), fitness=float(fitness[k]))
                 for k in range(size)]
    )
    select_leader(pop)
    return pop


def confine(
    position: Union[RealVector, np.ndarray],
    space: SearchSpace,
    rng: RandomStream,
) -> np.ndarray:
    """
    Resample out-of-bounds components uniformly within their dimension.

    Accepts a single vector or a (k, d) batch; in-bounds components pass
    through unchanged and only out-of-bounds components consume draws.
    """
    confined = np.array(position, dtype=float)
    lower, upper = space.bounds
    if confined.shape[-1] != space.dimension:
        raise DimensionError(
            f"position has {confined.shape[-1]} components, space has {space.dimension}"
        )
    outside = (confined < lower) | (confined > upper)
    if outside.any():
        low = np.broadcast_to(lower, confined.shape)[outside]
        high = np.broadcast_to(upper, confined.shape)[outside]
        confined[outside] = rng.uniform(low, high)
    return confined

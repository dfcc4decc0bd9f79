"""
Base optimizer class and the shared run loop
"""

import logging
from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from src.config import ALGORITHMS
from src.core import (
    Objective,
    Population,
    RandomStream,
    SearchSpace,
    init_population,
)
from src.models import RunConfig, RunResult

logger = logging.getLogger(__name__)


class BaseOptimizer(ABC):
    """Base class for all continuous-space optimizers"""

    def __init__(self, algorithm: str, config: RunConfig):
        self.algorithm = algorithm
        self.config = config
        self.info = ALGORITHMS.get(algorithm, {})
        self.name = self.info.get("name", algorithm.upper())

    def initialize(
        self,
        space: SearchSpace,
        objective: Objective,
        rng: RandomStream,
    ) -> Population:
        """Build the initial population"""
        return init_population(space, self.config.population_size, objective, rng)

    @abstractmethod
    def step(
        self,
        pop: Population,
        space: SearchSpace,
        objective: Objective,
        rng: RandomStream,
    ) -> Population:
        """One migration loop / generation"""

    def best(self, pop: Population) -> Tuple[np.ndarray, float]:
        """Best position and fitness known to the optimizer"""
        return pop.leader.position, pop.leader.fitness

    def run(self, objective: Objective, space: SearchSpace, seed: int) -> RunResult:
        """Iterate until max_iterations or the target fitness is reached"""
        rng = RandomStream(seed)
        pop = self.initialize(space, objective, rng)
        best_position, best_fitness = self.best(pop)
        best_position = np.array(best_position, dtype=float)
        history = [(0, float(best_fitness))]

        iteration = 0
        while (
            iteration < self.config.max_iterations
            and best_fitness > self.config.target_fitness
        ):
            pop = self.step(pop, space, objective, rng)
            iteration += 1
            position, fitness = self.best(pop)
            if fitness < best_fitness:
                best_position = np.array(position, dtype=float)
                best_fitness = fitness
            history.append((iteration, float(best_fitness)))

        logger.debug(
            f"{self.name} seed {seed} finished after {iteration} iterations "
            f"with best fitness {best_fitness:.6e}"
        )
        return RunResult(
            algorithm=self.algorithm,
            seed=seed,
            best_position=best_position.tolist(),
            best_fitness=float(best_fitness),
            history=history,
        )

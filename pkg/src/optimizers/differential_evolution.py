"""
Differential Evolution optimizer
Canonical DE/rand/1/bin baseline
"""

import numpy as np

from src.core import (
    Objective,
    Population,
    RandomStream,
    SearchSpace,
    confine,
    evaluate_points,
    select_leader,
)
from src.exceptions import ConfigurationError
from src.models import DeParams, RunConfig
from src.optimizers.base_optimizer import BaseOptimizer

MIN_DE_POPULATION = 4


def de_step(
    pop: Population,
    params: DeParams,
    space: SearchSpace,
    objective: Objective,
    rng: RandomStream,
) -> Population:
    """One generation: rand/1 mutation, binomial crossover, greedy selection"""
    size = len(pop)
    if size < MIN_DE_POPULATION:
        raise ConfigurationError(
            f"DE/rand/1 needs at least {MIN_DE_POPULATION} individuals, got {size}"
        )
    dim = space.dimension
    positions = np.array([member.position for member in pop.members], dtype=float)
    trials = np.empty_like(positions)

    for i in range(size):
        others = [k for k in range(size) if k != i]
        r1, r2, r3 = rng.choice(others, size=3, replace=False)
        mutant = positions[r1] + params.f * (positions[r2] - positions[r3])
        crossover = rng.random(dim) < params.cr
        crossover[rng.integers(dim)] = True
        trials[i] = np.where(crossover, mutant, positions[i])

    trials = confine(trials, space, rng)
    fitness = evaluate_points(objective, trials)
    for i, member in enumerate(pop.members):
        if fitness[i] <= member.fitness:
            member.position = trials[i].copy()
            member.fitness = float(fitness[i])

    select_leader(pop)
    return pop


class DifferentialEvolutionOptimizer(BaseOptimizer):
    """DE baseline"""

    def __init__(self, config: RunConfig):
        super().__init__("de", config)

    def step(
        self,
        pop: Population,
        space: SearchSpace,
        objective: Objective,
        rng: RandomStream,
    ) -> Population:
        return de_step(pop, self.config.de, space, objective, rng)

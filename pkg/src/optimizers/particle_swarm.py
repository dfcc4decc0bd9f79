"""
Particle Swarm optimizer
Global-best PSO with inertia weight
"""

from dataclasses import dataclass
from typing import Optional, Tuple

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
from src.models import PsoParams, RunConfig
from src.optimizers.base_optimizer import BaseOptimizer


@dataclass
class SwarmState:
    """Velocities and personal bests, one row per particle"""
    velocities: np.ndarray
    best_positions: np.ndarray
    best_fitness: np.ndarray

    @classmethod
    def at_rest(cls, pop: Population) -> "SwarmState":
        """Zero velocities, personal bests at the current positions"""
        positions = np.array([member.position for member in pop.members], dtype=float)
        return cls(
            velocities=np.zeros_like(positions),
            best_positions=positions.copy(),
            best_fitness=pop.fitnesses(),
        )

    @property
    def global_index(self) -> int:
        return int(np.argmin(self.best_fitness))


def pso_step(
    pop: Population,
    state: SwarmState,
    params: PsoParams,
    space: SearchSpace,
    objective: Objective,
    rng: RandomStream,
) -> Population:
    """Velocity update toward personal and global bests, then move every particle"""
    positions = np.array([member.position for member in pop.members], dtype=float)
    global_best = state.best_positions[state.global_index]
    lower, upper = space.bounds
    span = upper - lower

    r1 = rng.random(positions.shape)
    r2 = rng.random(positions.shape)
    velocities = (
        params.inertia * state.velocities
        + params.cognitive * r1 * (state.best_positions - positions)
        + params.social * r2 * (global_best - positions)
    )
    state.velocities = np.clip(velocities, -span, span)

    moved = confine(positions + state.velocities, space, rng)
    fitness = evaluate_points(objective, moved)
    for i, member in enumerate(pop.members):
        member.position = moved[i].copy()
        member.fitness = float(fitness[i])

    improved = fitness < state.best_fitness
    state.best_positions[improved] = moved[improved]
    state.best_fitness[improved] = fitness[improved]

    select_leader(pop)
    return pop


class ParticleSwarmOptimizer(BaseOptimizer):
    """PSO baseline; the reported best is the best personal best"""

    def __init__(self, config: RunConfig):
        super().__init__("pso", config)
        self.state: Optional[SwarmState] = None

    def initialize(
        self,
        space: SearchSpace,
        objective: Objective,
        rng: RandomStream,
    ) -> Population:
        pop = super().initialize(space, objective, rng)
        self.state = SwarmState.at_rest(pop)
        return pop

    def step(
        self,
        pop: Population,
        space: SearchSpace,
        objective: Objective,
        rng: RandomStream,
    ) -> Population:
        return pso_step(pop, self.state, self.config.pso, space, objective, rng)

    def best(self, pop: Population) -> Tuple[np.ndarray, float]:
        index = self.state.global_index
        return self.state.best_positions[index], float(self.state.best_fitness[index])

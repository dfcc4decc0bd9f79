"""
SOMA optimizer
Self-organizing migrating algorithm, All-to-One strategy
"""

import logging
import math
from typing import Callable, Optional, Tuple

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
from src.models import RunConfig, SomaParams
from src.optimizers.base_optimizer import BaseOptimizer

logger = logging.getLogger(__name__)

Perturbation = Callable[[int, SomaParams, RandomStream], np.ndarray]


def path_values(params: SomaParams) -> np.ndarray:
    """Path grid L = step, 2*step, ... up to path_length"""
    count = int(math.floor(params.path_length / params.step + 1e-9))
    return params.step * np.arange(1, count + 1, dtype=float)


def draw_gamma_lambda(
    dim: int,
    params: SomaParams,
    rng: RandomStream,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    The per-component draws behind a perturbation vector.

    SOMA and OSOMA consume the same draws (gamma, then lambda) so the two
    algorithms stay on identical random streams; SOMA ignores lambda.
    """
    gamma = rng.random(dim)
    lam = rng.uniform(params.lambda_low, params.lambda_high, dim)
    return gamma, lam


def soma_perturbation(dim: int, params: SomaParams, rng: RandomStream) -> np.ndarray:
    """phi_k = 1 if gamma_k < PR else 0"""
    gamma, _ = draw_gamma_lambda(dim, params, rng)
    return np.where(gamma < params.pr, 1.0, 0.0)


def migration_candidates(
    position: np.ndarray,
    leader_position: np.ndarray,
    phi: np.ndarray,
    path: np.ndarray,
) -> np.ndarray:
    """Row k is x + (x_L - x) * phi * path[k]"""
    return position + np.outer(path, (leader_position - position) * phi)


def migrate(
    pop: Population,
    params: SomaParams,
    space: SearchSpace,
    objective: Objective,
    rng: RandomStream,
    perturbation: Perturbation,
    path: Optional[np.ndarray] = None,
) -> Population:
    """
    One All-to-One migration loop, updating `pop` in place.

    Every follower draws phi once, samples the path grid toward the frozen
    leader and jumps to its best candidate only if that improves on its
    current fitness. The leader is re-selected afterwards. `path` defaults
    to `path_values(params)`.
    """
    leader_index = pop.leader_index
    leader_position = pop.leader.position.copy()
    if path is None:
        path = path_values(params)
    dim = space.dimension

    for index, member in enumerate(pop.members):
        if index == leader_index:
            continue
        phi = perturbation(dim, params, rng)
        candidates = migration_candidates(member.position, leader_position, phi, path)
        candidates = confine(candidates, space, rng)
        fitness = evaluate_points(objective, candidates)
        best = int(np.argmin(fitness))
        if fitness[best] < member.fitness:
            member.position = candidates[best].copy()
            member.fitness = float(fitness[best])

    previous = leader_index
    select_leader(pop)
    if pop.leader_index != previous:
        logger.debug(f"Leader moved from {previous} to {pop.leader_index}")
    return pop


def soma_migrate(
    pop: Population,
    params: SomaParams,
    space: SearchSpace,
    objective: Objective,
    rng: RandomStream,
) -> Population:
    """Migration loop with binary perturbations"""
    return migrate(pop, params, space, objective, rng, soma_perturbation)


class SomaOptimizer(BaseOptimizer):
    """Classic SOMA"""

    def __init__(self, config: RunConfig, algorithm: str = "soma"):
        super().__init__(algorithm, config)

    def step(
        self,
        pop: Population,
        space: SearchSpace,
        objective: Objective,
        rng: RandomStream,
    ) -> Population:
        return soma_migrate(pop, self.config.soma, space, objective, rng)

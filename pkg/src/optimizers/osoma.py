"""
OSOMA optimizer
Opportunistic SOMA: dimensions that miss the PR draw still move by lambda/D
"""

import math

import numpy as np

from src.core import Objective, Population, RandomStream, SearchSpace
from src.models import RunConfig, SomaParams
from src.optimizers.soma import SomaOptimizer, draw_gamma_lambda, migrate, path_values

# Dimensionality at which the default path lets lambda/D components pass the leader
PLANAR_DIMENSION = 2


def osoma_perturbation(dim: int, params: SomaParams, rng: RandomStream) -> np.ndarray:
    """phi_k = 1 if gamma_k < PR else lambda_k / dim, lambda_k ~ U(low, high)"""
    gamma, lam = draw_gamma_lambda(dim, params, rng)
    return np.where(gamma < params.pr, 1.0, lam / dim)


def osoma_path_values(params: SomaParams, dim: int) -> np.ndarray:
    """
    Path grid for opportunistic moves.

    A non-perturbed component travels lambda/D * L of its gap to the leader.
    On the plain grid that reach shrinks with D, and once it stays below one
    the component can only close in on the leader, never pass it. Above two
    dimensions the grid keeps its step but runs to path_length * D / 2, so
    the reach stays what it is on the plane. Without a lambda component the
    plain grid is returned.
    """
    if dim <= PLANAR_DIMENSION or params.lambda_high <= 0.0:
        return path_values(params)
    end = params.path_length * dim / PLANAR_DIMENSION
    count = int(math.floor(end / params.step + 1e-9))
    return params.step * np.arange(1, count + 1, dtype=float)


def osoma_migrate(
    pop: Population,
    params: SomaParams,
    space: SearchSpace,
    objective: Objective,
    rng: RandomStream,
) -> Population:
    """Migration loop with opportunistic perturbations"""
    path = osoma_path_values(params, space.dimension)
    return migrate(pop, params, space, objective, rng, osoma_perturbation, path)


class OsomaOptimizer(SomaOptimizer):
    """Opportunistic SOMA"""

    def __init__(self, config: RunConfig):
        super().__init__(config, algorithm="osoma")

    def step(
        self,
        pop: Population,
        space: SearchSpace,
        objective: Objective,
        rng: RandomStream,
    ) -> Population:
        return osoma_migrate(pop, self.config.soma, space, objective, rng)

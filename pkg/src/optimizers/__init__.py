"""
Continuous-space optimizers package
"""

import logging
from typing import Union

from src.core import Objective, SearchSpace
from src.exceptions import ConfigurationError
from src.models import Algorithm, RunConfig, RunResult

from .base_optimizer import BaseOptimizer
from .soma import SomaOptimizer, soma_migrate, soma_perturbation, path_values
from .osoma import OsomaOptimizer, osoma_migrate, osoma_path_values, osoma_perturbation
from .differential_evolution import DifferentialEvolutionOptimizer, de_step
from .particle_swarm import ParticleSwarmOptimizer, SwarmState, pso_step

logger = logging.getLogger(__name__)

OPTIMIZERS = {
    Algorithm.SOMA: SomaOptimizer,
    Algorithm.OSOMA: OsomaOptimizer,
    Algorithm.DE: DifferentialEvolutionOptimizer,
    Algorithm.PSO: ParticleSwarmOptimizer,
}


def resolve_algorithm(algorithm: Union[Algorithm, str]) -> Algorithm:
    """Normalize an algorithm name; unknown names are configuration errors"""
    if isinstance(algorithm, Algorithm):
        return algorithm
    try:
        return Algorithm(str(algorithm).strip().lower())
    except ValueError:
        known = ", ".join(a.value for a in Algorithm)
        raise ConfigurationError(f"Unknown algorithm '{algorithm}' (known: {known})") from None


def create_optimizer(algorithm: Union[Algorithm, str], config: RunConfig) -> BaseOptimizer:
    """Fresh optimizer instance; each run owns its own"""
    return OPTIMIZERS[resolve_algorithm(algorithm)](config)


def run(
    algorithm: Union[Algorithm, str],
    objective: Objective,
    space: SearchSpace,
    config: RunConfig,
    seed: int,
) -> RunResult:
    """Run one seeded optimization"""
    optimizer = create_optimizer(algorithm, config)
    return optimizer.run(objective, space, seed)


__all__ = [
    "BaseOptimizer",
    "SomaOptimizer",
    "OsomaOptimizer",
    "DifferentialEvolutionOptimizer",
    "ParticleSwarmOptimizer",
    "SwarmState",
    "OPTIMIZERS",
    "create_optimizer",
    "resolve_algorithm",
    "run",
    "soma_migrate",
    "osoma_migrate",
    "soma_perturbation",
    "osoma_perturbation",
    "path_values",
    "osoma_path_values",
    "de_step",
    "pso_step",
]

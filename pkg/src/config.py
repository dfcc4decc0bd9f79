"""
Configuration settings for the OSOMA toolkit
"""

from typing import Dict, Any
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Ambient runtime settings (logging and worker fan-out only)"""

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FILE: str = "./logs/osoma.log"

    # Independent seeds fanned out to threads by the coordinator
    MAX_WORKERS: int = 4

    class Config:
        env_file = ".env"


# Global settings instance
settings = Settings()

# Experiment defaults. These never come from the environment.
DEFAULT_POPULATION_SIZE = 20
DEFAULT_BENCHMARK_ITERATIONS = 100
DEFAULT_DTSP_ITERATIONS = 60
DEFAULT_SEED_COUNT = 30
BRUTE_FORCE_MAX_CITIES = 12
MIN_GENERATED_CITIES = 3
MAX_GENERATED_CITIES = 64
EUCLIDEAN_COST_SCALE = 1e5

# Algorithm registry
ALGORITHMS = {
    "soma": {
        "name": "SOMA",
        "description": "Self-organizing migrating algorithm, All-to-One strategy",
        "parameter_group": "soma",
    },
    "osoma": {
        "name": "OSOMA",
        "description": "Opportunistic SOMA: non-perturbed dimensions still move by lambda/D",
        "parameter_group": "soma",
    },
    "de": {
        "name": "DE",
        "description": "Differential evolution, rand/1/bin",
        "parameter_group": "de",
    },
    "pso": {
        "name": "PSO",
        "description": "Global-best particle swarm with inertia weight",
        "parameter_group": "pso",
    },
}

# Every overridable parameter, keyed as accepted by `--set`
PARAMETER_LEDGER: Dict[str, Dict[str, Any]] = {
    "soma.path_length": {
        "default": 3.0,
        "description": "Maximum relative displacement toward the leader",
    },
    "soma.step": {
        "default": 0.11,
        "description": "Increment of the path value L",
    },
    "soma.pr": {
        "default": 0.1,
        "description": "Perturbation probability PR",
    },
    "soma.lambda_low": {
        "default": 0.60,
        "description": "Lower bound of the OSOMA lambda draw",
    },
    "soma.lambda_high": {
        "default": 0.85,
        "description": "Upper bound of the OSOMA lambda draw",
    },
    "de.f": {
        "default": 0.5,
        "description": "Differential weight F",
    },
    "de.cr": {
        "default": 0.9,
        "description": "Crossover rate CR",
    },
    "pso.inertia": {
        "default": 0.729,
        "description": "Inertia weight",
    },
    "pso.cognitive": {
        "default": 1.49445,
        "description": "Cognitive (personal best) coefficient",
    },
    "pso.social": {
        "default": 1.49445,
        "description": "Social (global best) coefficient",
    },
}


def parameter_defaults(group: str) -> Dict[str, float]:
    """Ledger defaults for one parameter group, keyed by bare name"""
    prefix = f"{group}."
    return {
        key[len(prefix):]: entry["default"]
        for key, entry in PARAMETER_LEDGER.items()
        if key.startswith(prefix)
    }


def ledger_snapshot() -> Dict[str, Any]:
    """All ledger defaults, as printed by `--show-defaults`"""
    return {
        "parameters": {key: entry["default"] for key, entry in PARAMETER_LEDGER.items()},
        "population_size": DEFAULT_POPULATION_SIZE,
        "benchmark_iterations": DEFAULT_BENCHMARK_ITERATIONS,
        "dtsp_iterations": DEFAULT_DTSP_ITERATIONS,
        "seed_count": DEFAULT_SEED_COUNT,
        "brute_force_max_cities": BRUTE_FORCE_MAX_CITIES,
        "algorithms": sorted(ALGORITHMS),
    }

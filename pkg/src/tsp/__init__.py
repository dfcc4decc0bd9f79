"""
Permutation encoding, tour evaluation, exact oracles and the discrete
optimizers that search over tours
"""

from .swap import SwapOperator, SwapSequence, Tour, apply, apply_sequence, subtract, swap_distance
from .tour import (
    CostTable,
    as_cost_table,
    cheapest_insertion,
    insert_city,
    insertion_costs,
    insertion_tour,
    random_tour,
    tour_cost,
)
from .oracle import brute_force_optimum, held_karp_optimum
from .discrete import (
    BaseTourOptimizer,
    TOUR_OPTIMIZERS,
    create_tour_optimizer,
    discrete_de_step,
    discrete_osoma_migrate,
    discrete_pso_step,
    discrete_soma_migrate,
    evaluate_population,
)

__all__ = [
    "SwapOperator",
    "SwapSequence",
    "Tour",
    "apply",
    "apply_sequence",
    "subtract",
    "swap_distance",
    "CostTable",
    "as_cost_table",
    "cheapest_insertion",
    "insert_city",
    "insertion_costs",
    "insertion_tour",
    "random_tour",
    "tour_cost",
    "brute_force_optimum",
    "held_karp_optimum",
    "BaseTourOptimizer",
    "TOUR_OPTIMIZERS",
    "create_tour_optimizer",
    "discrete_de_step",
    "discrete_osoma_migrate",
    "discrete_pso_step",
    "discrete_soma_migrate",
    "evaluate_population",
]

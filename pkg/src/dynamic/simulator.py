"""
Dynamic TSP simulation: a discrete optimizer running while the cost
matrix changes under it
"""

import logging
from typing import Hashable, Optional, Union

from src.core import Population, RandomStream, select_leader
from src.exceptions import InstanceError
from src.models import Algorithm, EventKind, HistoryRow, RunConfig, ScenarioResult
from src.tsp.discrete import create_tour_optimizer, evaluate_population
from src.tsp.tour import as_cost_table, cheapest_insertion
from src.dynamic.providers import CostProvider

logger = logging.getLogger(__name__)


def repair_population(
    pop: Population,
    new_city: Hashable,
    costs,
    t: Optional[int] = None,
    rng: Optional[RandomStream] = None,
) -> Population:
    """
    Insert `new_city` into every tour at its cheapest position, re-evaluate
    and re-select the leader. `rng` only breaks ties between equally cheap
    positions.
    """
    table = as_cost_table(costs, t)
    if new_city not in table.index:
        raise InstanceError(f"city '{new_city}' has no cost entries at iteration {t}")
    for member in pop.members:
        member.position = cheapest_insertion(member.position, new_city, table, rng)
        member.fitness = table.cycle_cost(member.position)
    select_leader(pop)
    return pop


def simulate(
    provider: CostProvider,
    algorithm: Union[Algorithm, str],
    config: RunConfig,
    seed: int,
    reinit_on_event: bool = False,
) -> ScenarioResult:
    """
    Run one seeded dynamic scenario for `config.max_iterations` migrations.

    At each iteration t = 0..max_iterations the provider's pending events
    are applied first. The population is created at t = 0 and, after an
    event, either rebuilt (`reinit_on_event`) or kept: add_city repairs every
    tour by cheapest insertion, and any event re-evaluates all tours under
    the new costs. For t > 0 one migration loop follows. The recorded best
    is the optimizer's best at the end of the iteration; it only rises at
    iterations that carry events.
    """
    rng = RandomStream(seed)
    optimizer = create_tour_optimizer(algorithm, config)
    matrix = provider.initial_matrix()
    pop: Optional[Population] = None
    history = []

    for t in range(config.max_iterations + 1):
        events = provider.pending_events(t)
        for event in events:
            matrix = matrix.apply_event(event)
        table = matrix.snapshot(t)

        if pop is None or (events and reinit_on_event):
            pop = optimizer.initialize(table, t, rng)
        elif events:
            for event in events:
                if event.kind == EventKind.ADD_CITY:
                    repair_population(pop, event.city.id, table, t, rng)
                    optimizer.after_city_added(pop, event.city.id, table, t, rng)
            evaluate_population(pop, table)
            optimizer.after_costs_changed(pop, table, t)

        if events:
            logger.info(
                f"{optimizer.name} seed {seed}: applied "
                f"{', '.join(event.kind for event in events)} at iteration {t} "
                f"({len(table)} cities)"
            )

        if t > 0:
            pop = optimizer.step(pop, table, t, rng)

        _, best_cost = optimizer.best(pop)
        history.append(
            HistoryRow(
                iteration=t,
                best_cost=float(best_cost),
                events=[event.kind for event in events],
            )
        )

    tour, cost = optimizer.best(pop)
    logger.debug(
        f"{optimizer.name} seed {seed}: final cost {cost}, epochs from {matrix.epoch_starts}"
    )
    return ScenarioResult(
        algorithm=optimizer.algorithm,
        seed=seed,
        history=history,
        final_tour=[str(city) for city in tour],
        final_cost=float(cost),
    )

"""
Discrete optimizers over tours.

Positions are tours and moves are swap sequences: x_new = x (+) S' where S'
keeps a random subset of the operators of some difference S = a - b. SOMA
and OSOMA pick operators of (leader - x) with probability min(1, phi_k * L);
DE and PSO use the difference-as-swap-sequence and velocity-as-swap-sequence
reconstructions. Populations start from insertion-built tours, and SOMA
followers that stall are restarted a few swaps away from the leader.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import ALGORITHMS
from src.core import Individual, Population, RandomStream, select_leader
from src.exceptions import ConfigurationError
from src.models import Algorithm, DeParams, PsoParams, RunConfig, SomaParams
from src.optimizers import resolve_algorithm
from src.optimizers.soma import draw_gamma_lambda, path_values
from src.tsp.swap import SwapOperator, SwapSequence, Tour, apply_sequence, subtract
from src.tsp.tour import CostTable, as_cost_table, cheapest_insertion, insertion_tour

logger = logging.getLogger(__name__)

OperatorWeights = Callable[[int, int, SomaParams, RandomStream], np.ndarray]


def soma_operator_phi(count: int, n_cities: int, params: SomaParams, rng: RandomStream) -> np.ndarray:
    """One binary phi per operator"""
    gamma, _ = draw_gamma_lambda(count, params, rng)
    return np.where(gamma < params.pr, 1.0, 0.0)


def osoma_operator_phi(count: int, n_cities: int, params: SomaParams, rng: RandomStream) -> np.ndarray:
    """One opportunistic phi per operator, lambda scaled by the city count"""
    gamma, lam = draw_gamma_lambda(count, params, rng)
    return np.where(gamma < params.pr, 1.0, lam / n_cities)


def inclusion_probabilities(phi: np.ndarray, path: np.ndarray) -> np.ndarray:
    """p[l, k] = min(1, phi_k * L_l)"""
    return np.minimum(1.0, np.outer(path, phi))


def evaluate_population(pop: Population, table: CostTable) -> Population:
    """Recompute every member's cost and re-select the leader"""
    for member in pop.members:
        member.fitness = table.cycle_cost(member.position)
    select_leader(pop)
    return pop


def discrete_migrate(
    pop: Population,
    params: SomaParams,
    costs,
    t: Optional[int],
    rng: RandomStream,
    operator_phi: OperatorWeights,
) -> Population:
    """
    One All-to-One migration loop over tours, updating `pop` in place.

    For each follower, S = leader - follower; per path value L, every
    operator of S joins the candidate independently with probability
    min(1, phi_k * L). The follower takes the cheapest strictly improving
    candidate; the leader is frozen during the loop and re-selected after.
    """
    table = as_cost_table(costs, t)
    leader_index = pop.leader_index
    leader_tour = pop.leader.position
    path = path_values(params)
    n_cities = len(leader_tour)

    for index, member in enumerate(pop.members):
        if index == leader_index:
            continue
        sequence = subtract(leader_tour, member.position)
        if not sequence:
            continue
        phi = operator_phi(len(sequence), n_cities, params, rng)
        include = rng.random((len(path), len(sequence))) < inclusion_probabilities(phi, path)

        best_tour, best_cost = None, member.fitness
        seen: Dict[bytes, float] = {}
        for row in include:
            key = row.tobytes()
            if key in seen:
                continue
            candidate = apply_sequence(
                member.position, [sequence[k] for k in np.flatnonzero(row)]
            )
            cost = table.cycle_cost(candidate)
            seen[key] = cost
            if cost < best_cost:
                best_tour, best_cost = candidate, cost
        if best_tour is not None:
            member.position = best_tour
            member.fitness = best_cost

    select_leader(pop)
    return pop


def discrete_soma_migrate(
    pop: Population,
    params: SomaParams,
    costs,
    t: Optional[int],
    rng: RandomStream,
) -> Population:
    return discrete_migrate(pop, params, costs, t, rng, soma_operator_phi)


def discrete_osoma_migrate(
    pop: Population,
    params: SomaParams,
    costs,
    t: Optional[int],
    rng: RandomStream,
) -> Population:
    return discrete_migrate(pop, params, costs, t, rng, osoma_operator_phi)


def kick_tour(tour: Sequence[Hashable], count: int, rng: RandomStream) -> Tour:
    """`tour` after `count` random swap operators"""
    n = len(tour)
    if n < 2:
        return tuple(tour)
    ops = [SwapOperator(*(int(p) + 1 for p in rng.choice(n, size=2, replace=False)))
           for _ in range(count)]
    return apply_sequence(tour, ops)


def reseed_stalled(
    pop: Population,
    stalled: Sequence[int],
    table: CostTable,
    rng: RandomStream,
) -> Population:
    """
    Restart followers that failed to improve from a random neighbour of the
    leader, at most n // 2 swaps away. The leader itself is never touched.
    """
    leader_tour = pop.leader.position
    reach = max(1, len(leader_tour) // 2)
    for index in stalled:
        if index == pop.leader_index:
            continue
        member = pop.members[index]
        member.position = kick_tour(leader_tour, int(rng.integers(1, reach + 1)), rng)
        member.fitness = table.cycle_cost(member.position)
    select_leader(pop)
    return pop


def _keep(sequence: SwapSequence, probability: float, rng: RandomStream) -> SwapSequence:
    """Each operator survives independently with `probability`"""
    if not sequence:
        return []
    mask = rng.random(len(sequence)) < min(1.0, probability)
    return [op for op, kept in zip(sequence, mask) if kept]


def discrete_de_step(
    pop: Population,
    params: DeParams,
    costs,
    t: Optional[int],
    rng: RandomStream,
) -> Population:
    """
    DE over tours: mutant = x_r1 (+) F*(x_r2 - x_r3), trial keeps each operator
    of (mutant - x_i) with probability CR (at least one), greedy selection.
    """
    table = as_cost_table(costs, t)
    size = len(pop)
    if size < 4:
        raise ConfigurationError(f"DE needs at least 4 individuals, got {size}")
    tours = [member.position for member in pop.members]
    trials = []
    for i in range(size):
        others = [k for k in range(size) if k != i]
        r1, r2, r3 = (int(k) for k in rng.choice(others, size=3, replace=False))
        mutant = apply_sequence(tours[r1], _keep(subtract(tours[r2], tours[r3]), params.f, rng))
        toward = subtract(mutant, tours[i])
        if toward:
            mask = rng.random(len(toward)) < params.cr
            mask[rng.integers(len(toward))] = True
            toward = [op for op, kept in zip(toward, mask) if kept]
        trials.append(apply_sequence(tours[i], toward))

    for member, trial in zip(pop.members, trials):
        cost = table.cycle_cost(trial)
        if cost <= member.fitness:
            member.position, member.fitness = trial, cost
    select_leader(pop)
    return pop


@dataclass
class TourSwarmState:
    """Swap-sequence velocities and personal-best tours"""
    velocities: List[SwapSequence]
    best_tours: List[Tour]
    best_costs: List[float]

    @classmethod
    def at_rest(cls, pop: Population) -> "TourSwarmState":
        return cls(
            velocities=[[] for _ in pop.members],
            best_tours=[member.position for member in pop.members],
            best_costs=[member.fitness for member in pop.members],
        )

    @property
    def global_index(self) -> int:
        return int(np.argmin(self.best_costs))


def discrete_pso_step(
    pop: Population,
    state: TourSwarmState,
    params: PsoParams,
    costs,
    t: Optional[int],
    rng: RandomStream,
) -> Population:
    """
    PSO over tours: v = w*v (+) c1*r1*(pbest - x) (+) c2*r2*(gbest - x), where a
    coefficient c keeps each operator with probability min(1, c); x = x (+) v.
    """
    table = as_cost_table(costs, t)
    global_best = state.best_tours[state.global_index]
    for i, member in enumerate(pop.members):
        tour = member.position
        n = len(tour)
        r1, r2 = rng.random(2)
        velocity = (
            _keep(state.velocities[i], params.inertia, rng)
            + _keep(subtract(state.best_tours[i], tour), params.cognitive * r1, rng)
            + _keep(subtract(global_best, tour), params.social * r2, rng)
        )
        velocity = velocity[: n * (n - 1) // 2]
        state.velocities[i] = velocity
        member.position = apply_sequence(tour, velocity)
        member.fitness = table.cycle_cost(member.position)
        if member.fitness < state.best_costs[i]:
            state.best_tours[i] = member.position
            state.best_costs[i] = member.fitness
    select_leader(pop)
    return pop


class BaseTourOptimizer(ABC):
    """Base class for optimizers whose individuals are tours"""

    def __init__(self, algorithm: str, config: RunConfig):
        self.algorithm = algorithm
        self.config = config
        self.name = ALGORITHMS.get(algorithm, {}).get("name", algorithm.upper())

    def initialize(self, costs, t: Optional[int], rng: RandomStream) -> Population:
        """Insertion-built tours over the cities in force at `t`"""
        table = as_cost_table(costs, t)
        size = self.config.population_size
        if size < 2:
            raise ConfigurationError(f"population size must be at least 2, got {size}")
        tours = [insertion_tour(table.city_ids, table, rng) for _ in range(size)]
        pop = Population(
            members=[Individual(position=tour, fitness=table.cycle_cost(tour)) for tour in tours]
        )
        select_leader(pop)
        return pop

    @abstractmethod
    def step(self, pop: Population, costs, t: Optional[int], rng: RandomStream) -> Population:
        """One migration loop / generation"""

    def best(self, pop: Population) -> Tuple[Tour, float]:
        return pop.leader.position, pop.leader.fitness

    def after_costs_changed(self, pop: Population, costs, t: Optional[int]) -> None:
        """Hook run after the population was re-evaluated under new costs"""

    def after_city_added(
        self,
        pop: Population,
        city: Hashable,
        costs,
        t: Optional[int],
        rng: Optional[RandomStream] = None,
    ) -> None:
        """Hook run after the population absorbed a new city"""


class MigratingTourOptimizer(BaseTourOptimizer):
    """
    SOMA-family optimizers over tours. After each migration loop the
    followers that did not get cheaper are reseeded around the leader.
    """

    migrate_tours: Callable[..., Population] = staticmethod(discrete_soma_migrate)

    def step(self, pop, costs, t, rng):
        table = as_cost_table(costs, t)
        leader_index = pop.leader_index
        before = pop.fitnesses()
        self.migrate_tours(pop, self.config.soma, table, t, rng)
        stalled = [
            index for index, member in enumerate(pop.members)
            if index != leader_index and not member.fitness < before[index]
        ]
        if stalled:
            logger.debug(f"{self.name}: reseeding {len(stalled)} stalled followers")
            reseed_stalled(pop, stalled, table, rng)
        return pop


class DiscreteSomaOptimizer(MigratingTourOptimizer):
    def __init__(self, config: RunConfig, algorithm: str = "soma"):
        super().__init__(algorithm, config)


class DiscreteOsomaOptimizer(MigratingTourOptimizer):
    migrate_tours = staticmethod(discrete_osoma_migrate)

    def __init__(self, config: RunConfig):
        super().__init__("osoma", config)


class DiscreteDeOptimizer(BaseTourOptimizer):
    def __init__(self, config: RunConfig):
        super().__init__("de", config)

    def step(self, pop, costs, t, rng):
        return discrete_de_step(pop, self.config.de, costs, t, rng)


class DiscretePsoOptimizer(BaseTourOptimizer):
    """Reports the best personal best; personal bests follow cost changes"""

    def __init__(self, config: RunConfig):
        super().__init__("pso", config)
        self.state: Optional[TourSwarmState] = None

    def initialize(self, costs, t, rng):
        pop = super().initialize(costs, t, rng)
        self.state = TourSwarmState.at_rest(pop)
        return pop

    def step(self, pop, costs, t, rng):
        return discrete_pso_step(pop, self.state, self.config.pso, costs, t, rng)

    def best(self, pop):
        index = self.state.global_index
        return self.state.best_tours[index], self.state.best_costs[index]

    def after_costs_changed(self, pop, costs, t):
        table = as_cost_table(costs, t)
        self.state.best_costs = [table.cycle_cost(tour) for tour in self.state.best_tours]

    def after_city_added(self, pop, city, costs, t, rng=None):
        table = as_cost_table(costs, t)
        self.state.best_tours = [
            cheapest_insertion(tour, city, table, rng) for tour in self.state.best_tours
        ]
        self.state.best_costs = [table.cycle_cost(tour) for tour in self.state.best_tours]
        # Operators recorded against the shorter tours no longer mean the same moves
        self.state.velocities = [[] for _ in self.state.velocities]


TOUR_OPTIMIZERS = {
    Algorithm.SOMA: DiscreteSomaOptimizer,
    Algorithm.OSOMA: DiscreteOsomaOptimizer,
    Algorithm.DE: DiscreteDeOptimizer,
    Algorithm.PSO: DiscretePsoOptimizer,
}


def create_tour_optimizer(algorithm: Union[Algorithm, str], config: RunConfig) -> BaseTourOptimizer:
    """Fresh tour optimizer; each simulation owns its own"""
    return TOUR_OPTIMIZERS[resolve_algorithm(algorithm)](config)

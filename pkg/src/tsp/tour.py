"""
Tour evaluation: static cost tables, closed-cycle cost, cheapest insertion
"""

from typing import Hashable, Optional, Sequence, Tuple

import numpy as np

from src.core import RandomStream
from src.exceptions import ConsistencyError, InstanceError
from src.tsp.swap import Tour


class CostTable:
    """
    Directed cost lookup frozen at one moment: city ids, id -> row index,
    and a dense matrix whose diagonal is never queried.
    """

    def __init__(self, city_ids: Sequence[Hashable], matrix):
        self.city_ids: Tuple[Hashable, ...] = tuple(city_ids)
        self.index = {city: k for k, city in enumerate(self.city_ids)}
        self.matrix = np.array(matrix, dtype=float)
        if self.matrix.shape != (len(self.city_ids), len(self.city_ids)):
            raise InstanceError(
                f"cost matrix shape {self.matrix.shape} does not match "
                f"{len(self.city_ids)} cities"
            )
        # Plain lists make scalar lookups in the hot loop cheap
        self._rows = self.matrix.tolist()

    def __len__(self) -> int:
        return len(self.city_ids)

    def _row_index(self, city: Hashable) -> int:
        try:
            return self.index[city]
        except KeyError:
            raise InstanceError(f"no cost entries for city '{city}'") from None

    def cost(self, i: Hashable, j: Hashable) -> float:
        return self._rows[self._row_index(i)][self._row_index(j)]

    def cycle_cost(self, tour: Sequence[Hashable]) -> float:
        """Sum of consecutive legs plus the closing leg back to the first city"""
        idx = [self._row_index(city) for city in tour]
        rows = self._rows
        total = 0.0
        for a, b in zip(idx, idx[1:]):
            total += rows[a][b]
        return total + rows[idx[-1]][idx[0]]

    def snapshot(self, t: Optional[int] = None) -> "CostTable":
        return self


def as_cost_table(costs, t: Optional[int] = None) -> CostTable:
    """A CostTable as is, or the snapshot of a time-varying matrix at `t`"""
    if isinstance(costs, CostTable):
        return costs
    return costs.snapshot(t)


def tour_cost(tour: Sequence[Hashable], costs, t: Optional[int] = None) -> float:
    """Closed-cycle cost of `tour` under the costs in force at time `t`"""
    return as_cost_table(costs, t).cycle_cost(tour)


def random_tour(cities: Sequence[Hashable], rng: RandomStream) -> Tour:
    """Uniformly random permutation of `cities`"""
    order = rng.permutation(len(cities))
    return tuple(cities[k] for k in order)


def insertion_costs(tour: Sequence[Hashable], city: Hashable, table: CostTable) -> np.ndarray:
    """Cost increase of inserting `city` after each position of the cycle"""
    if city in tour:
        raise ConsistencyError(f"city '{city}' is already in the tour")
    n = len(tour)
    return np.array([
        table.cost(tour[p], city)
        + table.cost(city, tour[(p + 1) % n])
        - table.cost(tour[p], tour[(p + 1) % n])
        for p in range(n)
    ])


def insert_city(tour: Sequence[Hashable], city: Hashable, after: int) -> Tour:
    """Insert `city` right after 0-based position `after`"""
    return tuple(tour[:after + 1]) + (city,) + tuple(tour[after + 1:])


def cheapest_insertion(
    tour: Sequence[Hashable],
    city: Hashable,
    table: CostTable,
    rng: Optional[RandomStream] = None,
) -> Tour:
    """
    Insert `city` where the closed cycle grows least.

    Ties go to the earliest position, or to a random tied position when
    `rng` is given.
    """
    if not tour:
        return (city,)
    deltas = insertion_costs(tour, city, table)
    tied = np.flatnonzero(deltas == deltas.min())
    after = int(tied[0]) if rng is None or len(tied) == 1 else int(rng.choice(tied))
    return insert_city(tour, city, after)


def insertion_tour(cities: Sequence[Hashable], table: CostTable, rng: RandomStream) -> Tour:
    """Cities taken in random order, each placed by cheapest insertion"""
    tour: Tour = ()
    for city in random_tour(cities, rng):
        tour = cheapest_insertion(tour, city, table, rng)
    return tour

"""
Exact tour oracles for small instances: exhaustive enumeration and
Held-Karp dynamic programming
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from itertools import islice, permutations
from typing import List, Optional, Tuple

import numpy as np

from src.config import BRUTE_FORCE_MAX_CITIES
from src.exceptions import BudgetError, InstanceError
from src.tsp.swap import Tour
from src.tsp.tour import CostTable, as_cost_table

logger = logging.getLogger(__name__)

HELD_KARP_MAX_CITIES = 18
_CHUNK = 100_000


def _best_in_partition(matrix: np.ndarray, second: int) -> Tuple[float, Tuple[int, ...]]:
    """Cheapest tour starting 0 -> second, enumerating the rest in lexicographic order"""
    n = len(matrix)
    rest = [k for k in range(1, n) if k != second]
    head = matrix[0, second]
    if not rest:
        return float(head + matrix[second, 0]), (0, second)

    best_cost, best_order = math.inf, None
    iterator = permutations(rest)
    while True:
        block = list(islice(iterator, _CHUNK))
        if not block:
            break
        perms = np.array(block, dtype=np.intp)
        costs = (
            head
            + matrix[second, perms[:, 0]]
            + matrix[perms[:, :-1], perms[:, 1:]].sum(axis=1)
            + matrix[perms[:, -1], 0]
        )
        k = int(np.argmin(costs))
        if costs[k] < best_cost:
            best_cost = float(costs[k])
            best_order = (0, second) + tuple(int(c) for c in perms[k])
    return best_cost, best_order


def brute_force_optimum(
    costs,
    t: Optional[int] = None,
    workers: Optional[int] = None,
    max_cities: int = BRUTE_FORCE_MAX_CITIES,
) -> Tuple[Tour, float]:
    """
    Exhaustive search over tours with the first city fixed.

    The enumeration is split by the second city; with `workers > 1` the
    partitions run in a process pool. Reduction keeps the lowest cost and,
    among equal costs, the lexicographically smallest tour in matrix order.
    """
    table = as_cost_table(costs, t)
    n = len(table)
    if n > max_cities:
        raise BudgetError(f"brute force is limited to {max_cities} cities, got {n}")
    if n == 0:
        raise InstanceError("cannot build a tour over zero cities")
    if n == 1:
        return (table.city_ids[0],), 0.0

    matrix = table.matrix
    partitions = list(range(1, n))
    if workers and workers > len(partitions):
        logger.warning(
            f"Brute force over {n} cities has {len(partitions)} partitions; "
            f"using {len(partitions)} workers instead of {workers}"
        )
        workers = len(partitions)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results: List[Tuple[float, Tuple[int, ...]]] = list(
                pool.map(_best_in_partition, [matrix] * len(partitions), partitions)
            )
    else:
        results = [_best_in_partition(matrix, second) for second in partitions]

    best_cost, best_order = math.inf, None
    for cost, order in results:
        if cost < best_cost:
            best_cost, best_order = cost, order

    tour = tuple(table.city_ids[k] for k in best_order)
    logger.debug(f"Brute force over {n} cities: optimum {best_cost}")
    # Re-sum sequentially so the value matches tour_cost bit for bit
    return tour, table.cycle_cost(tour)


def held_karp_optimum(
    costs,
    t: Optional[int] = None,
    max_cities: int = HELD_KARP_MAX_CITIES,
) -> Tuple[Tour, float]:
    """Held-Karp dynamic programming over subsets, first city fixed"""
    table: CostTable = as_cost_table(costs, t)
    n = len(table)
    if n > max_cities:
        raise BudgetError(f"Held-Karp is limited to {max_cities} cities, got {n}")
    if n == 0:
        raise InstanceError("cannot build a tour over zero cities")
    if n <= 2:
        tour = tuple(table.city_ids)
        return tour, table.cycle_cost(tour)

    matrix = table.matrix
    m = n - 1  # city k + 1 is bit k
    full = 1 << m
    members = ((np.arange(full)[:, None] >> np.arange(m)) & 1).astype(bool)

    best = np.full((full, m), math.inf)
    parent = np.full((full, m), -1, dtype=np.intp)
    for k in range(m):
        best[1 << k, k] = matrix[0, k + 1]

    for mask in range(1, full):
        for k in np.flatnonzero(members[mask]):
            previous = mask ^ (1 << int(k))
            if previous == 0:
                continue
            candidates = np.flatnonzero(members[previous])
            totals = best[previous, candidates] + matrix[candidates + 1, k + 1]
            j = int(np.argmin(totals))
            best[mask, k] = totals[j]
            parent[mask, k] = candidates[j]

    closing = best[full - 1] + matrix[np.arange(1, n), 0]
    last = int(np.argmin(closing))

    order = []
    mask, k = full - 1, last
    while k != -1:
        order.append(k + 1)
        k, mask = int(parent[mask, k]), mask ^ (1 << k)
    order.append(0)
    order.reverse()

    tour = tuple(table.city_ids[c] for c in order)
    return tour, table.cycle_cost(tour)

"""
Time-varying directed cost matrix D(t)
"""

import logging
from bisect import bisect_right
from typing import Hashable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.exceptions import InstanceError, ScheduleValidationError, SchemaError
from src.models import EventKind, InstanceFile
from src.tsp.tour import CostTable
from src.dynamic.events import AddCityEvent, UpdateEdgesEvent

logger = logging.getLogger(__name__)

AnyEvent = Union[AddCityEvent, UpdateEdgesEvent]


class DynamicCostMatrix:
    """
    Piecewise-constant costs: a list of epochs, each a CostTable in force from
    its start iteration until the next epoch begins.

    Matrices are never mutated; `apply_event` returns a new matrix sharing
    the earlier epochs.
    """

    def __init__(
        self,
        epochs: Sequence[Tuple[int, CostTable]],
        events: Sequence[AnyEvent] = (),
    ):
        if not epochs:
            raise InstanceError("a cost matrix needs at least one epoch")
        self._epochs: List[Tuple[int, CostTable]] = list(epochs)
        self._starts = [start for start, _ in self._epochs]
        self.events: Tuple[AnyEvent, ...] = tuple(events)

    @classmethod
    def from_dense(cls, city_ids: Sequence[Hashable], costs) -> "DynamicCostMatrix":
        return cls([(0, CostTable(city_ids, costs))])

    @classmethod
    def from_instance(cls, instance: InstanceFile) -> "DynamicCostMatrix":
        return cls.from_dense(instance.city_ids, instance.costs)

    @property
    def current(self) -> CostTable:
        """Costs after every applied event"""
        return self._epochs[-1][1]

    @property
    def epoch_starts(self) -> List[int]:
        return list(self._starts)

    def snapshot(self, t: Optional[int] = None) -> CostTable:
        """The CostTable in force at iteration `t` (latest when `t` is None)"""
        if t is None:
            return self.current
        index = max(bisect_right(self._starts, t) - 1, 0)
        return self._epochs[index][1]

    def city_ids(self, t: Optional[int] = None) -> Tuple[Hashable, ...]:
        return self.snapshot(t).city_ids

    def cost(self, i: Hashable, j: Hashable, t: Optional[int] = None) -> float:
        """d_ij(t)"""
        return self.snapshot(t).cost(i, j)

    def apply_event(self, event: AnyEvent) -> "DynamicCostMatrix":
        """New matrix with `event` in force from `event.at` on"""
        if event.at < self._starts[-1]:
            raise ScheduleValidationError(
                f"event at iteration {event.at} arrives after an epoch starting at {self._starts[-1]}"
            )
        table = self.current
        if event.kind == EventKind.ADD_CITY:
            updated = _add_city(table, event)
        else:
            updated = _update_edges(table, event)

        epochs = list(self._epochs)
        if event.at == self._starts[-1]:
            # Several events in one tick collapse into a single epoch
            epochs[-1] = (event.at, updated)
        else:
            epochs.append((event.at, updated))
        return DynamicCostMatrix(epochs, self.events + (event,))

    def __repr__(self) -> str:
        return (
            f"DynamicCostMatrix(cities={len(self.current)}, "
            f"epochs={len(self._epochs)}, events={len(self.events)})"
        )


def _add_city(table: CostTable, event: AddCityEvent) -> CostTable:
    n = len(table)
    location = f"add_city at {event.at}"
    if event.city.id in table.index:
        raise InstanceError(f"{location}: city '{event.city.id}' already exists")
    for name in ("row", "col"):
        values = getattr(event, name)
        if len(values) != n:
            raise SchemaError(f"{name} has {len(values)} entries, expected {n}", location)

    matrix = np.zeros((n + 1, n + 1))
    matrix[:n, :n] = table.matrix
    matrix[n, :n] = event.row
    matrix[:n, n] = event.col
    logger.debug(f"Added city '{event.city.id}' at iteration {event.at} ({n + 1} cities)")
    return CostTable(table.city_ids + (event.city.id,), matrix)


def _update_edges(table: CostTable, event: UpdateEdgesEvent) -> CostTable:
    if not event.edges:
        return table
    matrix = table.matrix.copy()
    for edge in event.edges:
        for city in (edge.source, edge.target):
            if city not in table.index:
                raise InstanceError(
                    f"update_edges at {event.at}: unknown city '{city}'"
                )
        matrix[table.index[edge.source], table.index[edge.target]] = edge.cost
    logger.debug(f"Updated {len(event.edges)} edge(s) at iteration {event.at}")
    return CostTable(table.city_ids, matrix)


def apply_event(matrix: DynamicCostMatrix, event: AnyEvent) -> DynamicCostMatrix:
    """D(t) after `event`; all untouched entries are kept"""
    return matrix.apply_event(event)

"""
Cost providers: where a simulation gets its initial matrix and its events.

ReplayProvider replays an instance file plus a schedule. SyntheticProvider
adds seeded multiplicative noise to a base matrix at a fixed interval.
A live traffic client would be a third implementation of CostProvider.
"""

import logging
from abc import ABC, abstractmethod
from typing import Hashable, List, Optional

import numpy as np

from src.core import RandomStream
from src.exceptions import ConfigurationError
from src.models import InstanceFile
from src.dynamic.events import EdgeUpdate, EventSchedule, UpdateEdgesEvent
from src.dynamic.matrix import AnyEvent, DynamicCostMatrix

logger = logging.getLogger(__name__)


class CostProvider(ABC):
    """Source of D(0) and of the events that change it"""

    @abstractmethod
    def initial_matrix(self) -> DynamicCostMatrix:
        """Costs in force at iteration 0, before any event"""

    @abstractmethod
    def pending_events(self, t: int) -> List[AnyEvent]:
        """Events that take effect before iteration `t`"""

    def matrix_at(self, t: int) -> DynamicCostMatrix:
        """D with every event up to and including iteration `t` applied"""
        matrix = self.initial_matrix()
        for tick in range(t + 1):
            for event in self.pending_events(tick):
                matrix = matrix.apply_event(event)
        return matrix

    def cost(self, i: Hashable, j: Hashable, t: int) -> float:
        """d_ij(t)"""
        return self.matrix_at(t).cost(i, j, t)


class ReplayProvider(CostProvider):
    """Instance file plus event schedule"""

    def __init__(self, instance: InstanceFile, schedule: Optional[EventSchedule] = None):
        self.instance = instance
        self.schedule = schedule or EventSchedule()
        self.schedule.validate_against(instance.city_ids)

    def initial_matrix(self) -> DynamicCostMatrix:
        return DynamicCostMatrix.from_instance(self.instance)

    def pending_events(self, t: int) -> List[AnyEvent]:
        return self.schedule.events_at(t)


class SyntheticProvider(CostProvider):
    """
    Base instance whose edges are re-drawn every `interval` iterations as
    base_cost * (1 + noise * u), u uniform in [-1, 1).

    The draw at iteration t comes from the stream (seed, t), so it does not
    depend on the order in which iterations are queried. An optional
    schedule is replayed alongside; noise only touches the base cities.
    """

    def __init__(
        self,
        instance: InstanceFile,
        seed: int,
        noise: float = 0.2,
        interval: int = 10,
        schedule: Optional[EventSchedule] = None,
    ):
        if not 0.0 <= noise < 1.0:
            raise ConfigurationError(f"noise must lie in [0, 1), got {noise}")
        if interval < 1:
            raise ConfigurationError(f"interval must be positive, got {interval}")
        self.instance = instance
        self.seed = seed
        self.noise = noise
        self.interval = interval
        self.schedule = schedule or EventSchedule()
        self.schedule.validate_against(instance.city_ids)
        self._base = np.array(instance.costs, dtype=float)

    def initial_matrix(self) -> DynamicCostMatrix:
        return DynamicCostMatrix.from_instance(self.instance)

    def noise_event(self, t: int) -> UpdateEdgesEvent:
        """The edge batch drawn for iteration `t`"""
        rng = RandomStream(self.seed, spawn_key=(t,))
        n = len(self._base)
        factors = 1.0 + self.noise * rng.uniform(-1.0, 1.0, size=(n, n))
        costs = self._base * factors
        ids = self.instance.city_ids
        return UpdateEdgesEvent(
            at=t,
            edges=[
                EdgeUpdate(source=ids[i], target=ids[j], cost=float(costs[i, j]))
                for i in range(n)
                for j in range(n)
                if i != j
            ],
        )

    def pending_events(self, t: int) -> List[AnyEvent]:
        events: List[AnyEvent] = list(self.schedule.events_at(t))
        if t > 0 and t % self.interval == 0:
            events.append(self.noise_event(t))
        return events

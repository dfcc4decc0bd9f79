"""
Dynamic TSP: time-varying costs, event schedules, cost providers and the
simulation loop
"""

from .events import AddCityEvent, EdgeUpdate, Event, EventSchedule, UpdateEdgesEvent
from .matrix import DynamicCostMatrix, apply_event
from .providers import CostProvider, ReplayProvider, SyntheticProvider
from .simulator import repair_population, simulate

__all__ = [
    "AddCityEvent",
    "EdgeUpdate",
    "Event",
    "EventSchedule",
    "UpdateEdgesEvent",
    "DynamicCostMatrix",
    "apply_event",
    "CostProvider",
    "ReplayProvider",
    "SyntheticProvider",
    "repair_population",
    "simulate",
]

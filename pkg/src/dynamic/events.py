"""
Timed changes to the cost matrix and the schedule that orders them.

Simulation time is the migration-loop index. An event stamped `at = t`
takes effect before iteration t runs.
"""

import math
from typing import Annotated, Dict, List, Literal, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.exceptions import SchemaError, ScheduleValidationError
from src.models import CityRecord, EventKind


def _check_costs(values: List[float], field: str) -> List[float]:
    for k, value in enumerate(values):
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"{field}[{k}] must be finite and >= 0")
    return values


class AddCityEvent(BaseModel):
    """
    A new city joins the instance.

    `row[k]` is the cost from the new city to the k-th current city and
    `col[k]` the cost from the k-th current city to the new one, both in
    current city order (instance order, then cities added earlier).
    """
    at: int = Field(ge=0)
    kind: Literal["add_city"] = "add_city"
    city: CityRecord
    row: List[float]
    col: List[float]

    @field_validator("row", "col")
    @classmethod
    def _finite(cls, values: List[float], info) -> List[float]:
        return _check_costs(values, info.field_name)


class EdgeUpdate(BaseModel):
    """New directed cost for one ordered pair"""
    model_config = ConfigDict(populate_by_name=True)

    source: str = Field(alias="from")
    target: str = Field(alias="to")
    cost: float

    @model_validator(mode="after")
    def _check(self) -> "EdgeUpdate":
        if self.source == self.target:
            raise ValueError(f"edge {self.source} -> {self.target} is a self-loop")
        if not math.isfinite(self.cost) or self.cost < 0:
            raise ValueError("edge cost must be finite and >= 0")
        return self


class UpdateEdgesEvent(BaseModel):
    """A batch of directed cost updates"""
    at: int = Field(ge=0)
    kind: Literal["update_edges"] = "update_edges"
    edges: List[EdgeUpdate] = []


Event = Annotated[Union[AddCityEvent, UpdateEdgesEvent], Field(discriminator="kind")]


class EventSchedule(BaseModel):
    """Events ordered by `at`; events sharing a tick keep their file order"""
    events: List[Event] = []

    @model_validator(mode="after")
    def _order(self) -> "EventSchedule":
        self.events = sorted(self.events, key=lambda event: event.at)
        seen = set()
        for event in self.events:
            if event.kind == EventKind.ADD_CITY:
                if event.at in seen:
                    raise ValueError(f"more than one add_city event at iteration {event.at}")
                seen.add(event.at)
        return self

    def __len__(self) -> int:
        return len(self.events)

    def events_at(self, t: int) -> List[Union[AddCityEvent, UpdateEdgesEvent]]:
        return [event for event in self.events if event.at == t]

    def ticks(self) -> List[int]:
        """Distinct iterations at which something happens"""
        return sorted({event.at for event in self.events})

    def validate_against(self, city_ids: Sequence[str]) -> List[str]:
        """
        Replay the schedule's topology over `city_ids` and return the final
        city list. Raises ScheduleValidationError when an event references a
        city that does not exist at its tick, and SchemaError when an
        add_city payload does not cover every current city.
        """
        current = list(city_ids)
        for position, event in enumerate(self.events):
            location = f"events[{position}] (at {event.at})"
            present = set(current)
            if event.kind == EventKind.ADD_CITY:
                if event.city.id in present:
                    raise ScheduleValidationError(
                        f"{location}: city '{event.city.id}' is already in the instance"
                    )
                for name in ("row", "col"):
                    values = getattr(event, name)
                    if len(values) != len(current):
                        raise SchemaError(
                            f"{name} has {len(values)} entries, expected {len(current)}",
                            location,
                        )
                current.append(event.city.id)
            else:
                for edge in event.edges:
                    for city in (edge.source, edge.target):
                        if city not in present:
                            raise ScheduleValidationError(
                                f"{location}: edge references city '{city}' "
                                f"which does not exist at iteration {event.at}"
                            )
        return current

    def added_cities(self) -> Dict[int, str]:
        """Iteration -> id of the city added at that tick"""
        return {
            event.at: event.city.id
            for event in self.events
            if event.kind == EventKind.ADD_CITY
        }

"""
File formats: instance and schedule JSON, result CSV/JSON, and synthetic
instance generation.

Every writer here has a reader, so all outputs parse back. Floats go out as
%.17g and JSON in model field order, so reruns produce identical bytes.
"""

import json
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Type, TypeVar, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from src.config import EUCLIDEAN_COST_SCALE, MAX_GENERATED_CITIES, MIN_GENERATED_CITIES
from src.core import RandomStream
from src.exceptions import ConfigurationError, SchemaError
from src.models import CityRecord, FinalTourRecord, InstanceFile, InstanceStyle
from src.dynamic.events import AddCityEvent, EdgeUpdate, EventSchedule, UpdateEdgesEvent

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

SUMMARY_COLUMNS = [
    "algorithm", "function", "dimension", "seed",
    "final_fitness", "iterations", "mean_fitness", "median_fitness",
]
CONVERGENCE_COLUMNS = ["algorithm", "function", "dimension", "seed", "iteration", "best_fitness"]
HISTORY_COLUMNS = ["iteration", "algorithm", "best_cost", "event", "seed"]

Model = TypeVar("Model", bound=BaseModel)
PathLike = Union[str, Path]


def _load_json(path: PathLike) -> object:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise SchemaError("file not found", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(e.msg, f"{path}:{e.lineno}:{e.colno}") from None


def _validate(model: Type[Model], payload: object, source: str) -> Model:
    """Model instance, or SchemaError naming the first offending field"""
    try:
        return model.model_validate(payload)
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        location = f"{source}: {field}" if field else source
        raise SchemaError(error["msg"], location) from None


def _dump_json(payload: dict, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path


def read_instance(path: PathLike) -> InstanceFile:
    """Parse and validate an instance file"""
    return _validate(InstanceFile, _load_json(path), str(path))


def write_instance(instance: InstanceFile, path: PathLike) -> Path:
    return _dump_json(instance.model_dump(), path)


def read_schedule(path: Optional[PathLike]) -> EventSchedule:
    """Parse a schedule file; no path means an empty schedule"""
    if path is None:
        return EventSchedule()
    return _validate(EventSchedule, _load_json(path), str(path))


def write_schedule(schedule: EventSchedule, path: PathLike) -> Path:
    return _dump_json(schedule.model_dump(by_alias=True), path)


def write_final_tour(record: FinalTourRecord, path: PathLike) -> Path:
    return _dump_json(record.model_dump(), path)


def read_final_tour(path: PathLike) -> FinalTourRecord:
    return _validate(FinalTourRecord, _load_json(path), str(path))


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def _read_csv(path: PathLike, columns: List[str], **kwargs) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, **kwargs)
    except FileNotFoundError:
        raise SchemaError("file not found", str(path)) from None
    if list(frame.columns) != columns:
        raise SchemaError(f"expected columns {','.join(columns)}", str(path))
    return frame


def read_summary_csv(path: PathLike) -> pd.DataFrame:
    """Summary rows; `seed` stays a string because aggregate rows hold 'aggregate'"""
    return _read_csv(path, SUMMARY_COLUMNS, dtype={"seed": str})


def read_convergence_csv(path: PathLike) -> pd.DataFrame:
    return _read_csv(path, CONVERGENCE_COLUMNS)


def read_history_csv(path: PathLike) -> pd.DataFrame:
    return _read_csv(path, HISTORY_COLUMNS, dtype={"event": str}, keep_default_na=False)


def _city_records(n: int) -> List[CityRecord]:
    return [CityRecord(id=f"c{k}", label=f"City {k}") for k in range(1, n + 1)]


def generate_instance(n: int, seed: int, style: Union[InstanceStyle, str] = InstanceStyle.EUCLIDEAN) -> InstanceFile:
    """
    Synthetic instance with n cities.

    euclidean: points uniform in the unit square, symmetric distances
    scaled by 1e5 and rounded to integers (at least 1 off the diagonal).
    random-asymmetric: independent directed integer costs in [1e3, 1e5].
    """
    if not MIN_GENERATED_CITIES <= n <= MAX_GENERATED_CITIES:
        raise ConfigurationError(
            f"city count must lie in [{MIN_GENERATED_CITIES}, {MAX_GENERATED_CITIES}], got {n}"
        )
    try:
        style = InstanceStyle(style)
    except ValueError:
        raise ConfigurationError(f"Unknown instance style '{style}'") from None

    rng = RandomStream(seed)
    if style == InstanceStyle.EUCLIDEAN:
        points = rng.random((n, 2))
        distances = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
        costs = np.maximum(np.rint(distances * EUCLIDEAN_COST_SCALE), 1.0)
        directed = False
    else:
        costs = rng.integers(1000, int(EUCLIDEAN_COST_SCALE) + 1, size=(n, n)).astype(float)
        directed = True
    np.fill_diagonal(costs, 0.0)

    logger.debug(f"Generated {style.value} instance with {n} cities (seed {seed})")
    return InstanceFile(cities=_city_records(n), costs=costs.tolist(), directed=directed)


def holdout_scenario(
    instance: InstanceFile,
    add_at: int,
    update_at: Optional[int],
    seed: int,
    noise: float = 0.3,
    edge_count: Optional[int] = None,
) -> Tuple[InstanceFile, EventSchedule]:
    """
    Turn a static instance into a dynamic one: the last city is held out and
    joins at `add_at`; at `update_at` a batch of random directed edges over
    all cities has its cost scaled by a factor in [1 - noise, 1 + noise).
    """
    if update_at is not None and update_at < add_at:
        raise ConfigurationError("the edge batch must not precede the added city")
    if not 0.0 <= noise < 1.0:
        raise ConfigurationError(f"noise must lie in [0, 1), got {noise}")
    costs = np.array(instance.costs, dtype=float)
    n = len(costs)
    held = instance.cities[-1]
    base = InstanceFile(
        cities=instance.cities[:-1],
        costs=costs[:-1, :-1].tolist(),
        directed=instance.directed,
    )
    events = [
        AddCityEvent(
            at=add_at,
            city=held,
            row=costs[-1, :-1].tolist(),
            col=costs[:-1, -1].tolist(),
        )
    ]

    if update_at is not None:
        rng = RandomStream(seed)
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        count = min(edge_count or n, len(pairs))
        chosen = rng.choice(len(pairs), size=count, replace=False)
        factors = rng.uniform(1.0 - noise, 1.0 + noise, size=count)
        ids = instance.city_ids
        edges = []
        for k, factor in zip(sorted(int(c) for c in chosen), factors):
            i, j = pairs[k]
            edges.append(
                EdgeUpdate(source=ids[i], target=ids[j], cost=float(np.rint(costs[i, j] * factor)))
            )
        events.append(UpdateEdgesEvent(at=update_at, edges=edges))

    return base, EventSchedule(events=events)

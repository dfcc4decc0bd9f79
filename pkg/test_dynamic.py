"""
Tests for the time-varying cost matrix, event schedules, cost providers,
population repair, the dynamic simulation loop and the file formats
"""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from src.core import Individual, Population, RandomStream
from src.dynamic import (
    AddCityEvent,
    DynamicCostMatrix,
    EdgeUpdate,
    EventSchedule,
    ReplayProvider,
    SyntheticProvider,
    UpdateEdgesEvent,
    apply_event,
    repair_population,
    simulate,
)
from src.exceptions import (
    ConfigurationError,
    ConsistencyError,
    InstanceError,
    ScheduleValidationError,
    SchemaError,
)
from src.instances import (
    generate_instance,
    holdout_scenario,
    read_instance,
    read_schedule,
    write_instance,
    write_schedule,
)
from src.models import CityRecord, RunConfig
from src.tsp import CostTable, held_karp_optimum, random_tour, tour_cost


def eleven_city_matrix():
    instance = generate_instance(11, seed=5, style="random-asymmetric")
    return instance, DynamicCostMatrix.from_instance(instance)


def static_history_is_monotone(result):
    """Best cost never rises on iterations without events"""
    rows = result.history
    return all(
        current.best_cost <= previous.best_cost
        for previous, current in zip(rows, rows[1:])
        if not current.events
    )


def test_update_edge_changes_only_that_entry():
    instance, matrix = eleven_city_matrix()
    event = UpdateEdgesEvent(at=3, edges=[EdgeUpdate(source="c1", target="c2", cost=99.0)])
    updated = apply_event(matrix, event)

    assert updated.cost("c1", "c2", 3) == 99.0
    assert updated.cost("c2", "c1", 3) == instance.costs[1][0]
    before, after = matrix.current.matrix, updated.current.matrix
    changed = np.argwhere(before != after)
    assert changed.tolist() == [[0, 1]]
    # the original matrix is untouched
    assert matrix.cost("c1", "c2") == instance.costs[0][1]


def test_add_city_grows_the_matrix():
    _, matrix = eleven_city_matrix()
    row = [float(k) for k in range(1, 12)]
    col = [float(k) * 2 for k in range(1, 12)]
    event = AddCityEvent(at=5, city=CityRecord(id="c12"), row=row, col=col)
    updated = matrix.apply_event(event)

    assert len(updated.current) == 12
    assert updated.cost("c12", "c3") == 3.0
    assert updated.cost("c3", "c12") == 6.0
    assert updated.cost("c12", "c12") == 0.0
    assert len(updated.snapshot(4)) == 11


def test_empty_update_leaves_costs_unchanged():
    _, matrix = eleven_city_matrix()
    updated = matrix.apply_event(UpdateEdgesEvent(at=2, edges=[]))
    assert np.array_equal(updated.current.matrix, matrix.current.matrix)


def test_add_city_with_incomplete_row_is_schema_error():
    _, matrix = eleven_city_matrix()
    event = AddCityEvent(at=1, city=CityRecord(id="c12"), row=[1.0] * 10, col=[1.0] * 11)
    with pytest.raises(SchemaError):
        matrix.apply_event(event)


def test_add_existing_city_and_unknown_edge_are_instance_errors():
    _, matrix = eleven_city_matrix()
    with pytest.raises(InstanceError):
        matrix.apply_event(AddCityEvent(at=1, city=CityRecord(id="c4"), row=[1.0] * 11, col=[1.0] * 11))
    with pytest.raises(InstanceError):
        matrix.apply_event(
            UpdateEdgesEvent(at=1, edges=[EdgeUpdate(source="c1", target="c99", cost=1.0)])
        )


def test_snapshots_follow_epochs():
    _, matrix = eleven_city_matrix()
    first = matrix.apply_event(UpdateEdgesEvent(at=4, edges=[EdgeUpdate(source="c1", target="c2", cost=10.0)]))
    second = first.apply_event(UpdateEdgesEvent(at=4, edges=[EdgeUpdate(source="c2", target="c3", cost=20.0)]))
    third = second.apply_event(UpdateEdgesEvent(at=9, edges=[EdgeUpdate(source="c1", target="c2", cost=30.0)]))

    assert third.epoch_starts == [0, 4, 9]
    assert third.cost("c1", "c2", 3) == matrix.cost("c1", "c2")
    assert third.cost("c1", "c2", 4) == 10.0
    assert third.cost("c2", "c3", 8) == 20.0
    assert third.cost("c1", "c2", 100) == 30.0
    with pytest.raises(ScheduleValidationError):
        third.apply_event(UpdateEdgesEvent(at=5, edges=[]))


def test_edge_update_validation():
    with pytest.raises(ValidationError):
        EdgeUpdate(source="c1", target="c1", cost=1.0)
    with pytest.raises(ValidationError):
        EdgeUpdate(source="c1", target="c2", cost=-1.0)
    assert EdgeUpdate.model_validate({"from": "c1", "to": "c2", "cost": 3}).target == "c2"


def test_schedule_sorts_events_and_rejects_two_cities_in_one_tick():
    schedule = EventSchedule(events=[
        UpdateEdgesEvent(at=7, edges=[]),
        AddCityEvent(at=2, city=CityRecord(id="x"), row=[1.0, 1.0], col=[1.0, 1.0]),
    ])
    assert [event.at for event in schedule.events] == [2, 7]
    assert schedule.ticks() == [2, 7]
    assert schedule.added_cities() == {2: "x"}

    with pytest.raises(ValidationError):
        EventSchedule(events=[
            AddCityEvent(at=2, city=CityRecord(id="x"), row=[1.0], col=[1.0]),
            AddCityEvent(at=2, city=CityRecord(id="y"), row=[1.0], col=[1.0]),
        ])


def test_schedule_validation_against_instance():
    ids = ["a", "b"]
    grow = AddCityEvent(at=1, city=CityRecord(id="c"), row=[1.0, 1.0], col=[1.0, 1.0])
    uses_new_city = UpdateEdgesEvent(at=3, edges=[EdgeUpdate(source="a", target="c", cost=2.0)])
    assert EventSchedule(events=[grow, uses_new_city]).validate_against(ids) == ["a", "b", "c"]

    too_early = UpdateEdgesEvent(at=0, edges=[EdgeUpdate(source="a", target="c", cost=2.0)])
    with pytest.raises(ScheduleValidationError):
        EventSchedule(events=[too_early, grow]).validate_against(ids)

    duplicate = AddCityEvent(at=1, city=CityRecord(id="a"), row=[1.0, 1.0], col=[1.0, 1.0])
    with pytest.raises(ScheduleValidationError):
        EventSchedule(events=[duplicate]).validate_against(ids)

    short = AddCityEvent(at=1, city=CityRecord(id="c"), row=[1.0], col=[1.0, 1.0])
    with pytest.raises(SchemaError):
        EventSchedule(events=[short]).validate_against(ids)


def test_repair_inserts_equidistant_city():
    table = CostTable(list("abcd"), np.ones((4, 4)) - np.eye(4))
    tours = [("a", "b", "c"), ("c", "a", "b")]
    pop = Population(members=[Individual(tour, 3.0) for tour in tours])
    repair_population(pop, "d", table)
    for member in pop.members:
        assert sorted(member.position) == list("abcd")
        assert member.fitness == 4.0


def test_repair_keeps_every_tour_complete_and_costed():
    instance, matrix = eleven_city_matrix()
    event = AddCityEvent(
        at=1, city=CityRecord(id="c12"),
        row=[500.0 * k for k in range(1, 12)], col=[700.0] * 11,
    )
    table = matrix.apply_event(event).current
    rng = RandomStream(2)
    pop = Population(members=[
        Individual(random_tour(instance.city_ids, rng), 0.0) for _ in range(6)
    ])
    repair_population(pop, "c12", table, rng=rng)
    for member in pop.members:
        assert sorted(member.position) == sorted(table.city_ids)
        assert member.fitness == tour_cost(member.position, table)
    assert pop.leader.fitness == pop.fitnesses().min()


def test_repair_rejects_present_or_unknown_city():
    table = CostTable(list("abc"), np.ones((3, 3)) - np.eye(3))
    pop = Population(members=[Individual(("a", "b", "c"), 3.0), Individual(("b", "a", "c"), 3.0)])
    with pytest.raises(ConsistencyError):
        repair_population(pop, "c", table)
    with pytest.raises(InstanceError):
        repair_population(pop, "z", table)


def test_empty_schedule_behaves_like_a_static_run():
    instance = generate_instance(8, seed=3)
    result = simulate(ReplayProvider(instance), "osoma", RunConfig(max_iterations=25), seed=4)
    costs = [row.best_cost for row in result.history]
    assert [row.iteration for row in result.history] == list(range(26))
    assert all(b <= a for a, b in zip(costs, costs[1:]))
    assert all(not row.events for row in result.history)
    assert sorted(result.final_tour) == sorted(instance.city_ids)
    assert result.final_cost == costs[-1]


@pytest.mark.parametrize("algorithm", ["soma", "osoma", "de", "pso"])
def test_add_city_mid_run(algorithm):
    base, schedule = holdout_scenario(generate_instance(9, seed=6), add_at=10, update_at=None, seed=6)
    provider = ReplayProvider(base, schedule)
    result = simulate(provider, algorithm, RunConfig(max_iterations=20), seed=1)

    assert len(result.history) == 21
    assert result.history[10].events == ["add_city"]
    assert len(result.final_tour) == 9
    assert static_history_is_monotone(result)
    final = provider.matrix_at(20).current
    assert result.final_cost == pytest.approx(tour_cost(result.final_tour, final))


def test_replay_is_deterministic():
    base, schedule = holdout_scenario(generate_instance(9, seed=8), add_at=5, update_at=12, seed=8)
    provider = ReplayProvider(base, schedule)
    first = simulate(provider, "osoma", RunConfig(max_iterations=20), seed=3)
    second = simulate(provider, "osoma", RunConfig(max_iterations=20), seed=3)
    assert first == second


def test_reinit_on_event_rebuilds_population():
    base, schedule = holdout_scenario(generate_instance(9, seed=2), add_at=6, update_at=None, seed=2)
    provider = ReplayProvider(base, schedule)
    kept = simulate(provider, "soma", RunConfig(max_iterations=12), seed=0)
    rebuilt = simulate(provider, "soma", RunConfig(max_iterations=12), seed=0, reinit_on_event=True)
    assert kept.history[:6] == rebuilt.history[:6]
    assert len(rebuilt.final_tour) == 9
    assert static_history_is_monotone(rebuilt)


def test_osoma_reaches_each_epoch_optimum_on_a_small_instance():
    base, schedule = holdout_scenario(generate_instance(8, seed=21), add_at=8, update_at=16, seed=21)
    provider = ReplayProvider(base, schedule)
    ends = {0: 7, 8: 15, 16: 24}
    optima = {start: held_karp_optimum(provider.matrix_at(start).current)[1] for start in ends}

    reached = dict.fromkeys(ends, 0)
    for seed in range(5):
        result = simulate(provider, "osoma", RunConfig(max_iterations=24), seed)
        for start, end in ends.items():
            cost = result.history[end].best_cost
            assert cost >= optima[start] - 1e-9
            reached[start] += abs(cost - optima[start]) <= 1e-9
    assert all(count >= 4 for count in reached.values()), reached


def test_synthetic_provider_is_seeded_and_order_independent():
    instance = generate_instance(6, seed=1)
    provider = SyntheticProvider(instance, seed=9, noise=0.2, interval=5)
    assert provider.pending_events(0) == []
    assert provider.pending_events(4) == []
    assert len(provider.pending_events(5)) == 1

    late_first = provider.noise_event(10)
    provider.noise_event(5)
    assert provider.noise_event(10) == late_first
    assert SyntheticProvider(instance, seed=9, noise=0.2, interval=5).noise_event(10) == late_first
    assert SyntheticProvider(instance, seed=10, noise=0.2, interval=5).noise_event(10) != late_first

    base = np.array(instance.costs)
    for edge in late_first.edges:
        i, j = int(edge.source[1:]) - 1, int(edge.target[1:]) - 1
        assert 0.8 * base[i, j] <= edge.cost <= 1.2 * base[i, j]
    assert provider.cost("c1", "c2", 4) == instance.costs[0][1]


def test_synthetic_provider_validates_arguments():
    instance = generate_instance(5, seed=1)
    with pytest.raises(ConfigurationError):
        SyntheticProvider(instance, seed=0, noise=1.5)
    with pytest.raises(ConfigurationError):
        SyntheticProvider(instance, seed=0, interval=0)


def test_synthetic_simulation_stays_monotone_between_events():
    provider = SyntheticProvider(generate_instance(8, seed=7), seed=7, interval=10)
    result = simulate(provider, "osoma", RunConfig(max_iterations=30), seed=2)
    assert [row.iteration for row in result.history if row.events] == [10, 20, 30]
    assert static_history_is_monotone(result)


def test_instance_and_schedule_files_parse_back(tmp_path):
    base, schedule = holdout_scenario(generate_instance(7, seed=3), add_at=2, update_at=4, seed=3)
    assert read_instance(write_instance(base, tmp_path / "instance.json")) == base

    path = write_schedule(schedule, tmp_path / "schedule.json")
    raw = json.loads(path.read_text())
    assert "from" in raw["events"][1]["edges"][0]
    assert read_schedule(path) == schedule
    assert len(read_schedule(None)) == 0


def test_schema_errors_name_their_location(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"cities": [\n', encoding="utf-8")
    with pytest.raises(SchemaError) as excinfo:
        read_instance(broken)
    assert excinfo.value.location.startswith(f"{broken}:")

    missing = tmp_path / "missing_costs.json"
    missing.write_text(json.dumps({"cities": [{"id": "a"}, {"id": "b"}]}), encoding="utf-8")
    with pytest.raises(SchemaError) as excinfo:
        read_instance(missing)
    assert excinfo.value.location.endswith("costs")

    with pytest.raises(SchemaError):
        read_instance(tmp_path / "nowhere.json")

    bad_event = tmp_path / "schedule.json"
    bad_event.write_text(json.dumps({"events": [{"at": 1, "kind": "teleport"}]}), encoding="utf-8")
    with pytest.raises(SchemaError):
        read_schedule(bad_event)


def test_generated_instances():
    euclidean = generate_instance(10, seed=4)
    costs = np.array(euclidean.costs)
    assert not euclidean.directed
    assert np.array_equal(costs, costs.T)
    assert np.all(np.diag(costs) == 0.0)
    off_diagonal = costs[~np.eye(10, dtype=bool)]
    assert np.all(off_diagonal >= 1.0)
    assert np.all(off_diagonal == np.rint(off_diagonal))
    assert generate_instance(10, seed=4) == euclidean
    assert generate_instance(10, seed=5) != euclidean

    asymmetric = generate_instance(6, seed=4, style="random-asymmetric")
    values = np.array(asymmetric.costs)[~np.eye(6, dtype=bool)]
    assert asymmetric.directed
    assert np.all((values >= 1000) & (values <= 100000))

    for n in (2, 65):
        with pytest.raises(ConfigurationError):
            generate_instance(n, seed=0)
    with pytest.raises(ConfigurationError):
        generate_instance(5, seed=0, style="spherical")


def test_holdout_scenario_shapes():
    full = generate_instance(12, seed=11)
    base, schedule = holdout_scenario(full, add_at=15, update_at=35, seed=11)
    assert len(base.cities) == 11
    assert schedule.validate_against(base.city_ids) == full.city_ids
    assert schedule.added_cities() == {15: "c12"}
    assert len(schedule.events[1].edges) == 12
    with pytest.raises(ConfigurationError):
        holdout_scenario(full, add_at=15, update_at=10, seed=0)

"""
Tests for swap algebra, tour evaluation, exact oracles and the discrete
tour optimizers
"""

import numpy as np
import pytest

from src.core import Individual, Population, RandomStream, select_leader
from src.exceptions import (
    BudgetError,
    ConsistencyError,
    InstanceError,
    InstanceMismatchError,
    SwapIndexError,
)
from src.instances import generate_instance
from src.models import DeParams, RunConfig, SomaParams
from src.tsp import (
    CostTable,
    SwapOperator,
    apply,
    apply_sequence,
    brute_force_optimum,
    cheapest_insertion,
    create_tour_optimizer,
    discrete_de_step,
    discrete_osoma_migrate,
    discrete_soma_migrate,
    held_karp_optimum,
    insert_city,
    insertion_tour,
    random_tour,
    subtract,
    swap_distance,
    tour_cost,
)
from src.tsp.discrete import kick_tour, reseed_stalled


def random_table(n, seed, low=1.0, high=100.0):
    matrix = RandomStream(seed).uniform(low, high, size=(n, n))
    np.fill_diagonal(matrix, 0.0)
    return CostTable(list(range(n)), matrix)


def tour_population(table, size, seed):
    rng = RandomStream(seed)
    tours = [random_tour(table.city_ids, rng) for _ in range(size)]
    pop = Population(members=[Individual(t, table.cycle_cost(t)) for t in tours])
    select_leader(pop)
    return pop


def test_apply_literal_examples():
    assert apply((3, 4, 5, 6, 8), SwapOperator(2, 3)) == (3, 5, 4, 6, 8)
    assert apply((5, 7, 6, 9, 8), SwapOperator(2, 3)) == (5, 6, 7, 9, 8)


def test_apply_is_an_involution():
    tour = (1, 2, 3, 4, 5, 6)
    op = SwapOperator(2, 5)
    assert apply(apply(tour, op), op) == tour


def test_swap_operator_validation():
    assert repr(SwapOperator(1, 3)) == "MO(1,3)"
    with pytest.raises(SwapIndexError):
        SwapOperator(0, 2)
    with pytest.raises(SwapIndexError):
        SwapOperator(2, 2)
    with pytest.raises(IndexError):
        apply((1, 2, 3), SwapOperator(1, 4))


def test_subtract_literal_example():
    assert subtract((5, 6, 7, 8, 9), (6, 7, 5, 9, 8)) == [
        SwapOperator(1, 3), SwapOperator(2, 3), SwapOperator(4, 5)
    ]


def test_subtract_identity_and_mismatch():
    assert subtract((1, 2, 3), (1, 2, 3)) == []
    with pytest.raises(InstanceMismatchError):
        subtract((1, 2, 3), (1, 2, 4))
    with pytest.raises(InstanceMismatchError):
        subtract((1, 2), (1, 2, 3))


def test_subtract_round_trip_and_length_bound_on_random_pairs():
    rng = RandomStream(21)
    for n in range(2, 9):
        cities = list(range(n))
        for _ in range(200):
            a, b = random_tour(cities, rng), random_tour(cities, rng)
            sequence = subtract(a, b)
            assert apply_sequence(b, sequence) == a
            assert len(sequence) <= n - 1
            assert swap_distance(a, b) == len(sequence)


def test_tour_cost_examples():
    ones = CostTable(["a", "b", "c"], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert tour_cost(("a", "b", "c"), ones) == 3
    directed = CostTable([1, 2], [[0, 4], [6, 0]])
    assert tour_cost((1, 2), directed) == 10


def test_tour_cost_is_rotation_invariant():
    table = random_table(7, seed=3)
    tour = random_tour(table.city_ids, RandomStream(3))
    for shift in range(7):
        rotated = tour[shift:] + tour[:shift]
        assert tour_cost(rotated, table) == pytest.approx(tour_cost(tour, table))


def test_missing_city_is_instance_error():
    table = random_table(3, seed=1)
    with pytest.raises(InstanceError):
        tour_cost((0, 1, 7), table)


def test_insertion_of_equidistant_city():
    table = CostTable(list("abcd"), [
        [0, 1, 1, 1],
        [1, 0, 1, 1],
        [1, 1, 0, 1],
        [1, 1, 1, 0],
    ])
    for after in range(3):
        assert tour_cost(insert_city(("a", "b", "c"), "d", after), table) == 4
    assert tour_cost(cheapest_insertion(("a", "b", "c"), "d", table), table) == 4
    with pytest.raises(ConsistencyError):
        cheapest_insertion(("a", "b", "c", "d"), "d", table)


def test_cheapest_insertion_beats_random_insertion():
    rng = RandomStream(8)
    for seed in range(20):
        table = random_table(8, seed=seed)
        tour = random_tour(table.city_ids[:-1], rng)
        new_city = table.city_ids[-1]
        cheapest = tour_cost(cheapest_insertion(tour, new_city, table), table)
        for after in range(len(tour)):
            assert cheapest <= tour_cost(insert_city(tour, new_city, after), table) + 1e-9


def test_brute_force_triangle_and_square():
    triangle = CostTable(["x", "y", "z"], [[0, 3, 4], [3, 0, 5], [4, 5, 0]])
    _, cost = brute_force_optimum(triangle)
    assert cost == 12

    corners = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    distances = np.linalg.norm(corners[:, None] - corners[None, :], axis=-1)
    tour, cost = brute_force_optimum(CostTable(range(4), distances))
    assert cost == pytest.approx(4.0)
    assert tour[0] == 0


def test_brute_force_tie_goes_to_lexicographically_smallest_tour():
    uniform = CostTable(list(range(5)), np.ones((5, 5)) - np.eye(5))
    tour, cost = brute_force_optimum(uniform)
    assert tour == (0, 1, 2, 3, 4)
    assert cost == 5


def test_brute_force_budget():
    with pytest.raises(BudgetError):
        brute_force_optimum(random_table(13, seed=0))


def test_brute_force_agrees_with_held_karp():
    for seed in range(5):
        table = random_table(8, seed=seed)
        bf_tour, bf_cost = brute_force_optimum(table)
        hk_tour, hk_cost = held_karp_optimum(table)
        assert bf_cost == pytest.approx(hk_cost)
        assert tour_cost(bf_tour, table) == bf_cost
        assert tour_cost(hk_tour, table) == hk_cost
        assert sorted(hk_tour) == list(range(8))


def test_brute_force_workers_give_identical_answer():
    table = random_table(8, seed=11)
    assert brute_force_optimum(table, workers=2) == brute_force_optimum(table)


def test_held_karp_on_euclidean_instance_matches_brute_force():
    instance = generate_instance(9, seed=2)
    table = CostTable(instance.city_ids, instance.costs)
    assert held_karp_optimum(table)[1] == brute_force_optimum(table)[1]


def test_discrete_member_equal_to_leader_is_unchanged():
    table = random_table(6, seed=4)
    tour = random_tour(table.city_ids, RandomStream(4))
    pop = Population(members=[Individual(tour, table.cycle_cost(tour)) for _ in range(3)])
    discrete_osoma_migrate(pop, SomaParams(), table, None, RandomStream(0))
    assert all(member.position == tour for member in pop.members)


def test_full_inclusion_reproduces_leader_tour():
    table = random_table(7, seed=5)
    rng = RandomStream(5)
    leader = random_tour(table.city_ids, rng)
    follower = random_tour(table.city_ids, rng)
    if table.cycle_cost(follower) < table.cycle_cost(leader):
        leader, follower = follower, leader
    pop = Population(members=[
        Individual(leader, table.cycle_cost(leader)),
        Individual(follower, table.cycle_cost(follower)),
    ])
    select_leader(pop)
    params = SomaParams(path_length=1.0, step=1.0, pr=1.0)
    discrete_soma_migrate(pop, params, table, None, RandomStream(1))
    if table.cycle_cost(follower) > table.cycle_cost(leader):
        assert pop.members[1].position == leader


def test_discrete_migration_keeps_valid_tours_and_monotone_leader():
    table = random_table(9, seed=6)
    rng = RandomStream(6)
    pop = tour_population(table, 12, seed=6)
    best = [pop.leader.fitness]
    for _ in range(15):
        discrete_osoma_migrate(pop, SomaParams(), table, None, rng)
        best.append(pop.leader.fitness)
        for member in pop.members:
            assert sorted(member.position) == list(range(9))
            assert member.fitness == table.cycle_cost(member.position)
    assert all(b <= a for a, b in zip(best, best[1:]))


def test_insertion_tour_closes_the_unit_square():
    corners = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    table = CostTable(range(4), np.linalg.norm(corners[:, None] - corners[None, :], axis=-1))
    for seed in range(10):
        tour = insertion_tour(table.city_ids, table, RandomStream(seed))
        assert sorted(tour) == [0, 1, 2, 3]
        assert table.cycle_cost(tour) == pytest.approx(4.0)


def test_kick_tour_is_a_nearby_permutation():
    rng = RandomStream(12)
    tour = tuple(range(10))
    for count in range(1, 6):
        kicked = kick_tour(tour, count, rng)
        assert sorted(kicked) == list(tour)
        assert swap_distance(kicked, tour) <= count
    assert kick_tour(("a",), 3, rng) == ("a",)


def test_reseed_restarts_only_stalled_followers_near_the_leader():
    table = random_table(8, seed=13)
    rng = RandomStream(13)
    pop = tour_population(table, 6, seed=13)
    leader_index, leader = pop.leader_index, pop.leader.position
    best = pop.leader.fitness
    kept = [k for k in range(6) if k != leader_index][:2]
    before = {k: pop.members[k].position for k in kept}
    stalled = [k for k in range(6) if k not in kept]

    reseed_stalled(pop, stalled, table, rng)

    assert pop.members[leader_index].position == leader
    for k in kept:
        assert pop.members[k].position == before[k]
    for k in stalled:
        member = pop.members[k]
        assert member.fitness == table.cycle_cost(member.position)
        if k != leader_index:
            assert swap_distance(member.position, leader) <= 4
    assert pop.leader.fitness <= best


@pytest.mark.parametrize("algorithm", ["soma", "osoma"])
def test_migrating_population_stays_diverse(algorithm):
    instance = generate_instance(10, seed=1001)
    table = CostTable(instance.city_ids, instance.costs)
    optimizer = create_tour_optimizer(algorithm, RunConfig(population_size=30))
    rng = RandomStream(1)
    pop = optimizer.initialize(table, None, rng)
    for _ in range(40):
        pop = optimizer.step(pop, table, None, rng)
    assert len({member.position for member in pop.members}) > len(pop) // 2


def test_discrete_de_keeps_valid_tours_and_never_worsens():
    table = random_table(8, seed=7)
    rng = RandomStream(7)
    pop = tour_population(table, 10, seed=7)
    before = pop.fitnesses()
    discrete_de_step(pop, DeParams(), table, None, rng)
    assert np.all(pop.fitnesses() <= before)
    assert all(sorted(member.position) == list(range(8)) for member in pop.members)


@pytest.mark.parametrize("algorithm", ["soma", "osoma", "de", "pso"])
def test_tour_optimizers_are_deterministic_and_monotone(algorithm):
    table = random_table(8, seed=9)
    config = RunConfig(population_size=12)

    def trajectory():
        optimizer = create_tour_optimizer(algorithm, config)
        rng = RandomStream(3)
        pop = optimizer.initialize(table, None, rng)
        costs = [optimizer.best(pop)[1]]
        for _ in range(20):
            pop = optimizer.step(pop, table, None, rng)
            costs.append(optimizer.best(pop)[1])
        return costs, optimizer.best(pop)[0]

    first, tour = trajectory()
    second, _ = trajectory()
    assert first == second
    assert all(b <= a for a, b in zip(first, first[1:]))
    assert sorted(tour) == list(range(8))


def test_osoma_improves_on_initial_tours_and_respects_optimum():
    table = random_table(7, seed=10)
    _, optimum = brute_force_optimum(table)
    optimizer = create_tour_optimizer("osoma", RunConfig(population_size=20))
    rng = RandomStream(0)
    pop = optimizer.initialize(table, None, rng)
    initial = optimizer.best(pop)[1]
    for _ in range(60):
        pop = optimizer.step(pop, table, None, rng)
    final = optimizer.best(pop)[1]
    assert optimum - 1e-9 <= final <= initial
    assert final < initial or abs(initial - optimum) <= 1e-9

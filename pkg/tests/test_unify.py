import random

import pytest

from waypoint_routing.decomposition import TreeDecomposition, validate_td
from waypoint_routing.generate import gen_random
from waypoint_routing.instance import EdgeSpec, Instance, Walk, make_instance
from waypoint_routing.oracle import brute_force_min_cost, verify_walk, walk_search_min_cost
from waypoint_routing.unify import Infeasible, MalformedWalk, lift_walk, unify


@pytest.fixture
def path012():
    return make_instance(3, [(0, 1, 1, 1), (1, 2, 1, 1)], 0, 2, {1})


def test_path_gadget(path012):
    u = unify(path012)
    assert u.root == 3 and u.gadget is not None
    gadget_edges = [u.edges[i] for i in u.gadget.edges]
    assert {(e.u, e.v) for e in gadget_edges} == {(3, 0), (3, 2)}
    assert all(e.weight == 1 and e.origin is None for e in gadget_edges)
    # terminals join the waypoint set along with the root (see the ledger)
    assert u.waypoints == {0, 1, 2, 3}
    assert brute_force_min_cost(u) == walk_search_min_cost(path012) + 2 == 4


def test_capacity_clamped_to_two_copies():
    u = unify(make_instance(2, [(0, 1, 5, 2)], 0, 0, {0}))
    assert u.gadget is None and u.root == 0
    assert [(e.u, e.v, e.weight, e.copy) for e in u.edges] == [(0, 1, 2, 1), (0, 1, 2, 2)]


def test_waypoint_in_other_component():
    inst = make_instance(4, [(0, 1, 1, 1), (2, 3, 1, 1)], 0, 1, {3})
    with pytest.raises(Infeasible) as info:
        unify(inst)
    assert info.value.witness == 3 and "waypoint" in info.value.reason


def test_target_in_other_component():
    with pytest.raises(Infeasible, match="target"):
        unify(make_instance(3, [(0, 1, 1, 1)], 0, 2, ()))


def test_pruning_relabels_densely():
    inst = make_instance(5, [(1, 3, 1, 1), (3, 4, 1, 1), (0, 2, 1, 1)], 3, 3, {1})
    u = unify(inst)
    assert u.vertex_map == (1, 3, 4)
    assert u.n == 3 and u.root == 1 and u.waypoints == {0, 1}


def test_isolated_source():
    u = unify(make_instance(1, [], 0, 0, {0}))
    assert u.n == 1 and u.m == 0 and u.waypoints == {0}
    assert brute_force_min_cost(u) == 0


def test_lift_walk_path_example(path012):
    u = unify(path012)
    e30, e32 = u.gadget.edges
    uw = Walk((3, 0, 1, 2, 3), (e30, 0, 1, e32), 4)
    lifted = lift_walk(uw, u, path012)
    assert lifted.vertices == (0, 1, 2) and lifted.edges == (0, 1) and lifted.cost == 2
    # traversed the other way round
    back = lift_walk(Walk((3, 2, 1, 0, 3), (e32, 1, 0, e30), 4), u, path012)
    assert back.vertices == (0, 1, 2)


def test_lift_walk_without_gadget_and_doubled_edge():
    inst = make_instance(3, [(0, 1, 2, 3), (1, 2, 2, 1)], 0, 0, {2})
    u = unify(inst)
    uw = Walk((0, 1, 2, 1, 0), (0, 2, 3, 1), 8)
    lifted = lift_walk(uw, u, inst)
    assert lifted.vertices == (0, 1, 2, 1, 0) and lifted.cost == 8
    assert lifted.edges == (0, 1, 1, 0)
    assert verify_walk(lifted, inst) == []


def test_lift_walk_rejects_malformed(path012):
    u = unify(path012)
    e30, e32 = u.gadget.edges
    with pytest.raises(MalformedWalk, match="closed"):
        lift_walk(Walk((3, 0, 1), (e30, 0), 2), u, path012)
    with pytest.raises(MalformedWalk, match="more than once"):
        lift_walk(Walk((3, 0, 3), (e30, e30), 2), u, path012)
    with pytest.raises(MalformedWalk):
        lift_walk(Walk((3,), (), 0), u, path012)


def test_sizes_bounded():
    for seed in range(100):
        inst = gen_random(random.Random(seed).randint(1, 8), 0.5, (1, 4), (0, 5), 1, seed)
        u = unify(inst)
        assert u.m <= 2 * inst.m + 2 and u.n <= inst.n + 1
        assert u.root in u.waypoints
        per_pair = {}
        for e in u.edges:
            assert e.u != e.v
            per_pair.setdefault((min(e.u, e.v), max(e.u, e.v)), set()).add(e.weight)
        assert all(len(ws) == 1 for ws in per_pair.values())
        assert sum(1 for e in u.edges if e.origin is not None) == sum(min(e.capacity, 2) for e in inst.edges)


def test_original_decomposition_plus_gadget_is_valid():
    for seed in range(50):
        inst = gen_random(6, 0.5, (1, 2), (1, 5), 2, seed, distinct_terminals=True)
        td = TreeDecomposition({0: frozenset(range(inst.n))})
        u = unify(inst)
        assert validate_td(td.add_to_all(u.gadget.vertex), u) == []


@pytest.mark.parametrize("seed", range(60))
def test_optimum_shifts_by_gadget(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    inst = gen_random(n, 0.5, (1, 2), (1, 5), rng.randint(0, n), seed)
    try:
        u = unify(inst)
    except Infeasible:
        assert walk_search_min_cost(inst) is None
        return
    unified = brute_force_min_cost(u)
    direct = walk_search_min_cost(inst)
    if unified is None:
        assert direct is None
    else:
        assert direct == unified - (2 if u.gadget else 0)


def test_weight_zero_edges_still_clamped():
    u = unify(Instance(2, (EdgeSpec(0, 1, 3, 0),), 0, 1, frozenset()))
    assert sum(1 for e in u.edges if e.origin is not None) == 2
    assert brute_force_min_cost(u) == 2

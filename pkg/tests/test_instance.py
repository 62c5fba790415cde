import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waypoint_routing.generate import gen_random
from waypoint_routing.instance import (
    EdgeSpec,
    Instance,
    InstanceFormatError,
    Walk,
    parse_instance,
    read_walk,
    validate,
    write_instance,
    write_walk,
)



def test_smallest_instance():
    inst = parse_instance("wrp 1 0\ns 0\nt 0\nw 0\n")
    assert inst == Instance(1, (), 0, 0, frozenset({0}))


def test_triangle(triangle):
    assert triangle.n == 3
    assert [e.pair for e in triangle.edges] == [(0, 1), (0, 2), (1, 2)]
    assert all(e.capacity == 1 and e.weight == 1 for e in triangle.edges)
    assert triangle.source == triangle.target == 0
    assert triangle.waypoints == {0, 1, 2}
    assert validate(triangle) == []


def test_comments_and_blank_lines():
    text = "# header next\nwrp 2 1\n\ne 1 0 3 7  # reversed endpoints\ns 0\nt 1\nw\n"
    inst = parse_instance(text)
    assert inst.edges == (EdgeSpec(0, 1, 3, 7),)
    assert inst.waypoints == frozenset()


@pytest.mark.parametrize("text, fragment", [
    ("wrp 2 1\ne 0 0 1 1\ns 0\nt 0\n", "self-loop"),
    ("wrp 2 1\ne 0 2 1 1\ns 0\nt 0\n", "out of range"),
    ("wrp 2 1\ne 0 1 0 1\ns 0\nt 0\n", "capacity"),
    ("wrp 2 2\ne 0 1 1 1\ne 1 0 1 1\ns 0\nt 0\n", "duplicate"),
    ("wrp 2 1\ne 0 1 1 x\ns 0\nt 0\n", "expected integer"),
    ("wrp 2 0\ns 0\n", "missing"),
    ("wrp 2 1\ns 0\nt 0\n", "declares 1 edges"),
    ("e 0 1 1 1\n", "header"),
    ("wrp 2 0\ns 0\nt 0\nw 5\n", "waypoint 5"),
    ("wrp 2 0\ns 0\ns 1\nt 0\n", "repeated"),
    ("wrp 2 1\ne 0 1 1 18446744073709551616\ns 0\nt 0\n", "weight"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(InstanceFormatError, match=fragment):
        parse_instance(text)


def test_parse_error_carries_line_number():
    with pytest.raises(InstanceFormatError) as info:
        parse_instance("wrp 2 1\ne 0 0 1 1\ns 0\nt 0\n")
    assert info.value.line == 2


def test_validate_reports_violations(triangle):
    bad_wp = Instance(3, triangle.edges, 0, 0, frozenset({3}))
    assert any("waypoint 3 out of range" in v for v in validate(bad_wp))
    bad_cap = Instance(2, (EdgeSpec(0, 1, 0, 1),), 0, 0, frozenset())
    assert any("capacity must be >= 1" in v for v in validate(bad_cap))
    loops = Instance(2, (EdgeSpec(1, 1, 1, 1), EdgeSpec(0, 1), EdgeSpec(1, 0)), 0, 0)
    problems = validate(loops)
    assert any("self-loop" in v for v in problems)
    assert any("duplicate" in v for v in problems)


def test_write_canonical(triangle):
    assert write_instance(triangle) == (
        "wrp 3 3\ne 0 1 1 1\ne 0 2 1 1\ne 1 2 1 1\ns 0\nt 0\nw 0 1 2\n")
    assert write_instance(parse_instance("wrp 1 0\ns 0\nt 0\nw 0\n")).startswith("wrp 1 0\n")


def test_round_trip_random():
    for seed in range(100):
        rng = random.Random(seed)
        n = rng.randint(1, 10)
        inst = gen_random(n, rng.random() * 0.8 + 0.2, (1, 4), (0, 100), rng.randint(0, n), seed)
        assert validate(inst) == []
        assert parse_instance(write_instance(inst)) == inst


lines = st.sampled_from(["wrp", "e", "s", "t", "w", "#", "x", "3", "-1", "0", "1", "2", "1.5", ""])


@settings(max_examples=300, deadline=None)
@given(st.lists(st.lists(lines, max_size=6).map(" ".join), max_size=8).map("\n".join))
def test_parse_is_total(text):
    try:
        inst = parse_instance(text)
    except InstanceFormatError:
        return
    assert validate(inst) == []


def test_walk_file_round_trip():
    w = Walk((0, 1, 2, 0), None, 3)
    assert read_walk(write_walk(w)) == w
    with pytest.raises(InstanceFormatError):
        read_walk("cost 3\n")
    with pytest.raises(InstanceFormatError):
        read_walk("cost x\nwalk 0\n")

"""Seeded instance generators: random connected graphs and benchmark families."""

from __future__ import annotations

import random

from .instance import EdgeSpec, Instance
from .unify import component_of

MAX_ATTEMPTS = 10_000


def gen_random(n: int, p: float = 0.5, caps: tuple[int, int] = (1, 2),
               weights: tuple[int, int] = (1, 5), waypoints: int = 1,
               seed: int = 0, distinct_terminals: bool = False) -> Instance:
    """Random connected G(n, p) instance; redraws the graph until connected.

    ``waypoints`` distinct vertices are drawn uniformly; source and target are
    drawn independently (forced apart with ``distinct_terminals``).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= waypoints <= n:
        raise ValueError(f"cannot draw {waypoints} waypoints from {n} vertices")
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    if caps[0] < 1 or caps[0] > caps[1]:
        raise ValueError(f"bad capacity range {caps}")
    if weights[0] < 0 or weights[0] > weights[1]:
        raise ValueError(f"bad weight range {weights}")
    if distinct_terminals and n < 2:
        raise ValueError("distinct terminals need n >= 2")
    if n > 1 and p == 0.0:
        raise ValueError("p = 0 never yields a connected graph")

    rng = random.Random(seed)
    for _ in range(MAX_ATTEMPTS):
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p:
                    edges.append(EdgeSpec(u, v, rng.randint(*caps), rng.randint(*weights)))
        if len(component_of(n, edges, 0)) == n:
            break
    else:
        raise ValueError(f"no connected graph after {MAX_ATTEMPTS} attempts")
    s = rng.randrange(n)
    t = rng.randrange(n)
    while distinct_terminals and t == s:
        t = rng.randrange(n)
    wp = rng.sample(range(n), waypoints)
    return Instance(n, tuple(edges), s, t, frozenset(wp))


def caterpillar(n: int, seed: int = 0) -> Instance:
    """Path spine of ``ceil(n/2)`` vertices, each remaining vertex a leg on the
    spine. Capacity 2 throughout, so every waypoint set is feasible."""
    rng = random.Random(seed)
    spine = (n + 1) // 2
    edges = [EdgeSpec(i, i + 1, 2, rng.randint(1, 5)) for i in range(spine - 1)]
    edges += [EdgeSpec(i - spine, i, 2, rng.randint(1, 5)) for i in range(spine, n)]
    s, t = rng.randrange(n), rng.randrange(n)
    wp = rng.sample(range(n), max(1, n // 4))
    return Instance(n, tuple(edges), s, t, frozenset(wp))


def path_power(n: int, k: int, seed: int = 0) -> Instance:
    """``k``-th power of a path on ``n`` vertices (treewidth ``k``)."""
    rng = random.Random(seed)
    edges = [EdgeSpec(i, j, 2, rng.randint(1, 5))
             for i in range(n) for j in range(i + 1, min(n, i + k + 1))]
    s, t = rng.randrange(n), rng.randrange(n)
    wp = rng.sample(range(n), max(1, n // 3))
    return Instance(n, tuple(edges), s, t, frozenset(wp))

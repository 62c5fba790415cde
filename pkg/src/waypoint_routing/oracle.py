"""Exhaustive reference solvers and walk verification.

Two formulations, kept independent of the dynamic program:

* :func:`brute_force_min_cost` searches the multiplicity of every vertex pair
  of a unified instance for the cheapest connected, even sub-multigraph that
  covers all waypoints;
* :func:`walk_search_min_cost` runs Dijkstra over explicit walk states
  ``(vertex, per-edge usage, visited waypoints)`` on an original instance.
"""

from __future__ import annotations

import heapq
from collections import defaultdict

from .instance import Instance, Walk
from .unify import UnifiedInstance

MAX_MULTI_EDGES = 64
MAX_WALK_STATES = 2_000_000


class OracleBudgetExceeded(RuntimeError):
    pass


def brute_force_min_cost(u: UnifiedInstance, budget: int = MAX_MULTI_EDGES) -> int | None:
    """Minimum weight of a connected even sub-multigraph containing all
    waypoints, or None. The edgeless graph on the root counts when the root
    is the only waypoint.

    Vertex pairs are decided in ``(min, max)`` order; once a vertex has seen
    its last pair its degree must be even (and positive for waypoints other
    than the root), and partial costs at or above the incumbent are cut.
    """
    if u.m > budget:
        raise OracleBudgetExceeded(f"{u.m} multi-edges exceed the oracle budget of {budget}")
    groups = defaultdict(list)
    for e in u.edges:
        groups[(min(e.u, e.v), max(e.u, e.v))].append(e)
    pairs = sorted(groups)
    weights = [groups[p][0].weight for p in pairs]
    copies = [len(groups[p]) for p in pairs]

    last = {}
    for i, (a, b) in enumerate(pairs):
        last[a] = i
        last[b] = i
    finished_at = defaultdict(list)
    for v, i in last.items():
        finished_at[i].append(v)
    waypoints = u.waypoints
    root = u.root
    for w in waypoints:
        if w != root and w not in last:
            return None  # isolated waypoint

    degree = [0] * u.n
    mult = [0] * len(pairs)
    best = [None]

    def connected_cover() -> bool:
        parent = list(range(u.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (a, b), k in zip(pairs, mult):
            if k:
                parent[find(a)] = find(b)
        r = find(root)
        return all(find(v) == r for v in range(u.n) if degree[v] or v in waypoints)

    def rec(i: int, cost: int) -> None:
        if best[0] is not None and cost >= best[0]:
            return
        if i == len(pairs):
            if connected_cover():
                best[0] = cost
            return
        a, b = pairs[i]
        for k in range(copies[i] + 1):
            degree[a] += k
            degree[b] += k
            mult[i] = k
            ok = True
            for v in finished_at[i]:
                if degree[v] % 2 or (degree[v] == 0 and v in waypoints and v != root):
                    ok = False
                    break
            if ok:
                rec(i + 1, cost + k * weights[i])
            degree[a] -= k
            degree[b] -= k
        mult[i] = 0

    rec(0, 0)
    return best[0]


def walk_search_min_cost(inst: Instance, max_states: int = MAX_WALK_STATES) -> int | None:
    """Cheapest s-t walk visiting all waypoints within capacities, by Dijkstra
    over ``(vertex, usage vector, visited set)``. Meant for tiny instances."""
    wp = sorted(inst.waypoints)
    bit = {w: 1 << i for i, w in enumerate(wp)}
    full = (1 << len(wp)) - 1
    shifts, widths = [], []
    offset = 0
    for e in inst.edges:
        width = e.capacity.bit_length()
        shifts.append(offset)
        widths.append(width)
        offset += width
    adj = defaultdict(list)
    for i, e in enumerate(inst.edges):
        adj[e.u].append((e.v, i))
        adj[e.v].append((e.u, i))

    start = (inst.source, 0, bit.get(inst.source, 0))
    dist = {start: 0}
    heap = [(0, start)]
    while heap:
        d, state = heapq.heappop(heap)
        if d > dist[state]:
            continue
        v, usage, seen = state
        if v == inst.target and seen == full:
            return d
        for x, i in adj[v]:
            e = inst.edges[i]
            used = (usage >> shifts[i]) & ((1 << widths[i]) - 1)
            if used >= e.capacity:
                continue
            nxt = (x, usage + (1 << shifts[i]), seen | bit.get(x, 0))
            nd = d + e.weight
            if nd < dist.get(nxt, nd + 1):
                dist[nxt] = nd
                if len(dist) > max_states:
                    raise OracleBudgetExceeded(f"walk search exceeded {max_states} states")
                heapq.heappush(heap, (nd, nxt))
    return None


def verify_walk(walk: Walk, inst: Instance) -> list[str]:
    """Violations of ``walk`` as a solution of ``inst`` (empty list if valid)."""
    problems = []
    vs = list(walk.vertices)
    if not vs:
        return ["walk is empty"]
    for x in vs:
        if not 0 <= x < inst.n:
            return [f"vertex {x} out of range"]
    if vs[0] != inst.source:
        problems.append(f"walk starts at {vs[0]}, not at source {inst.source}")
    if vs[-1] != inst.target:
        problems.append(f"walk ends at {vs[-1]}, not at target {inst.target}")
    visited = set(vs)
    for w in sorted(inst.waypoints - visited):
        problems.append(f"waypoint {w} not visited")

    index = inst.edge_index()
    if walk.edges is None:
        edges = []
        for a, b in zip(vs, vs[1:]):
            i = index.get((min(a, b), max(a, b)))
            if i is None:
                problems.append(f"no edge between {a} and {b}")
                return problems
            edges.append(i)
    else:
        edges = list(walk.edges)
        if len(edges) != len(vs) - 1:
            return problems + ["vertex and edge counts do not alternate"]
        for k, i in enumerate(edges):
            if not 0 <= i < inst.m or inst.edges[i].pair != (min(vs[k], vs[k + 1]), max(vs[k], vs[k + 1])):
                problems.append(f"edge {i} does not join {vs[k]} and {vs[k + 1]}")
                return problems

    counts = defaultdict(int)
    for i in edges:
        counts[i] += 1
    for i in sorted(counts):
        e = inst.edges[i]
        if counts[i] > e.capacity:
            problems.append(f"capacity exceeded on edge {e.u}-{e.v}: {counts[i]} > {e.capacity}")
    cost = sum(inst.edges[i].weight for i in edges)
    if cost != walk.cost:
        problems.append(f"reported cost {walk.cost} but edges sum to {cost}")
    return problems

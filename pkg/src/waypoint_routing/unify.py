"""Reduce an arbitrary instance to a unified one and map walks back.

A unified instance is a connected multigraph whose edges all have capacity
one, with at most two equal-weight parallel copies per vertex pair, and a
single root that is both source and destination and is itself a waypoint.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .instance import Instance, Walk

GADGET_WEIGHT = 1


class Infeasible(Exception):
    """The instance has no solution walk; ``witness`` names the culprit vertex."""

    def __init__(self, reason: str, witness: int | None = None):
        super().__init__(reason)
        self.reason = reason
        self.witness = witness


@dataclass(frozen=True)
class MultiEdge:
    id: int
    u: int
    v: int
    weight: int
    origin: Optional[int]  # index into Instance.edges; None for gadget edges
    copy: int = 1

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


@dataclass(frozen=True)
class Gadget:
    vertex: int
    edges: tuple[int, int]  # multi-edge ids of {v, s} and {v, t}
    source: int  # unified ids
    target: int


@dataclass(frozen=True)
class UnifiedInstance:
    n: int
    edges: tuple[MultiEdge, ...]
    root: int
    waypoints: frozenset[int]
    gadget: Optional[Gadget]
    vertex_map: tuple  # unified id -> original id (None for the gadget vertex)

    @property
    def m(self) -> int:
        return len(self.edges)

    def pairs(self) -> set[tuple[int, int]]:
        """Underlying simple graph edges as ``(min, max)`` pairs."""
        return {(min(e.u, e.v), max(e.u, e.v)) for e in self.edges}

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per vertex, a list of ``(neighbor, multi-edge id)``."""
        adj = [[] for _ in range(self.n)]
        for e in self.edges:
            adj[e.u].append((e.v, e.id))
            adj[e.v].append((e.u, e.id))
        return adj


def component_of(n: int, edges, start: int) -> set[int]:
    adj = [[] for _ in range(n)]
    for e in edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def unify(inst: Instance) -> UnifiedInstance:
    """Build the unified instance; raise :class:`Infeasible` if a terminal or
    waypoint lies outside the source's component."""
    comp = component_of(inst.n, inst.edges, inst.source)
    if inst.target not in comp:
        raise Infeasible("target unreachable", inst.target)
    for w in sorted(inst.waypoints):
        if w not in comp:
            raise Infeasible("waypoint unreachable", w)

    keep = sorted(comp)
    relabel = {x: i for i, x in enumerate(keep)}
    vertex_map: list = list(keep)
    edges: list[MultiEdge] = []
    for idx, e in enumerate(inst.edges):
        if e.u not in relabel:
            continue
        for copy in range(1, min(e.capacity, 2) + 1):
            edges.append(MultiEdge(len(edges), relabel[e.u], relabel[e.v], e.weight, idx, copy))

    s, t = relabel[inst.source], relabel[inst.target]
    waypoints = {relabel[w] for w in inst.waypoints}
    gadget = None
    if s != t:
        root = len(keep)
        vertex_map.append(None)
        a = MultiEdge(len(edges), root, s, GADGET_WEIGHT, None)
        b = MultiEdge(len(edges) + 1, root, t, GADGET_WEIGHT, None)
        edges += [a, b]
        gadget = Gadget(root, (a.id, b.id), s, t)
        # s and t are on every gadget-closed walk anyway; listing them keeps
        # the empty walk at the gadget vertex from counting as a solution
        waypoints |= {s, t}
    else:
        root = s
    waypoints.add(root)
    return UnifiedInstance(len(vertex_map), tuple(edges), root, frozenset(waypoints),
                           gadget, tuple(vertex_map))


class MalformedWalk(ValueError):
    pass


def check_unified_walk(vertices, edges, u: UnifiedInstance) -> None:
    """Raise :class:`MalformedWalk` unless this is a closed trail at the root."""
    if not vertices or len(vertices) != len(edges) + 1:
        raise MalformedWalk("walk must alternate vertices and edges")
    if vertices[0] != u.root or vertices[-1] != u.root:
        raise MalformedWalk("walk is not closed at the root")
    if len(set(edges)) != len(edges):
        raise MalformedWalk("multi-edge used more than once")
    for i, eid in enumerate(edges):
        if not 0 <= eid < u.m:
            raise MalformedWalk(f"unknown multi-edge id {eid}")
        e = u.edges[eid]
        if {vertices[i], vertices[i + 1]} != {e.u, e.v}:
            raise MalformedWalk(f"edge {eid} does not join {vertices[i]} and {vertices[i + 1]}")


def lift_walk(walk: Walk, u: UnifiedInstance, inst: Instance) -> Walk:
    """Map a closed unified trail back to an s-t walk of the original instance.

    The result uses original vertex ids and edge indices; parallel copies
    become repeated traversals of the same original edge.
    """
    vertices, edges = list(walk.vertices), list(walk.edges or ())
    check_unified_walk(vertices, edges, u)
    if u.gadget is not None:
        if not edges:
            raise MalformedWalk("gadget instance needs a nonempty walk")
        g = u.gadget
        if {edges[0], edges[-1]} != set(g.edges):
            raise MalformedWalk("walk must leave and re-enter the gadget exactly once")
        vertices, edges = vertices[1:-1], edges[1:-1]
        if vertices[0] != g.source:
            vertices.reverse()
            edges.reverse()
    orig_vertices = [u.vertex_map[x] for x in vertices]
    orig_edges = [u.edges[eid].origin for eid in edges]
    cost = sum(inst.edges[i].weight for i in orig_edges)
    return Walk(orig_vertices, orig_edges, cost)

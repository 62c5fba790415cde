"""Tree decompositions: PACE ``.td`` input, min-fill heuristic, validation,
and conversion to nice decompositions with the root vertex in every bag."""

from __future__ import annotations

import heapq
import io
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO

from .partitions import W_MAX


class DecompositionError(ValueError):
    pass


class BagTooLarge(DecompositionError):
    pass


@dataclass
class TreeDecomposition:
    bags: dict[int, frozenset[int]]
    tree_edges: list[tuple[int, int]] = field(default_factory=list)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def add_to_all(self, v: int) -> "TreeDecomposition":
        return TreeDecomposition({i: b | {v} for i, b in self.bags.items()}, list(self.tree_edges))

    def relabel(self, mapping: dict[int, int]) -> "TreeDecomposition":
        """Rename vertices via ``mapping``; vertices missing from it are dropped."""
        bags = {i: frozenset(mapping[x] for x in b if x in mapping) for i, b in self.bags.items()}
        return TreeDecomposition(bags, list(self.tree_edges))


def _graph_of(graph) -> tuple[int, set[tuple[int, int]]]:
    """(n, simple edge pairs) for an Instance, UnifiedInstance or (n, pairs)."""
    if isinstance(graph, tuple):
        n, pairs = graph
        return n, {(min(a, b), max(a, b)) for a, b in pairs}
    return graph.n, {(min(e.u, e.v), max(e.u, e.v)) for e in graph.edges}


def validate_td(td: TreeDecomposition, graph) -> list[str]:
    """Violations of the decomposition properties, numbered 1-3, plus tree shape."""
    n, pairs = _graph_of(graph)
    problems = []
    nodes = set(td.bags)
    if not nodes:
        return ["decomposition has no bags"]
    for i, b in td.bags.items():
        bad = sorted(x for x in b if not 0 <= x < n)
        if bad:
            problems.append(f"bag {i} contains unknown vertices {bad}")

    adj: dict[int, list[int]] = {i: [] for i in nodes}
    tree_ok = True
    for a, b in td.tree_edges:
        if a not in adj or b not in adj or a == b:
            problems.append(f"tree edge {a}-{b} refers to unknown bag")
            tree_ok = False
            continue
        adj[a].append(b)
        adj[b].append(a)
    if tree_ok:
        start = next(iter(nodes))
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != len(nodes):
            problems.append("tree is not connected")
            tree_ok = False
        elif len(td.tree_edges) != len(nodes) - 1:
            problems.append("tree has a cycle")
            tree_ok = False

    covered = set().union(*td.bags.values())
    missing = sorted(set(range(n)) - covered)
    if missing:
        problems.append(f"property 1 violated: vertices {missing} in no bag")
    for u, v in sorted(pairs):
        if not any(u in b and v in b for b in td.bags.values()):
            problems.append(f"property 2 violated: edge {u}-{v} in no bag")
    if tree_ok:
        for v in sorted(covered):
            holders = {i for i, b in td.bags.items() if v in b}
            start = next(iter(holders))
            seen = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in holders and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if seen != holders:
                problems.append(f"property 3 violated: bags holding vertex {v} are not connected")
    return problems


def read_td(source: str | TextIO, graph=None) -> TreeDecomposition:
    """Parse a PACE-style ``.td`` file (1-indexed bags and vertices).

    The header may be ``s td <bags> <maxbag> <n>`` or ``s <bags> <maxbag> <n>``;
    ``c`` lines are comments. If ``graph`` is given the result is validated
    against it and a :class:`DecompositionError` lists any violations.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    header = None
    bags: dict[int, frozenset[int]] = {}
    tree_edges = []
    for lineno, raw in enumerate(source, start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        try:
            if tokens[0] == "s":
                nums = [int(x) for x in tokens[1:] if x != "td"]
                if header is not None or len(nums) != 3:
                    raise DecompositionError(f"line {lineno}: bad header")
                header = nums
            elif tokens[0] == "b":
                bid, *vs = (int(x) for x in tokens[1:])
                if bid in bags:
                    raise DecompositionError(f"line {lineno}: duplicate bag {bid}")
                if any(v < 1 for v in vs):
                    raise DecompositionError(f"line {lineno}: vertex ids are 1-indexed")
                bags[bid] = frozenset(v - 1 for v in vs)
            else:
                a, b = (int(x) for x in tokens)
                tree_edges.append((a, b))
        except ValueError as exc:
            if isinstance(exc, DecompositionError):
                raise
            raise DecompositionError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
    if header is None:
        raise DecompositionError("missing 's' header line")
    if len(bags) != header[0]:
        raise DecompositionError(f"header declares {header[0]} bags, found {len(bags)}")
    td = TreeDecomposition(bags, tree_edges)
    if graph is not None:
        problems = validate_td(td, graph)
        if problems:
            raise DecompositionError("; ".join(problems))
    return td


def write_td(td: TreeDecomposition, n: int) -> str:
    ids = sorted(td.bags)
    lines = [f"s td {len(ids)} {td.width + 1} {n}"]
    lines += [" ".join(["b", str(i), *(str(v + 1) for v in sorted(td.bags[i]))]) for i in ids]
    lines += [f"{a} {b}" for a, b in td.tree_edges]
    return "\n".join(lines) + "\n"


def min_fill_order(n: int, pairs: Iterable[tuple[int, int]]) -> tuple[list[int], list[set[int]]]:
    """Min-fill elimination order, ties by degree then id.

    Returns the order and, per eliminated vertex, its neighbourhood at the time
    of elimination.
    """
    adj = [set() for _ in range(n)]
    for a, b in pairs:
        adj[a].add(b)
        adj[b].add(a)

    def fill(v):
        nb = list(adj[v])
        missing = 0
        for i, x in enumerate(nb):
            ax = adj[x]
            for y in nb[i + 1:]:
                if y not in ax:
                    missing += 1
        return missing

    stamp = [0] * n
    heap = [(fill(v), len(adj[v]), v, 0) for v in range(n)]
    heapq.heapify(heap)
    eliminated = [False] * n
    order, neighbourhoods = [], [None] * n
    while heap:
        _, _, v, st = heapq.heappop(heap)
        if eliminated[v] or st != stamp[v]:
            continue
        eliminated[v] = True
        nb = adj[v]
        order.append(v)
        neighbourhoods[v] = set(nb)
        nbl = list(nb)
        for i, x in enumerate(nbl):
            adj[x].discard(v)
            for y in nbl[i + 1:]:
                if y not in adj[x]:
                    adj[x].add(y)
                    adj[y].add(x)
        touched = set(nb)
        for x in nb:
            touched |= adj[x]
        for x in touched:
            stamp[x] += 1
            heapq.heappush(heap, (fill(x), len(adj[x]), x, stamp[x]))
        adj[v] = set()
    return order, neighbourhoods


def heuristic_decompose(graph) -> TreeDecomposition:
    """Tree decomposition from a min-fill elimination ordering."""
    n, pairs = _graph_of(graph)
    order, nbhd = min_fill_order(n, pairs)
    position = {v: i for i, v in enumerate(order)}
    bags = {}
    tree_edges = []
    for i, v in enumerate(order):
        bags[i] = frozenset(nbhd[v] | {v})
        if nbhd[v]:
            parent = min(position[x] for x in nbhd[v])
            tree_edges.append((i, parent))
    # a disconnected graph yields a forest; hang extra roots off the last bag
    roots = [i for i, v in enumerate(order) if not nbhd[v]]
    for r in roots[:-1]:
        tree_edges.append((r, roots[-1]))
    return TreeDecomposition(bags, tree_edges)


# ---------------------------------------------------------------------------
# nice decompositions

LEAF = "leaf"
INTRODUCE_VERTEX = "introduce_vertex"
INTRODUCE_EDGE = "introduce_edge"
FORGET = "forget"
JOIN = "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: Optional[int] = None  # introduced or forgotten vertex
    edge: Optional[int] = None  # introduced multi-edge id


@dataclass
class NiceDecomposition:
    nodes: list[NiceNode]  # children precede parents
    root: int
    root_vertex: int

    @property
    def width(self) -> int:
        return max(len(x.bag) for x in self.nodes) - 1


def make_nice(td: TreeDecomposition, u, *, max_bag: int = W_MAX) -> NiceDecomposition:
    """Nice decomposition of the unified instance ``u`` built from ``td``.

    The root vertex joins every bag, leaves and the root hold only it, and each
    multi-edge is introduced once, right above the introduce node of whichever
    endpoint arrives second (parallel copies in edge-id order).
    """
    r = u.root
    bags = {i: b | {r} for i, b in td.bags.items()}
    biggest = max(len(b) for b in bags.values())
    if biggest > max_bag:
        raise BagTooLarge(f"bag of size {biggest} exceeds the limit of {max_bag}")

    incident: list[list[tuple[int, int]]] = [[] for _ in range(u.n)]
    for e in u.edges:
        incident[e.u].append((e.id, e.v))
        incident[e.v].append((e.id, e.u))
    for lst in incident:
        lst.sort()
    introduced = [False] * u.m

    nodes: list[NiceNode] = []

    def add(node: NiceNode) -> int:
        nodes.append(node)
        return len(nodes) - 1

    def transition(top: int, cur: frozenset, goal: frozenset) -> int:
        for v in sorted(cur - goal):
            cur = cur - {v}
            top = add(NiceNode(FORGET, cur, (top,), vertex=v))
        for v in sorted(goal - cur):
            cur = cur | {v}
            top = add(NiceNode(INTRODUCE_VERTEX, cur, (top,), vertex=v))
            for eid, other in incident[v]:
                if other in cur and not introduced[eid]:
                    introduced[eid] = True
                    top = add(NiceNode(INTRODUCE_EDGE, cur, (top,), edge=eid))
        return top

    ids = sorted(bags)
    adj: dict[int, list[int]] = {i: [] for i in ids}
    for a, b in td.tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    troot = ids[0]
    parent = {troot: None}
    order = []
    stack = [troot]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in sorted(adj[x], reverse=True):
            if y not in parent:
                parent[y] = x
                stack.append(y)
    children: dict[int, list[int]] = {i: [] for i in ids}
    for x in order[1:]:
        children[parent[x]].append(x)

    leaf_bag = frozenset([r])
    top_of: dict[int, int] = {}
    for x in reversed(order):
        goal = bags[x]
        kids = sorted(children[x])
        if not kids:
            tops = [transition(add(NiceNode(LEAF, leaf_bag)), leaf_bag, goal)]
        else:
            tops = [transition(top_of.pop(k), bags[k], goal) for k in kids]
        acc = tops[0]
        for t in tops[1:]:
            acc = add(NiceNode(JOIN, goal, (acc, t)))
        top_of[x] = acc
    root = transition(top_of.pop(troot), bags[troot], leaf_bag)
    if not all(introduced):
        missing = [i for i, f in enumerate(introduced) if not f]
        raise DecompositionError(f"decomposition does not cover multi-edges {missing}")
    return NiceDecomposition(nodes, root, r)


def validate_nice(nd: NiceDecomposition, u) -> list[str]:
    """Check the structural invariants of a nice decomposition of ``u``."""
    problems = []
    r = nd.root_vertex
    seen_edges: dict[int, int] = {}
    parents = [0] * len(nd.nodes)
    for i, x in enumerate(nd.nodes):
        if r not in x.bag:
            problems.append(f"node {i}: root vertex missing from bag")
        for c in x.children:
            if c >= i:
                problems.append(f"node {i}: child {c} not before parent")
                continue
            parents[c] += 1
        cb = [nd.nodes[c].bag for c in x.children if c < i]
        if x.kind == LEAF:
            if x.children or x.bag != {r}:
                problems.append(f"node {i}: bad leaf")
        elif x.kind == INTRODUCE_VERTEX:
            if len(cb) != 1 or x.vertex in cb[0] or x.bag != cb[0] | {x.vertex}:
                problems.append(f"node {i}: bad introduce-vertex")
        elif x.kind == FORGET:
            if len(cb) != 1 or x.vertex not in cb[0] or x.bag != cb[0] - {x.vertex}:
                problems.append(f"node {i}: bad forget")
        elif x.kind == INTRODUCE_EDGE:
            e = u.edges[x.edge]
            if len(cb) != 1 or x.bag != cb[0] or e.u not in x.bag or e.v not in x.bag:
                problems.append(f"node {i}: bad introduce-edge")
            seen_edges[x.edge] = seen_edges.get(x.edge, 0) + 1
        elif x.kind == JOIN:
            if len(cb) != 2 or cb[0] != x.bag or cb[1] != x.bag:
                problems.append(f"node {i}: bad join")
        else:
            problems.append(f"node {i}: unknown kind {x.kind}")
    if nd.nodes[nd.root].bag != {r}:
        problems.append("root bag is not the root vertex alone")
    if any(p > 1 for p in parents) or parents[nd.root] != 0:
        problems.append("nodes do not form a tree")
    if sum(1 for p in parents if p == 0) != 1:
        problems.append("more than one parentless node")
    for e in u.edges:
        if seen_edges.get(e.id, 0) != 1:
            problems.append(f"multi-edge {e.id} introduced {seen_edges.get(e.id, 0)} times")
    return problems

"""Dynamic program over a nice tree decomposition of a unified instance.

For each node the table maps a presignature ``(X, L)`` (vertices of the bag
used by the partial solution, and those of odd degree) to a row: a dict from
partition of ``X`` to ``(weight, back)``. ``back`` names the child entry (or
entries) that produced the weight so that the chosen edges can be recovered
without a second pass. Only nonempty rows are stored.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from . import decomposition as dec
from .instance import Walk
from .partitions import (
    W_MAX,
    checked_add,
    insert_singletons,
    join_blocks,
    merge_blocks,
    project_out,
    representative_indices,
)
from .unify import UnifiedInstance


class ReconstructionError(RuntimeError):
    """Back-pointers led to a subgraph that is not a valid solution (a solver bug)."""


class TableBoundExceeded(AssertionError):
    pass


@dataclass
class TableStats:
    max_row_entries: int = 0
    total_entries: int = 0
    peak_node_entries: int = 0
    rows: int = 0

    def record(self, table: dict) -> None:
        node_total = 0
        for row in table.values():
            k = len(row)
            node_total += k
            if k > self.max_row_entries:
                self.max_row_entries = k
        self.rows += len(table)
        self.total_entries += node_total
        self.peak_node_entries = max(self.peak_node_entries, node_total)


@dataclass
class DPResult:
    cost: Optional[int]  # None when infeasible
    tables: Optional[list] = None
    stats: TableStats = field(default_factory=TableStats)

    @property
    def feasible(self) -> bool:
        return self.cost is not None


def _offer(row: dict, p, w: int, back) -> None:
    old = row.get(p)
    if old is None or w < old[0]:
        row[p] = (w, back)


def leaf_table(node: dec.NiceNode) -> dict:
    (s,) = node.bag
    return {(frozenset([s]), frozenset()): {((s,),): (0, None)}}


def introduce_vertex_table(node: dec.NiceNode, child: dict, waypoints) -> dict:
    v = node.vertex
    out = {}
    for (X, L), row in child.items():
        if v not in waypoints:
            out[(X, L)] = {p: (w, (X, L, p)) for p, (w, _) in row.items()}
        out[(X | {v}, L)] = {insert_singletons(p, (v,)): (w, (X, L, p)) for p, (w, _) in row.items()}
    return out


def introduce_edge_table(node: dec.NiceNode, child: dict, u: UnifiedInstance) -> dict:
    e = u.edges[node.edge]
    a, b, we = e.u, e.v, e.weight
    ends = frozenset((a, b))
    out = {key: {p: (w, (*key, p, False)) for p, (w, _) in row.items()} for key, row in child.items()}
    for (X, L), row in child.items():
        if a in X and b in X:
            target = out.setdefault((X, L ^ ends), {})
            for p, (w, _) in row.items():
                _offer(target, merge_blocks(p, a, b), checked_add(w, we), (X, L, p, True))
    return out


def forget_table(node: dec.NiceNode, child: dict) -> dict:
    v = node.vertex
    gone = (v,)
    out: dict = {}
    for (X, L), row in child.items():
        if v not in X:
            target = out.setdefault((X, L), {})
            for p, (w, _) in row.items():
                _offer(target, p, w, (X, L, p))
        elif v not in L:
            target = None
            for p, (w, _) in row.items():
                q = project_out(p, gone)
                if q is not None:
                    if target is None:
                        target = out.setdefault((X.difference(gone), L), {})
                    _offer(target, q, w, (X, L, p))
    return out


def join_table(node: dec.NiceNode, left: dict, right: dict) -> dict:
    by_x = defaultdict(list)
    for (X, Lz), rz in right.items():
        by_x[X].append((Lz, list(rz.items())))
    out: dict = {}
    for (X, Ly), ry in left.items():
        ry_items = list(ry.items())
        for Lz, rz_items in by_x.get(X, ()):
            target = out.setdefault((X, Ly ^ Lz), {})
            for py, (wy, _) in ry_items:
                for pz, (wz, _) in rz_items:
                    _offer(target, join_blocks(py, pz), checked_add(wy, wz), (X, Ly, py, Lz, pz))
    return out


def trim(table: dict, use_reduce: bool = True) -> dict:
    """Replace oversized rows by representative subsets (at most ``2**(|X|-1)``)."""
    if not use_reduce:
        return table
    for key, row in table.items():
        limit = 1 << (len(key[0]) - 1)
        if len(row) > limit:
            parts = list(row)
            keep = representative_indices(parts, [row[p][0] for p in parts])
            table[key] = {parts[i]: row[parts[i]] for i in keep}
            if len(keep) > limit:
                raise TableBoundExceeded(f"row of {len(keep)} entries over {limit}")
    return table


def solve(u: UnifiedInstance, nd: dec.NiceDecomposition, *, use_reduce: bool = True,
          keep_tables: bool = True) -> DPResult:
    """Run the DP bottom-up and read the optimum off the root.

    With ``keep_tables=False`` child tables are freed as soon as their parent
    is done, and :func:`reconstruct` is unavailable.
    """
    biggest = max(len(x.bag) for x in nd.nodes)
    if biggest > W_MAX:
        raise dec.BagTooLarge(f"bag of size {biggest} exceeds the limit of {W_MAX}")
    waypoints = u.waypoints
    tables: list = [None] * len(nd.nodes)
    stats = TableStats()
    for i, node in enumerate(nd.nodes):
        kind = node.kind
        if kind == dec.LEAF:
            table = leaf_table(node)
        elif kind == dec.INTRODUCE_VERTEX:
            table = introduce_vertex_table(node, tables[node.children[0]], waypoints)
        elif kind == dec.INTRODUCE_EDGE:
            table = introduce_edge_table(node, tables[node.children[0]], u)
        elif kind == dec.FORGET:
            table = forget_table(node, tables[node.children[0]])
        elif kind == dec.JOIN:
            table = join_table(node, tables[node.children[0]], tables[node.children[1]])
        else:
            raise ValueError(f"unknown node kind {kind!r}")
        tables[i] = trim(table, use_reduce)
        stats.record(tables[i])
        if not keep_tables:
            for c in node.children:
                tables[c] = None

    r = nd.root_vertex
    row = tables[nd.root].get((frozenset([r]), frozenset()), {})
    entry = row.get(((r,),))
    return DPResult(None if entry is None else entry[0], tables if keep_tables else None, stats)


def collect_edges(result: DPResult, nd: dec.NiceDecomposition) -> list[int]:
    """Multi-edge ids chosen by the optimal root entry, following back-pointers."""
    if result.tables is None:
        raise ValueError("tables were not kept; solve with keep_tables=True")
    if result.cost is None:
        raise ValueError("instance is infeasible")
    r = nd.root_vertex
    taken = []
    stack = [(nd.root, frozenset([r]), frozenset(), ((r,),))]
    while stack:
        i, X, L, p = stack.pop()
        node = nd.nodes[i]
        _, back = result.tables[i][(X, L)][p]
        if node.kind == dec.LEAF:
            continue
        if node.kind == dec.JOIN:
            Xj, Ly, py, Lz, pz = back
            stack.append((node.children[0], Xj, Ly, py))
            stack.append((node.children[1], Xj, Lz, pz))
        elif node.kind == dec.INTRODUCE_EDGE:
            Xc, Lc, pc, took = back
            if took:
                taken.append(node.edge)
            stack.append((node.children[0], Xc, Lc, pc))
        else:
            Xc, Lc, pc = back
            stack.append((node.children[0], Xc, Lc, pc))
    return sorted(taken)


def check_solution_subgraph(edge_ids, u: UnifiedInstance) -> list[str]:
    """Violations of: even degrees, connected with the root, waypoints covered."""
    problems = []
    if len(set(edge_ids)) != len(edge_ids):
        problems.append("multi-edge used twice")
    degree = defaultdict(int)
    adj = defaultdict(list)
    for eid in edge_ids:
        e = u.edges[eid]
        degree[e.u] += 1
        degree[e.v] += 1
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    odd = sorted(v for v, d in degree.items() if d % 2)
    if odd:
        problems.append(f"odd degree at {odd}")
    seen = {u.root}
    stack = [u.root]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if set(degree) - seen:
        problems.append("subgraph is not connected to the root")
    missing = sorted(u.waypoints - seen)
    if missing:
        problems.append(f"waypoints {missing} not covered")
    return problems


def euler_circuit(edge_ids, u: UnifiedInstance, start: int) -> tuple[list[int], list[int]]:
    """Hierholzer's algorithm on the given multi-edges, closed at ``start``."""
    adj = defaultdict(list)
    for eid in sorted(edge_ids):
        e = u.edges[eid]
        adj[e.u].append((e.v, eid))
        adj[e.v].append((e.u, eid))
    used = set()
    ptr = defaultdict(int)
    stack = [(start, None)]
    circuit = []
    while stack:
        v, via = stack[-1]
        lst = adj[v]
        k = ptr[v]
        while k < len(lst) and lst[k][1] in used:
            k += 1
        ptr[v] = k
        if k == len(lst):
            stack.pop()
            circuit.append((v, via))
        else:
            nxt, eid = lst[k]
            used.add(eid)
            stack.append((nxt, eid))
    circuit.reverse()
    return [v for v, _ in circuit], [e for _, e in circuit[1:]]


def reconstruct(result: DPResult, u: UnifiedInstance, nd: dec.NiceDecomposition) -> Walk:
    """Closed walk at the root realising the optimum, in unified ids."""
    taken = collect_edges(result, nd)
    problems = check_solution_subgraph(taken, u)
    weight = sum(u.edges[e].weight for e in taken)
    if weight != result.cost:
        problems.append(f"edge weights sum to {weight}, expected {result.cost}")
    if problems:
        raise ReconstructionError("; ".join(problems))
    vertices, edges = euler_circuit(taken, u, u.root)
    if len(edges) != len(taken):
        raise ReconstructionError("Euler circuit missed edges")
    return Walk(vertices, edges, weight)

"""End-to-end solve: unify, decompose, nicify, run the DP, rebuild the walk."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import dp
from .decomposition import (
    DecompositionError,
    TreeDecomposition,
    heuristic_decompose,
    make_nice,
    validate_td,
)
from .instance import Instance, Walk
from .oracle import verify_walk
from .unify import Infeasible, UnifiedInstance, lift_walk, unify


@dataclass
class RunReport:
    """Summary of one solve, in original-instance terms. JSON-serialisable via
    :meth:`to_dict`; ``cost`` and ``walk`` are null when infeasible."""

    n: int
    m: int
    waypoints: int
    feasible: bool
    cost: Optional[int] = None
    walk: Optional[list[int]] = None
    reason: Optional[str] = None
    width: Optional[int] = None
    unified_n: Optional[int] = None
    unified_m: Optional[int] = None
    timings: dict[str, float] = field(default_factory=dict)
    tables: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(**data)


@dataclass
class Solution:
    """Everything a solve produced; ``report`` is the user-facing part."""

    report: RunReport
    unified: Optional[UnifiedInstance] = None
    decomposition: Optional[TreeDecomposition] = None
    nice: object = None
    result: Optional[dp.DPResult] = None
    unified_walk: Optional[Walk] = None
    walk: Optional[Walk] = None


def decomposition_for_unified(td: TreeDecomposition, inst: Instance, u: UnifiedInstance) -> TreeDecomposition:
    """Carry a decomposition of the original graph over to the unified graph:
    relabel, drop pruned vertices, and add the gadget vertex to every bag."""
    problems = validate_td(td, inst)
    if problems:
        raise DecompositionError("; ".join(problems))
    mapping = {orig: i for i, orig in enumerate(u.vertex_map) if orig is not None}
    out = td.relabel(mapping)
    if u.gadget is not None:
        out = out.add_to_all(u.gadget.vertex)
    return out


def run(inst: Instance, td: TreeDecomposition | None = None, *, walk: bool = True,
        use_reduce: bool = True, keep_tables: bool | None = None) -> Solution:
    """Solve ``inst``. ``td`` decomposes the original graph; when omitted the
    unified graph is decomposed by min-fill."""
    report = RunReport(inst.n, inst.m, len(inst.waypoints), feasible=False)
    sol = Solution(report)
    clock = time.perf_counter()

    def lap(name):
        nonlocal clock
        now = time.perf_counter()
        report.timings[name] = now - clock
        clock = now

    try:
        u = unify(inst)
    except Infeasible as exc:
        report.reason = f"{exc.reason} (vertex {exc.witness})"
        return sol
    lap("unify")
    sol.unified = u
    report.unified_n, report.unified_m = u.n, u.m

    if td is None:
        utd = heuristic_decompose(u)
    else:
        utd = decomposition_for_unified(td, inst, u)
    lap("decompose")
    nice = make_nice(utd, u)
    lap("nicify")
    sol.decomposition, sol.nice = utd, nice
    report.width = nice.width

    keep = walk if keep_tables is None else keep_tables
    result = dp.solve(u, nice, use_reduce=use_reduce, keep_tables=keep)
    lap("solve")
    sol.result = result
    report.tables = {
        "max_row_entries": result.stats.max_row_entries,
        "total_entries": result.stats.total_entries,
        "peak_node_entries": result.stats.peak_node_entries,
    }
    if result.cost is None:
        report.reason = "no walk respects the capacities"
        return sol

    report.feasible = True
    gadget_cost = 0 if u.gadget is None else sum(u.edges[e].weight for e in u.gadget.edges)
    report.cost = result.cost - gadget_cost
    if walk:
        sol.unified_walk = dp.reconstruct(result, u, nice)
        sol.walk = lift_walk(sol.unified_walk, u, inst)
        problems = verify_walk(sol.walk, inst)
        if problems or sol.walk.cost != report.cost:
            raise dp.ReconstructionError("lifted walk failed verification: " + "; ".join(problems))
        report.walk = list(sol.walk.vertices)
        lap("reconstruct")
    return sol

"""Scaling measurements on generated graph families."""

from __future__ import annotations

import gc
import time
from dataclasses import dataclass

from . import dp
from .decomposition import heuristic_decompose, make_nice
from .generate import caterpillar, path_power
from .unify import unify

FAMILIES = ("caterpillar", "pathpower")


@dataclass
class BenchRow:
    family: str
    n: int
    width: int
    runtime: float
    peak_entries: int
    max_row_entries: int


def _solve_once(inst):
    u = unify(inst)
    nd = make_nice(heuristic_decompose(u), u)
    result = dp.solve(u, nd, keep_tables=False)
    return nd.width, result.stats


def measure(inst, repeat: int = 3) -> tuple[float, int, dp.TableStats]:
    """Best-of-``repeat`` wall time of the full pipeline, garbage collector off
    (the same convention as :mod:`timeit`)."""
    best = float("inf")
    width = stats = None
    enabled = gc.isenabled()
    try:
        for _ in range(repeat):
            gc.collect()
            gc.disable()
            t0 = time.perf_counter()
            width, stats = _solve_once(inst)
            best = min(best, time.perf_counter() - t0)
            gc.enable()
    finally:
        if enabled:
            gc.enable()
    return best, width, stats


def run_bench(family: str, sizes, widths=(1,), seed: int = 0, repeat: int = 3) -> list[BenchRow]:
    sizes = list(sizes)
    if not sizes:
        raise ValueError("sizes list is empty")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    rows = []
    for n in sizes:
        if n < 1:
            raise ValueError(f"size must be positive, got {n}")
        for k in (widths if family == "pathpower" else (None,)):
            inst = caterpillar(n, seed) if k is None else path_power(n, k, seed)
            runtime, width, stats = measure(inst, repeat)
            rows.append(BenchRow(family, n, width, runtime, stats.peak_node_entries, stats.max_row_entries))
    return rows


def to_csv(rows: list[BenchRow]) -> str:
    lines = ["family,n,width,runtime,peak_entries,max_row_entries"]
    lines += [f"{r.family},{r.n},{r.width},{r.runtime:.6f},{r.peak_entries},{r.max_row_entries}" for r in rows]
    return "\n".join(lines) + "\n"

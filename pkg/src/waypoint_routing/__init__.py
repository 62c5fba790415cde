"""Waypoint routing on graphs of bounded treewidth.

The solver reduces an instance to a unified multigraph, builds a nice tree
decomposition rooted at the source, and runs a dynamic program whose tables
are sets of weighted connectivity partitions trimmed by rank-based
representative sets.
"""

from .decomposition import TreeDecomposition, heuristic_decompose, make_nice, read_td, validate_td
from .dp import reconstruct, solve
from .instance import EdgeSpec, Instance, Walk, parse_instance, validate, write_instance
from .oracle import brute_force_min_cost, verify_walk, walk_search_min_cost
from .pipeline import RunReport, run
from .unify import Infeasible, UnifiedInstance, lift_walk, unify

__all__ = [
    "EdgeSpec", "Infeasible", "Instance", "RunReport", "TreeDecomposition", "UnifiedInstance",
    "Walk", "WaypointRouter", "brute_force_min_cost", "heuristic_decompose", "lift_walk",
    "make_nice", "parse_instance", "read_td", "reconstruct", "run", "solve", "unify",
    "validate", "validate_td", "verify_walk", "walk_search_min_cost", "write_instance",
]


def __getattr__(name):
    # keeps scikit-learn out of the import path of the CLI
    if name in ("WaypointRouter", "check_instance"):
        from . import estimator
        return getattr(estimator, name)
    raise AttributeError(name)

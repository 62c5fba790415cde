"""Estimator-style front end with scikit-learn parameter handling."""

from __future__ import annotations

import os

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import pipeline
from .decomposition import DecompositionError, TreeDecomposition, read_td, validate_td
from .instance import Instance, parse_instance, validate


def check_instance(X) -> Instance:
    """Coerce ``X`` (an Instance, instance text, or a path) into a valid Instance."""
    if isinstance(X, Instance):
        problems = validate(X)
        if problems:
            raise ValueError("invalid instance: " + "; ".join(problems))
        return X
    if isinstance(X, os.PathLike) or (isinstance(X, str) and "\n" not in X and os.path.exists(X)):
        with open(X) as fh:
            return parse_instance(fh)
    if isinstance(X, str):
        return parse_instance(X)
    raise TypeError(f"expected Instance, instance text or path, got {type(X).__name__}")


def check_decomposition(td, inst: Instance) -> TreeDecomposition:
    """Coerce ``td`` (a TreeDecomposition, .td text, or a path) and validate it
    against the instance graph."""
    if isinstance(td, TreeDecomposition):
        problems = validate_td(td, inst)
        if problems:
            raise DecompositionError("; ".join(problems))
        return td
    if isinstance(td, os.PathLike) or (isinstance(td, str) and "\n" not in td and os.path.exists(td)):
        with open(td) as fh:
            return read_td(fh, inst)
    return read_td(td, inst)


class WaypointRouter(BaseEstimator):
    """Minimum-cost waypoint walk via the treewidth dynamic program.

    Parameters
    ----------
    decomposition : TreeDecomposition, str or None
        Decomposition of the instance graph (object, ``.td`` text or path).
        ``None`` uses the min-fill heuristic on the unified graph.
    use_reduce : bool
        Trim tables to representative sets. Disabling keeps every partition;
        the optimum is unchanged, only slower.
    reconstruct_walk : bool
        Rebuild and verify an optimal walk after solving.

    Attributes
    ----------
    cost_ : int or None
        Optimal walk cost, ``None`` if no walk exists.
    feasible_ : bool
    walk_ : Walk or None
        Optimal walk in original ids (when ``reconstruct_walk``).
    width_ : int or None
        Width of the nice decomposition used.
    report_ : RunReport
    solution_ : Solution
        Intermediate artefacts (unified instance, decompositions, tables).
    """

    def __init__(self, decomposition=None, use_reduce=True, reconstruct_walk=True):
        self.decomposition = decomposition
        self.use_reduce = use_reduce
        self.reconstruct_walk = reconstruct_walk

    def fit(self, X, y=None):
        inst = check_instance(X)
        td = None if self.decomposition is None else check_decomposition(self.decomposition, inst)
        sol = pipeline.run(inst, td, walk=self.reconstruct_walk, use_reduce=self.use_reduce)
        self.instance_ = inst
        self.solution_ = sol
        self.report_ = sol.report
        self.cost_ = sol.report.cost
        self.feasible_ = sol.report.feasible
        self.walk_ = sol.walk
        self.width_ = sol.report.width
        return self

    def predict(self, X):
        """Optimal costs for a sequence of instances (``None`` where infeasible),
        solved with this estimator's parameters. ``decomposition`` is ignored
        here since it belongs to one graph."""
        costs = []
        for item in X:
            inst = check_instance(item)
            costs.append(pipeline.run(inst, walk=False, use_reduce=self.use_reduce).report.cost)
        return costs

    def score(self, X=None, y=None):
        """Negated optimal cost of the fitted instance (higher is better)."""
        check_is_fitted(self, "report_")
        if not self.feasible_:
            return float("-inf")
        return -float(self.cost_)

"""Waypoint routing instances: data model, text format, validation."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, TextIO

MAX_WEIGHT = 2**64 - 1


class InstanceFormatError(ValueError):
    """Raised when instance text cannot be parsed into a valid instance."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class EdgeSpec:
    """Undirected capacitated edge, stored with ``u <= v``."""

    u: int
    v: int
    capacity: int = 1
    weight: int = 1

    def __post_init__(self):
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Instance:
    """A WRP instance on vertices ``0..n-1``.

    Edges are kept sorted by endpoint pair, so edge indices are stable across
    a write/parse round trip. Construction does not validate; call
    :func:`validate` (or use :func:`parse_instance`, which does).
    """

    n: int
    edges: tuple[EdgeSpec, ...]
    source: int
    target: int
    waypoints: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        object.__setattr__(self, "waypoints", frozenset(self.waypoints))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_index(self) -> dict[tuple[int, int], int]:
        """Map each endpoint pair ``(u, v)`` with ``u < v`` to its edge index."""
        return {e.pair: i for i, e in enumerate(self.edges)}


def validate(inst: Instance) -> list[str]:
    """Return a list of human-readable invariant violations (empty if valid)."""
    problems = []
    n = inst.n
    if n < 1:
        problems.append(f"vertex count must be >= 1, got {n}")

    def in_range(x: int) -> bool:
        return 0 <= x < n

    seen = set()
    for e in inst.edges:
        if e.u == e.v:
            problems.append(f"self-loop on vertex {e.u}")
        if not (in_range(e.u) and in_range(e.v)):
            problems.append(f"edge {e.u}-{e.v} endpoint out of range")
        if e.pair in seen:
            problems.append(f"duplicate edge {e.u}-{e.v}")
        seen.add(e.pair)
        if e.capacity < 1:
            problems.append(f"capacity must be >= 1 on edge {e.u}-{e.v}")
        if not 0 <= e.weight <= MAX_WEIGHT:
            problems.append(f"weight out of range on edge {e.u}-{e.v}")
    if not in_range(inst.source):
        problems.append("source out of range")
    if not in_range(inst.target):
        problems.append("target out of range")
    for w in sorted(inst.waypoints):
        if not in_range(w):
            problems.append(f"waypoint {w} out of range")
    return problems


def _ints(tokens: list[str], lineno: int) -> list[int]:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok, 10))
        except ValueError:
            raise InstanceFormatError(f"expected integer, got {tok!r}", lineno) from None
    return out


def parse_instance(source: str | TextIO) -> Instance:
    """Parse the line-oriented ``wrp`` text format.

    Raises :class:`InstanceFormatError` for syntax errors and for instances
    that violate an invariant.
    """
    if isinstance(source, str):
        source = io.StringIO(source)

    header = None
    edges: list[EdgeSpec] = []
    s = t = None
    waypoints: set[int] = set()
    pairs: set[tuple[int, int]] = set()

    for lineno, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, *rest = line.split()
        args = _ints(rest, lineno)
        if header is None:
            if tag != "wrp" or len(args) != 2:
                raise InstanceFormatError("expected header 'wrp <n> <m>'", lineno)
            header = args
            if header[0] < 1 or header[1] < 0:
                raise InstanceFormatError("header counts out of range", lineno)
            continue
        n = header[0]
        if tag == "e":
            if len(args) != 4:
                raise InstanceFormatError("edge line needs 'e <u> <v> <capacity> <weight>'", lineno)
            u, v, cap, w = args
            if u == v:
                raise InstanceFormatError(f"self-loop on vertex {u}", lineno)
            for x in (u, v):
                if not 0 <= x < n:
                    raise InstanceFormatError(f"vertex id {x} out of range", lineno)
            if cap < 1:
                raise InstanceFormatError(f"capacity must be >= 1, got {cap}", lineno)
            if not 0 <= w <= MAX_WEIGHT:
                raise InstanceFormatError(f"weight {w} out of range", lineno)
            edge = EdgeSpec(u, v, cap, w)
            if edge.pair in pairs:
                raise InstanceFormatError(f"duplicate edge {edge.u} {edge.v}", lineno)
            pairs.add(edge.pair)
            edges.append(edge)
        elif tag in ("s", "t"):
            if len(args) != 1:
                raise InstanceFormatError(f"'{tag}' line needs exactly one vertex", lineno)
            if not 0 <= args[0] < n:
                raise InstanceFormatError(f"vertex id {args[0]} out of range", lineno)
            if (s if tag == "s" else t) is not None:
                raise InstanceFormatError(f"repeated '{tag}' line", lineno)
            if tag == "s":
                s = args[0]
            else:
                t = args[0]
        elif tag == "w":
            for x in args:
                if not 0 <= x < n:
                    raise InstanceFormatError(f"waypoint {x} out of range", lineno)
            waypoints.update(args)
        else:
            raise InstanceFormatError(f"unknown line tag {tag!r}", lineno)

    if header is None:
        raise InstanceFormatError("missing 'wrp' header")
    if len(edges) != header[1]:
        raise InstanceFormatError(f"header declares {header[1]} edges, found {len(edges)}")
    if s is None or t is None:
        raise InstanceFormatError("missing 's' or 't' line")
    return Instance(header[0], tuple(edges), s, t, frozenset(waypoints))


def write_instance(inst: Instance, out: TextIO | None = None) -> str:
    """Serialize ``inst`` in canonical form (edges sorted by ``(u, v)``)."""
    lines = [f"wrp {inst.n} {inst.m}"]
    lines += [f"e {e.u} {e.v} {e.capacity} {e.weight}" for e in inst.edges]
    lines.append(f"s {inst.source}")
    lines.append(f"t {inst.target}")
    lines.append(" ".join(["w", *map(str, sorted(inst.waypoints))]))
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write(text)
    return text


def make_instance(n: int, edges: Iterable, source: int, target: int | None = None,
                  waypoints: Iterable[int] = ()) -> Instance:
    """Convenience constructor; ``edges`` items are ``(u, v)`` or ``(u, v, cap, weight)``."""
    specs = []
    for e in edges:
        specs.append(e if isinstance(e, EdgeSpec) else EdgeSpec(*e))
    return Instance(n, tuple(specs), source, source if target is None else target,
                    frozenset(waypoints))


@dataclass(frozen=True)
class Walk:
    """Alternating walk ``v0, e0, v1, ..., vk`` with its total cost.

    Edge entries are edge indices of whichever graph the walk lives in
    (``Instance.edges`` or unified multi-edge ids); ``None`` when only the
    vertex sequence is known.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...] | None
    cost: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if self.edges is not None:
            object.__setattr__(self, "edges", tuple(self.edges))


def write_walk(walk: Walk) -> str:
    """Walk file text: ``cost <c>`` then ``walk <v1> ... <vk>``."""
    return f"cost {walk.cost}\nwalk {' '.join(map(str, walk.vertices))}\n"


def read_walk(source: str | TextIO) -> Walk:
    """Parse a walk file; edges are left implicit (the graph is simple)."""
    if isinstance(source, str):
        source = io.StringIO(source)
    cost = vertices = None
    for lineno, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, *rest = line.split()
        args = _ints(rest, lineno)
        if tag == "cost" and len(args) == 1 and cost is None:
            cost = args[0]
        elif tag == "walk" and args and vertices is None:
            vertices = args
        else:
            raise InstanceFormatError(f"unexpected walk line {line!r}", lineno)
    if cost is None or vertices is None:
        raise InstanceFormatError("walk file needs one 'cost' and one 'walk' line")
    return Walk(vertices, None, cost)

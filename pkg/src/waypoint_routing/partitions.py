"""Weighted partitions over small vertex universes.

A partition is stored canonically as a tuple of blocks, each block a sorted
tuple of vertex ids, blocks ordered by their smallest element. Two equal set
families therefore have identical encodings and can be used as dict keys.
The universe of a partition is the union of its blocks.

A :class:`WeightedPartitionSet` keeps at most one weight per partition (the
minimum), which makes every set rmc-normalized by construction.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .instance import MAX_WEIGHT

Partition = tuple  # tuple[tuple[int, ...], ...]

W_MAX = 32


class WeightOverflowError(OverflowError):
    pass


class UniverseMismatchError(ValueError):
    pass


def checked_add(a: int, b: int) -> int:
    total = a + b
    if total > MAX_WEIGHT:
        raise WeightOverflowError(f"weight {a} + {b} exceeds 64-bit range")
    return total


# ---------------------------------------------------------------------------
# single partitions


def canonicalize(blocks: Iterable[Iterable[int]], universe: Iterable[int] | None = None) -> Partition:
    """Canonical encoding of a block family.

    If ``universe`` is given, the blocks must be nonempty, disjoint and cover
    it exactly; a ``ValueError`` names the first offending element otherwise.
    """
    out = [tuple(sorted(b)) for b in blocks]
    if universe is not None:
        universe = set(universe)
        seen = set()
        for b in out:
            if not b:
                raise ValueError("empty block")
            for x in b:
                if x not in universe:
                    raise ValueError(f"element {x} outside universe")
                if x in seen:
                    raise ValueError(f"element {x} occurs in two blocks")
                seen.add(x)
        if seen != universe:
            raise ValueError(f"elements {sorted(universe - seen)} not covered")
    out.sort()
    return tuple(out)


def from_labels(universe: Iterable[int], labels: Iterable[int]) -> Partition:
    """Build a partition from a block label per universe element."""
    groups: dict[int, list[int]] = {}
    for x, lab in zip(universe, labels):
        groups.setdefault(lab, []).append(x)
    return canonicalize(groups.values())


def block_of(p: Partition) -> dict[int, int]:
    """Element -> block index, blocks numbered by first occurrence in universe order."""
    return {x: i for i, b in enumerate(p) for x in b}


def universe_of(p: Partition) -> frozenset[int]:
    return frozenset(x for b in p for x in b)


def singletons(universe: Iterable[int]) -> Partition:
    return tuple((x,) for x in sorted(universe))


def whole(universe: Iterable[int]) -> Partition:
    u = tuple(sorted(universe))
    return (u,) if u else ()


def with_block(universe: Iterable[int], block: Iterable[int]) -> Partition:
    """``U[V]``: singletons everywhere except one block ``V``."""
    block = set(block)
    return canonicalize([block] + [(x,) for x in universe if x not in block])


def restrict(p: Partition, keep: Iterable[int]) -> Partition:
    keep = set(keep)
    return canonicalize(k for k in (tuple(x for x in b if x in keep) for b in p) if k)


def extend(p: Partition, universe: Iterable[int]) -> Partition:
    have = universe_of(p)
    return canonicalize(list(p) + [(x,) for x in universe if x not in have])


def coarsens(p: Partition, q: Partition) -> bool:
    """True iff ``q`` is finer than ``p`` (every block of q inside a block of p)."""
    owner = block_of(p)
    return all(len({owner.get(x, -1 - x) for x in b}) == 1 for b in q)


@lru_cache(maxsize=1 << 17)
def join_blocks(p: Partition, q: Partition) -> Partition:
    """Finest common coarsening of ``p`` and ``q`` after extending both to the
    union of their universes (missing elements become singletons)."""
    parent: dict[int, int] = {}
    for b in p:
        h = b[0]
        for x in b:
            parent[x] = h

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for b in q:
        for x in b:
            parent.setdefault(x, x)
        r = find(b[0])
        for x in b[1:]:
            rx = find(x)
            if rx != r:
                if rx < r:
                    parent[r] = rx
                    r = rx
                else:
                    parent[rx] = r
    groups: dict[int, list[int]] = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)
    return tuple(sorted(tuple(sorted(g)) for g in groups.values()))


def lattice_join(p: Partition, q: Partition) -> Partition:
    """The lattice join of two partitions of the same universe."""
    if universe_of(p) != universe_of(q):
        raise UniverseMismatchError("partitions over different universes")
    return join_blocks(p, q)


def insert_singletons(p: Partition, vs: Iterable[int]) -> Partition:
    return tuple(sorted(p + tuple((v,) for v in vs)))


def merge_blocks(p: Partition, u: int, v: int) -> Partition:
    """Merge the blocks of ``u`` and ``v``, adding either as a singleton if absent."""
    bu = bv = None
    rest = []
    for b in p:
        if u in b:
            bu = b
            if v in b:
                return p
        elif v in b:
            bv = b
        else:
            rest.append(b)
    merged = tuple(sorted((bu or (u,)) + (bv or (v,))))
    rest.append(merged)
    rest.sort()
    return tuple(rest)


def project_out(p: Partition, vs) -> Partition | None:
    """Drop elements ``vs``; None if some dropped element has no block partner
    outside ``vs`` (its component would be lost)."""
    out = []
    changed = False
    for b in p:
        kept = tuple(x for x in b if x not in vs)
        if len(kept) != len(b):
            if not kept:
                return None
            changed = True
        out.append(kept)
    if changed:
        out.sort()
    return tuple(out)


def all_partitions(universe: Iterable[int]) -> Iterator[Partition]:
    """Enumerate every partition of ``universe`` (Bell-number many)."""
    elems = sorted(universe)

    def rec(i, blocks):
        if i == len(elems):
            yield canonicalize(blocks)
            return
        x = elems[i]
        for b in blocks:
            b.append(x)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([x])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


# ---------------------------------------------------------------------------
# sets of weighted partitions


class WeightedPartitionSet:
    """Partitions of a common universe, each with its minimal known weight."""

    __slots__ = ("universe", "entries")

    def __init__(self, universe: Iterable[int], entries: Mapping[Partition, int] | None = None):
        self.universe = frozenset(universe)
        self.entries: dict[Partition, int] = dict(entries or {})

    @classmethod
    def from_pairs(cls, universe, pairs: Iterable[tuple[Partition, int]]) -> "WeightedPartitionSet":
        out = cls(universe)
        for p, w in pairs:
            out.add(p, w)
        return out

    def add(self, p: Partition, w: int) -> None:
        old = self.entries.get(p)
        if old is None or w < old:
            self.entries[p] = w

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.items())

    def __contains__(self, p):
        return p in self.entries

    def __eq__(self, other):
        if not isinstance(other, WeightedPartitionSet):
            return NotImplemented
        return self.universe == other.universe and self.entries == other.entries

    def __repr__(self):
        body = ", ".join(f"{p}: {w}" for p, w in self.entries.items())
        return f"WeightedPartitionSet({sorted(self.universe)}, {{{body}}})"


def rmc(pairs: Iterable[tuple[Partition, int]], universe: Iterable[int] | None = None) -> WeightedPartitionSet:
    """Remove duplicate partitions, keeping the minimal weight of each."""
    pairs = list(pairs)
    if universe is None:
        universe = universe_of(pairs[0][0]) if pairs else ()
    return WeightedPartitionSet.from_pairs(universe, pairs)


def _same_universe(a: WeightedPartitionSet, b: WeightedPartitionSet):
    if a.universe != b.universe:
        raise UniverseMismatchError(f"{sorted(a.universe)} != {sorted(b.universe)}")


def mincup(a: WeightedPartitionSet, b: WeightedPartitionSet) -> WeightedPartitionSet:
    _same_universe(a, b)
    out = WeightedPartitionSet(a.universe, a.entries)
    for p, w in b:
        out.add(p, w)
    return out


def ins(vs: Iterable[int], a: WeightedPartitionSet) -> WeightedPartitionSet:
    vs = sorted(set(vs))
    overlap = a.universe.intersection(vs)
    if overlap:
        raise ValueError(f"inserted elements {sorted(overlap)} already in universe")
    return WeightedPartitionSet(a.universe.union(vs), {insert_singletons(p, vs): w for p, w in a})


def shift(delta: int, a: WeightedPartitionSet) -> WeightedPartitionSet:
    return WeightedPartitionSet(a.universe, {p: checked_add(w, delta) for p, w in a})


def glue(edge: tuple[int, int], a: WeightedPartitionSet) -> WeightedPartitionSet:
    u, v = edge
    out = WeightedPartitionSet(a.universe | {u, v})
    for p, w in a:
        out.add(merge_blocks(p, u, v), w)
    return out


def glue_w(edge: tuple[int, int], a: WeightedPartitionSet, weight: int) -> WeightedPartitionSet:
    return shift(weight, glue(edge, a))


def proj(vs: Iterable[int], a: WeightedPartitionSet) -> WeightedPartitionSet:
    vs = frozenset(vs)
    if not vs <= a.universe:
        raise ValueError(f"projected elements {sorted(vs - a.universe)} not in universe")
    out = WeightedPartitionSet(a.universe - vs)
    for p, w in a:
        q = project_out(p, vs)
        if q is not None:
            out.add(q, w)
    return out


def join(a: WeightedPartitionSet, b: WeightedPartitionSet) -> WeightedPartitionSet:
    out = WeightedPartitionSet(a.universe | b.universe)
    for p, wp in a:
        for q, wq in b:
            out.add(join_blocks(p, q), checked_add(wp, wq))
    return out


def opt(q: Partition, a: WeightedPartitionSet) -> float | int:
    """Cheapest weight in ``a`` whose partition joins with ``q`` to one block."""
    best = float("inf")
    for p, w in a:
        if w < best and len(join_blocks(p, q)) == 1:
            best = w
    return best


# ---------------------------------------------------------------------------
# rank-based reduction


@lru_cache(maxsize=1 << 16)
def cut_row(p: Partition) -> int:
    """Row of the cut matrix for ``p`` as a bit vector.

    Cuts are the bipartitions of the universe with the smallest element pinned
    to the left side, indexed by the bitmask of the other elements that sit on
    the left. Bit ``c`` is set iff every block of ``p`` lies on one side of
    cut ``c``.
    """
    elems = sorted(x for b in p for x in b)
    pos = {x: i for i, x in enumerate(elems[1:])}
    anchor = elems[0]
    left = 0
    others = []
    for b in p:
        mask = 0
        for x in b:
            if x != anchor:
                mask |= 1 << pos[x]
        if anchor in b:
            left = mask
        else:
            others.append(mask)
    cuts = [left]
    for m in others:
        cuts += [c | m for c in cuts]
    row = 0
    for c in cuts:
        row |= 1 << c
    return row


def representative_indices(partitions: list[Partition], weights: list[int]) -> list[int]:
    """Indices of a representative subset, in ascending (weight, partition) order.

    Greedily keeps the lightest entries whose cut-matrix rows are linearly
    independent over GF(2); at most ``2**(|U|-1)`` survive.
    """
    order = sorted(range(len(partitions)), key=lambda i: (weights[i], partitions[i]))
    basis: dict[int, int] = {}
    kept = []
    for i in order:
        vec = cut_row(partitions[i])
        while vec:
            top = vec.bit_length() - 1
            pivot = basis.get(top)
            if pivot is None:
                basis[top] = vec
                kept.append(i)
                break
            vec ^= pivot
    return kept


def reduce(a: WeightedPartitionSet) -> WeightedPartitionSet:
    """Representative subset of ``a`` with at most ``2**(|U|-1)`` entries."""
    if len(a) <= 1:
        return WeightedPartitionSet(a.universe, a.entries)
    parts = list(a.entries)
    weights = [a.entries[p] for p in parts]
    keep = representative_indices(parts, weights)
    return WeightedPartitionSet(a.universe, {parts[i]: weights[i] for i in keep})

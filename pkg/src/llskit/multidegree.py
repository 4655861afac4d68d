"""Multidegrees on sides of nodes, fiber degrees, twisting and sufficiency."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .dual_graph import DualGraph, GraphFamily, split_at_edge
from .errors import InputError, InsufficientFamily, InvariantError

# Exhaustive candidate search is 2**(nodal edges); keep it bounded.
MAX_FAMILY_EDGES = 20


@dataclass(frozen=True)
class Side:
    """One of the two halves of the curve cut open at a node."""

    edge: str
    half: frozenset[str]
    rest: frozenset[str]

    def complement(self) -> "Side":
        return Side(self.edge, self.rest, self.half)

    def contains(self, v: str) -> bool:
        return v in self.half

    def sort_key(self):
        return (self.edge, tuple(sorted(self.half)))

    def __repr__(self):
        return f"Side({self.edge}: {{{','.join(sorted(self.half))}}})"


def sides(g: DualGraph, eid: str) -> tuple[Side, Side]:
    """The canonical side of ``eid`` followed by its complement."""
    a, b = split_at_edge(g, eid)
    return Side(eid, a, b), Side(eid, b, a)


def find_side(g: DualGraph, eid: str, half: Iterable[str]) -> Side:
    half = frozenset(half)
    for s in sides(g, eid):
        if s.half == half:
            return s
    raise InputError(f"{sorted(half)} is not a side of edge {eid!r}")


class Multidegree:
    """Integer degrees on both sides of every node, summing to ``d`` per node.

    Only the canonical side of each edge is stored, so the constraint
    md(Y) + md(Y^c) = d holds by construction.
    """

    __slots__ = ("graph", "d", "_values")

    def __init__(self, graph: DualGraph, d: int, canonical: Mapping[str, int]):
        if not isinstance(d, int) or d <= 0:
            raise InputError(f"total degree must be a positive integer, got {d!r}")
        missing = set(graph.edge_ids) - set(canonical)
        if missing:
            raise InputError(f"multidegree is missing sides for edges {sorted(missing)}")
        extra = set(canonical) - set(graph.edge_ids)
        if extra:
            raise InputError(f"multidegree mentions unknown edges {sorted(extra)}")
        self.graph = graph
        self.d = d
        self._values = {e: int(canonical[e]) for e in graph.edge_ids}

    @classmethod
    def from_sides(cls, graph: DualGraph, d: int, values: Mapping[Side, int]) -> "Multidegree":
        """Build from values given on arbitrary sides; both sides may be given if consistent."""
        canonical: dict[str, int] = {}
        for side, value in values.items():
            first, _ = sides(graph, side.edge)
            if side.half not in (first.half, first.rest):
                raise InputError(f"{side!r} is not a side of edge {side.edge!r}")
            v = value if side.half == first.half else d - value
            if side.edge in canonical and canonical[side.edge] != v:
                raise InvariantError(
                    f"md(Y)+md(Y^c) must equal d={d} at edge {side.edge!r}"
                )
            canonical[side.edge] = v
        return cls(graph, d, canonical)

    def __getitem__(self, side: Side) -> int:
        first, _ = sides(self.graph, side.edge)
        value = self._values[side.edge]
        if side.half == first.half:
            return value
        if side.half == first.rest:
            return self.d - value
        raise InputError(f"{side!r} is not a side of this graph")

    def canonical_values(self) -> dict[str, int]:
        return dict(self._values)

    def value_away_from(self, eid: str, v: str) -> int:
        """md of the side of ``eid`` that does not contain vertex ``v``."""
        first, second = sides(self.graph, eid)
        return self[second] if v in first.half else self[first]

    def key(self):
        return (self.d, tuple(sorted(self._values.items())))

    def __eq__(self, other):
        if not isinstance(other, Multidegree):
            return NotImplemented
        return self.graph == other.graph and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        vals = ", ".join(f"{e}:{v}" for e, v in sorted(self._values.items()))
        return f"Multidegree(d={self.d}, {{{vals}}})"


def fiber_multidegree(g: DualGraph, md: Multidegree) -> dict[str, int]:
    """Degrees on the components of the fiber.

    Each component Y gets d minus the sum, over nodes on Y, of md on the
    side of that node away from Y.
    """
    if md.graph != g:
        raise InputError("multidegree is defined on a different graph")
    return {
        v: md.d - sum(md.value_away_from(e, v) for e in g.incident_edges(v))
        for v in g.vertex_ids
    }


def twist(md: Multidegree, side: Side) -> Multidegree:
    """Move one unit of degree from ``side`` to its complement."""
    values = md.canonical_values()
    first, _ = sides(md.graph, side.edge)
    if side.half == first.half:
        values[side.edge] -= 1
    elif side.half == first.rest:
        values[side.edge] += 1
    else:
        raise InputError(f"{side!r} is not a side of this graph")
    return Multidegree(md.graph, md.d, values)


def is_concentrated(g: DualGraph, md: Multidegree, v: str) -> bool:
    g.vertex(v)
    degrees = fiber_multidegree(g, md)
    return all(deg == 0 for w, deg in degrees.items() if w != v)


def concentration_vertex(g: DualGraph, md: Multidegree) -> str | None:
    """The vertex ``md`` is concentrated on, or None."""
    degrees = fiber_multidegree(g, md)
    nonzero = [w for w, deg in degrees.items() if deg != 0]
    if len(nonzero) == 1:
        return nonzero[0]
    # d > 0, so some vertex always carries degree.
    return None


def pullback_multidegree(fam: GraphFamily, md: Multidegree, base: str) -> Multidegree:
    """Restrict ``md`` to the fiber graph at ``base``."""
    fiber = fam.fiber(base)
    if md.graph != fam.total:
        raise InputError("multidegree is not defined on the family's total graph")
    fgraph, relabel = fam.fiber_graph(base)
    values = {}
    for eid in fiber.nodal_edges:
        first, _ = sides(md.graph, eid)
        image = frozenset(relabel[v] for v in first.half)
        values[eid] = md[first] if image == sides(fgraph, eid)[0].half else md.d - md[first]
    return Multidegree(fgraph, md.d, values)


def is_uniformly_concentrated(fam: GraphFamily, md: Multidegree) -> bool:
    for base in fam.base_points:
        fgraph, _ = fam.fiber_graph(base)
        if concentration_vertex(fgraph, pullback_multidegree(fam, md, base)) is None:
            return False
    return True


def _coverage(fam: GraphFamily, md: Multidegree) -> frozenset[tuple[str, str]] | None:
    """(base, fiber vertex) pairs ``md`` is concentrated on, or None if not uniform."""
    hit = []
    for base in fam.base_points:
        fgraph, _ = fam.fiber_graph(base)
        w = concentration_vertex(fgraph, pullback_multidegree(fam, md, base))
        if w is None:
            return None
        hit.append((base, w))
    return frozenset(hit)


def uniformly_concentrated_multidegrees(fam: GraphFamily, d: int) -> list[Multidegree]:
    """All uniformly concentrated multidegrees of total degree ``d``.

    Edges that are nodal somewhere must carry 0 or d on each side; edges
    nodal in no fiber are unconstrained and are normalized to 0, so the
    list is finite.
    """
    used = sorted(set().union(*(f.nodal_edges for f in fam.fibers)))
    if len(used) > MAX_FAMILY_EDGES:
        raise InputError(
            f"family has {len(used)} nodal edges; exhaustive search is capped at {MAX_FAMILY_EDGES}"
        )
    out = []
    for choice in itertools.product((0, d), repeat=len(used)):
        values = {e: 0 for e in fam.total.edge_ids}
        values.update(zip(used, choice))
        md = Multidegree(fam.total, d, values)
        if _coverage(fam, md) is not None:
            out.append(md)
    return out


def _targets(fam: GraphFamily) -> list[tuple[str, str]]:
    return [(b, v) for b in fam.base_points for v in fam.fiber_graph(b)[0].vertex_ids]


def find_sufficient_collection(fam: GraphFamily, d: int) -> list[Multidegree]:
    """Greedy set cover of every (base point, component) pair.

    Ties go to the lexicographically smallest side-value vector. The
    result is one small collection, not a canonical one.
    """
    candidates = [(md, _coverage(fam, md)) for md in uniformly_concentrated_multidegrees(fam, d)]
    reachable = set().union(*(c for _, c in candidates)) if candidates else set()
    for target in _targets(fam):
        if target not in reachable:
            raise InsufficientFamily(
                f"no uniformly concentrated multidegree is concentrated on {target[1]!r} "
                f"over base point {target[0]!r}",
                target,
            )
    uncovered = set(_targets(fam))
    chosen = []
    while uncovered:
        md, cover = max(candidates, key=lambda c: (len(c[1] & uncovered), _neg_key(c[0])))
        chosen.append(md)
        uncovered -= cover
    return chosen


def _neg_key(md: Multidegree):
    # max() with a reversed lexicographic key picks the smallest vector on ties.
    return tuple(-v for _, v in sorted(md.canonical_values().items()))


def is_sufficient(fam: GraphFamily, collection: Iterable[Multidegree]) -> bool:
    covered = set()
    for md in collection:
        cover = _coverage(fam, md)
        if cover is None:
            return False
        covered |= cover
    return covered >= set(_targets(fam))


def minimal_sufficient_collections(fam: GraphFamily, d: int) -> list[tuple[Multidegree, ...]]:
    """Every sufficient collection of the minimum possible size (exhaustive)."""
    candidates = [(md, _coverage(fam, md)) for md in uniformly_concentrated_multidegrees(fam, d)]
    targets = set(_targets(fam))
    for size in range(1, len(candidates) + 1):
        found = [
            tuple(md for md, _ in combo)
            for combo in itertools.combinations(candidates, size)
            if set().union(*(c for _, c in combo)) >= targets
        ]
        if found:
            return found
    return []

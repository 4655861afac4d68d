"""Dual graphs of totally split compact-type curves.

A vertex is a component (with its geometric genus), an edge is a node.
Compact type means the graph is a tree. Families of curves are modelled
combinatorially by a total graph plus, for every base point, the set of
edges that stay nodal there; the fiber graph is obtained by contracting
everything else.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import AutomorphismError, InputError, NotCompactTypeError


@dataclass(frozen=True, order=True)
class Vertex:
    id: str
    genus: int = 0


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    ends: tuple[str, str]

    def other(self, v: str) -> str:
        a, b = self.ends
        if v == a:
            return b
        if v == b:
            return a
        raise InputError(f"vertex {v!r} is not an end of edge {self.id!r}")


@dataclass(frozen=True, order=True)
class Mark:
    vertex: str
    label: str


@dataclass(frozen=True)
class Validation:
    ok: bool
    diagnostics: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


class DualGraph:
    """Vertex-weighted graph; immutable once built.

    Construction checks ids and incidences only. Whether the graph is a
    tree is reported by :func:`validate_compact_type`, and operations that
    need a tree raise :class:`NotCompactTypeError`.
    """

    __slots__ = ("vertices", "edges", "marks", "_vindex", "_eindex", "_adj")

    def __init__(
        self,
        vertices: Iterable[Vertex | tuple[str, int]],
        edges: Iterable[Edge | tuple[str, tuple[str, str]]] = (),
        marks: Iterable[Mark | tuple[str, str]] = (),
    ):
        vs = [v if isinstance(v, Vertex) else Vertex(str(v[0]), int(v[1])) for v in vertices]
        es = [
            e if isinstance(e, Edge) else Edge(str(e[0]), (str(e[1][0]), str(e[1][1])))
            for e in edges
        ]
        ms = [m if isinstance(m, Mark) else Mark(str(m[0]), str(m[1])) for m in marks]

        vindex: dict[str, Vertex] = {}
        for v in vs:
            if v.id in vindex:
                raise InputError(f"duplicate vertex id {v.id!r}")
            if not isinstance(v.genus, int) or v.genus < 0:
                raise InputError(f"vertex {v.id!r} has invalid genus {v.genus!r}")
            vindex[v.id] = v
        if not vindex:
            raise InputError("a dual graph needs at least one vertex")
        eindex: dict[str, Edge] = {}
        for e in es:
            if e.id in eindex:
                raise InputError(f"duplicate edge id {e.id!r}")
            for end in e.ends:
                if end not in vindex:
                    raise InputError(f"edge {e.id!r} references missing vertex {end!r}")
            eindex[e.id] = e
        for m in ms:
            if m.vertex not in vindex:
                raise InputError(f"mark {m.label!r} references missing vertex {m.vertex!r}")

        adj: dict[str, list[str]] = {v: [] for v in vindex}
        for e in es:
            a, b = e.ends
            adj[a].append(e.id)
            if b != a:
                adj[b].append(e.id)

        self.vertices = tuple(sorted(vs))
        self.edges = tuple(sorted(es))
        self.marks = tuple(sorted(ms))
        self._vindex = vindex
        self._eindex = eindex
        self._adj = {v: tuple(sorted(ids)) for v, ids in adj.items()}

    def __eq__(self, other):
        if not isinstance(other, DualGraph):
            return NotImplemented
        return (self.vertices, self.edges, self.marks) == (other.vertices, other.edges, other.marks)

    def __hash__(self):
        return hash((self.vertices, self.edges, self.marks))

    def __repr__(self):
        return f"DualGraph(vertices={list(self.vertices)}, edges={list(self.edges)}, marks={list(self.marks)})"

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def vertex(self, vid: str) -> Vertex:
        try:
            return self._vindex[vid]
        except KeyError:
            raise InputError(f"unknown vertex id {vid!r}") from None

    def edge(self, eid: str) -> Edge:
        try:
            return self._eindex[eid]
        except KeyError:
            raise InputError(f"unknown edge id {eid!r}") from None

    def genus(self, vid: str) -> int:
        return self.vertex(vid).genus

    def incident_edges(self, vid: str) -> tuple[str, ...]:
        self.vertex(vid)
        return self._adj[vid]

    def degree(self, vid: str) -> int:
        return len(self.incident_edges(vid))

    def neighbors(self, vid: str) -> tuple[str, ...]:
        return tuple(self._eindex[e].other(vid) for e in self.incident_edges(vid))

    def marks_at(self, vid: str) -> tuple[str, ...]:
        return tuple(m.label for m in self.marks if m.vertex == vid)

    def is_tree(self) -> bool:
        return validate_compact_type(self).ok


def _require_tree(g: DualGraph) -> None:
    check = validate_compact_type(g)
    if not check.ok:
        raise NotCompactTypeError("graph is not of compact type: " + "; ".join(check.diagnostics))


def validate_compact_type(g: DualGraph) -> Validation:
    """Report whether ``g`` is a tree, naming cycles and disconnections."""
    parent = {v: v for v in g.vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    diagnostics = []
    for e in g.edges:
        a, b = e.ends
        ra, rb = find(a), find(b)
        if ra == rb:
            if a == b:
                diagnostics.append(f"edge {e.id} is a loop at {a} (non-disconnecting node)")
            else:
                diagnostics.append(
                    f"edge {e.id} closes a cycle through {a} and {b} (non-disconnecting node)"
                )
        else:
            parent[ra] = rb
    components: dict[str, list[str]] = defaultdict(list)
    for v in g.vertex_ids:
        components[find(v)].append(v)
    if len(components) > 1:
        parts = sorted(sorted(c) for c in components.values())
        diagnostics.append(
            "graph is disconnected into components " + " | ".join(",".join(p) for p in parts)
        )
    return Validation(not diagnostics, tuple(diagnostics))


def total_genus(g: DualGraph) -> int:
    """Arithmetic genus of a compact-type curve: the sum of component genera."""
    _require_tree(g)
    return sum(v.genus for v in g.vertices)


def _component_without(g: DualGraph, start: str, removed: str) -> frozenset[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for eid in g.incident_edges(v):
            if eid == removed:
                continue
            w = g.edge(eid).other(v)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def split_at_edge(g: DualGraph, eid: str) -> tuple[frozenset[str], frozenset[str]]:
    """The two vertex sets on either side of edge ``eid``.

    The side containing the lexicographically smaller endpoint comes first.
    """
    e = g.edge(eid)
    _require_tree(g)
    a, b = sorted(e.ends)
    return _component_without(g, a, eid), _component_without(g, b, eid)


def contract_edges(g: DualGraph, eids: Iterable[str]) -> tuple[DualGraph, dict[str, str]]:
    """Contract a set of edges at once.

    Returns the contracted graph and the map from old vertex ids to new
    ones. A merged vertex takes the smallest id among its members and the
    sum of their genera.
    """
    eids = set(eids)
    for eid in eids:
        g.edge(eid)
    parent = {v: v for v in g.vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in sorted(eids):
        a, b = g.edge(eid).ends
        ra, rb = find(a), find(b)
        if ra == rb:
            raise NotCompactTypeError(f"contracting {eid} would create a loop")
        parent[max(ra, rb)] = min(ra, rb)
    groups: dict[str, list[str]] = defaultdict(list)
    for v in g.vertex_ids:
        groups[find(v)].append(v)
    relabel = {}
    vertices = []
    for members in groups.values():
        new_id = min(members)
        for m in members:
            relabel[m] = new_id
        vertices.append(Vertex(new_id, sum(g.genus(m) for m in members)))
    edges = [
        Edge(e.id, (relabel[e.ends[0]], relabel[e.ends[1]])) for e in g.edges if e.id not in eids
    ]
    marks = [Mark(relabel[m.vertex], m.label) for m in g.marks]
    return DualGraph(vertices, edges, marks), relabel


def contract_edge(g: DualGraph, eid: str) -> DualGraph:
    """Smooth the node ``eid``: merge its two endpoints, adding genera."""
    return contract_edges(g, [eid])[0]


@dataclass(frozen=True)
class GraphAutomorphism:
    """Vertex and edge permutations, plus an optional action on mark labels.

    Labels absent from ``labels`` are fixed.
    """

    vertices: Mapping[str, str]
    edges: Mapping[str, str]
    labels: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("vertices", "edges", "labels"):
            object.__setattr__(self, name, dict(getattr(self, name)))

    def __hash__(self):
        return hash(
            (
                tuple(sorted(self.vertices.items())),
                tuple(sorted(self.edges.items())),
                tuple(sorted(self.labels.items())),
            )
        )

    def vertex(self, v: str) -> str:
        return self.vertices.get(v, v)

    def edge(self, e: str) -> str:
        return self.edges.get(e, e)

    def label(self, lab: str) -> str:
        return self.labels.get(lab, lab)

    def compose(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """``self`` after ``other``."""
        vs = set(self.vertices) | set(other.vertices)
        es = set(self.edges) | set(other.edges)
        ls = set(self.labels) | set(other.labels)
        return GraphAutomorphism(
            {v: self.vertex(other.vertex(v)) for v in vs},
            {e: self.edge(other.edge(e)) for e in es},
            {lab: self.label(other.label(lab)) for lab in ls},
        )

    def inverse(self) -> "GraphAutomorphism":
        return GraphAutomorphism(
            {b: a for a, b in self.vertices.items()},
            {b: a for a, b in self.edges.items()},
            {b: a for a, b in self.labels.items()},
        )

    def is_identity(self) -> bool:
        return (
            all(a == b for a, b in self.vertices.items())
            and all(a == b for a, b in self.edges.items())
            and all(a == b for a, b in self.labels.items())
        )

    @classmethod
    def identity(cls, g: DualGraph) -> "GraphAutomorphism":
        return cls({v: v for v in g.vertex_ids}, {e: e for e in g.edge_ids})


def check_automorphism(g: DualGraph, a: GraphAutomorphism) -> None:
    """Raise :class:`AutomorphismError` unless ``a`` is an automorphism of ``g``."""
    vids, eids = set(g.vertex_ids), set(g.edge_ids)
    for kind, perm, ids in (("vertex", a.vertices, vids), ("edge", a.edges, eids)):
        unknown = (set(perm) | set(perm.values())) - ids
        if unknown:
            raise AutomorphismError(f"{kind} permutation mentions unknown ids {sorted(unknown)}")
        if len(set(perm.values())) != len(perm):
            raise AutomorphismError(f"{kind} map is not injective")
        if set(perm) != set(perm.values()):
            raise AutomorphismError(f"{kind} map is not a permutation of its support")
    if len(set(a.labels.values())) != len(a.labels) or set(a.labels) != set(a.labels.values()):
        raise AutomorphismError("label map is not a permutation")
    for v in g.vertices:
        if g.genus(a.vertex(v.id)) != v.genus:
            raise AutomorphismError(
                f"vertex {v.id} (genus {v.genus}) sent to {a.vertex(v.id)} "
                f"(genus {g.genus(a.vertex(v.id))})"
            )
    for e in g.edges:
        image = g.edge(a.edge(e.id))
        if sorted(a.vertex(x) for x in e.ends) != sorted(image.ends):
            raise AutomorphismError(f"edge {e.id} is not sent to an edge with the image endpoints")
    marks = {(m.vertex, m.label) for m in g.marks}
    moved = {(a.vertex(m.vertex), a.label(m.label)) for m in g.marks}
    if marks != moved:
        raise AutomorphismError("marked points are not preserved under the declared label action")


def apply_automorphism(
    g: DualGraph, a: GraphAutomorphism
) -> tuple[DualGraph, dict[str, str]]:
    """Transport ``g`` along ``a``; returns the image graph and the id relabeling."""
    check_automorphism(g, a)
    image = DualGraph(
        [Vertex(a.vertex(v.id), v.genus) for v in g.vertices],
        [Edge(a.edge(e.id), tuple(a.vertex(x) for x in e.ends)) for e in g.edges],
        [Mark(a.vertex(m.vertex), a.label(m.label)) for m in g.marks],
    )
    relabel = {v: a.vertex(v) for v in g.vertex_ids}
    relabel.update({e: a.edge(e) for e in g.edge_ids})
    return image, relabel


@dataclass(frozen=True)
class Fiber:
    base: str
    nodal_edges: frozenset[str]


class GraphFamily:
    """Finite combinatorial proxy for a family of compact-type curves.

    One fiber per base stratum; each fiber lists the edges of the total
    graph that remain nodes there.
    """

    def __init__(self, total: DualGraph, fibers: Iterable[Fiber | tuple[str, Iterable[str]]]):
        _require_tree(total)
        fs = []
        seen = set()
        for f in fibers:
            if not isinstance(f, Fiber):
                f = Fiber(str(f[0]), frozenset(f[1]))
            if f.base in seen:
                raise InputError(f"duplicate base point {f.base!r}")
            seen.add(f.base)
            unknown = set(f.nodal_edges) - set(total.edge_ids)
            if unknown:
                raise InputError(f"fiber {f.base!r} lists unknown edges {sorted(unknown)}")
            fs.append(Fiber(f.base, frozenset(f.nodal_edges)))
        if not fs:
            raise InputError("a family needs at least one base point")
        self.total = total
        self.fibers = tuple(fs)
        self._index = {f.base: f for f in fs}

    @property
    def base_points(self) -> tuple[str, ...]:
        return tuple(f.base for f in self.fibers)

    def fiber(self, base: str) -> Fiber:
        try:
            return self._index[base]
        except KeyError:
            raise InputError(f"unknown base point {base!r}") from None

    def central_fibers(self) -> tuple[str, ...]:
        """Base points where every edge stays nodal (may be empty)."""
        all_edges = set(self.total.edge_ids)
        return tuple(f.base for f in self.fibers if f.nodal_edges == all_edges)

    def fiber_graph(self, base: str) -> tuple[DualGraph, dict[str, str]]:
        f = self.fiber(base)
        smoothed = set(self.total.edge_ids) - f.nodal_edges
        return contract_edges(self.total, smoothed)

"""Eisenbud-Harris limit linear series on compact-type trees.

Supported curves have rational components plus elliptic tails (genus-1
leaves). Every tail carries the forced vanishing sequence
(d-r-1, d-r, ..., d-2, d) at its node. A rational component with
ramification partitions at its special points contributes the degree of
the product of those Schubert classes. Refined types are enumerated by
labelling each rational-rational node with a partition on one side and
its box complement on the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, prod
from typing import Iterable, Mapping, Sequence

from .dual_graph import (
    DualGraph,
    GraphAutomorphism,
    check_automorphism,
    split_at_edge,
    total_genus,
)
from .errors import InputError, InvariantError, UnsupportedConfiguration
from .schubert import (
    ClassCombination,
    Partition,
    box_for,
    brill_noether_rho,
    complement_partition,
    full_box,
    intersection_number,
    partition_to_vanishing,
    partitions_in_box,
    vanishing_to_partition,
)

ASSUMPTIONS = (
    "nodes and marked points on rational components are in general position",
    "Schubert multiplicities equal point counts when the limit series space "
    "has dimension rho and is reduced (automatic for rho = 0)",
)


@dataclass(frozen=True, order=True)
class VanishingSequence:
    values: tuple[int, ...]
    r: int
    d: int

    def __post_init__(self):
        values = tuple(int(x) for x in self.values)
        object.__setattr__(self, "values", values)
        if len(values) != self.r + 1:
            raise InputError(f"vanishing sequence {list(values)} should have r+1={self.r + 1} entries")
        if values[0] < 0 or values[-1] > self.d or any(a >= b for a, b in zip(values, values[1:])):
            raise InputError(
                f"vanishing sequence {list(values)} must satisfy 0 <= a_0 < ... < a_r <= {self.d}"
            )

    def __getitem__(self, j: int) -> int:
        return self.values[j]

    def complement(self) -> "VanishingSequence":
        """The sequence meeting this one with equality at a refined node."""
        return VanishingSequence(
            tuple(self.d - self.values[self.r - j] for j in range(self.r + 1)), self.r, self.d
        )

    def partition(self) -> Partition:
        return vanishing_to_partition(self.values, self.r, self.d)


def _seq(values, r, d) -> VanishingSequence:
    return values if isinstance(values, VanishingSequence) else VanishingSequence(tuple(values), r, d)


def node_slack(a: VanishingSequence, b: VanishingSequence) -> tuple[int, ...]:
    """a_j + b_{r-j} - d for j = 0..r."""
    if (a.r, a.d) != (b.r, b.d):
        raise InputError(f"mismatched sequences: (r,d)=({a.r},{a.d}) vs ({b.r},{b.d})")
    return tuple(a[j] + b[a.r - j] - a.d for j in range(a.r + 1))


def check_compatibility(a: VanishingSequence, b: VanishingSequence) -> bool:
    """The Eisenbud-Harris node inequality a_j + b_{r-j} >= d for every j."""
    return all(s >= 0 for s in node_slack(a, b))


def tail_sequence(r: int, d: int) -> VanishingSequence:
    """Vanishing at the node of an elliptic tail: d-r-1, ..., d-2, d."""
    return VanishingSequence(tuple(range(d - r - 1, d - 1)) + (d,), r, d)


class LimitSeriesType:
    """Vanishing data at every (edge, endpoint) pair, with per-vertex multiplicities."""

    __slots__ = ("graph", "r", "d", "sequences", "multiplicities")

    def __init__(
        self,
        graph: DualGraph,
        r: int,
        d: int,
        sequences: Mapping[tuple[str, str], Sequence[int] | VanishingSequence],
        multiplicities: Mapping[str, int] | None = None,
    ):
        self.graph = graph
        self.r = r
        self.d = d
        self.sequences = {key: _seq(v, r, d) for key, v in sequences.items()}
        for e in graph.edges:
            for v in e.ends:
                if (e.id, v) not in self.sequences:
                    raise InputError(f"missing vanishing sequence at edge {e.id} on {v}")
            a, b = (self.sequences[(e.id, v)] for v in e.ends)
            if not check_compatibility(a, b):
                raise InvariantError(
                    f"edge {e.id}: a_j + a'_(r-j) >= d fails for {list(a.values)} and {list(b.values)}"
                )
        extra = set(self.sequences) - {(e.id, v) for e in graph.edges for v in e.ends}
        if extra:
            raise InputError(f"sequences given at non-incident pairs {sorted(extra)}")
        mult = {v: 1 for v in graph.vertex_ids}
        mult.update(multiplicities or {})
        self.multiplicities = mult

    @property
    def multiplicity(self) -> int:
        return prod(self.multiplicities.values())

    def key(self):
        return tuple(sorted((k, s.values) for k, s in self.sequences.items()))

    def __eq__(self, other):
        if not isinstance(other, LimitSeriesType):
            return NotImplemented
        return (
            self.graph == other.graph
            and (self.r, self.d) == (other.r, other.d)
            and self.key() == other.key()
            and self.multiplicities == other.multiplicities
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        seqs = ", ".join(f"{e}@{v}:{list(s.values)}" for (e, v), s in sorted(self.sequences.items()))
        return f"LimitSeriesType(r={self.r}, d={self.d}, {seqs}, multiplicity={self.multiplicity})"

    def edge_pair(self, eid: str) -> tuple[VanishingSequence, VanishingSequence]:
        a, b = self.graph.edge(eid).ends
        return self.sequences[(eid, a)], self.sequences[(eid, b)]

    def slack(self) -> int:
        return sum(sum(node_slack(*self.edge_pair(e))) for e in self.graph.edge_ids)


def is_refined(t: LimitSeriesType) -> bool:
    """True iff every node inequality is an equality."""
    return all(all(s == 0 for s in node_slack(*t.edge_pair(e))) for e in t.graph.edge_ids)


def expected_dimension(t: LimitSeriesType, g: int | None = None) -> int:
    """rho minus the total slack over all nodes and indices."""
    if g is None:
        g = total_genus(t.graph)
    return brill_noether_rho(g, t.r, t.d) - t.slack()


def _classify(graph: DualGraph, r: int, d: int, require_rho_zero: bool = True):
    g = total_genus(graph)
    box_for(r, d)
    if require_rho_zero and brill_noether_rho(g, r, d) != 0:
        raise UnsupportedConfiguration(
            f"rho(g={g}, r={r}, d={d}) = {brill_noether_rho(g, r, d)}; only rho = 0 is supported"
        )
    tails, rational = [], []
    for v in graph.vertices:
        if v.genus == 0:
            rational.append(v.id)
        elif v.genus == 1 and graph.degree(v.id) == 1:
            tails.append(v.id)
        elif v.genus == 1:
            raise UnsupportedConfiguration(
                f"vertex {v.id} has genus 1 but is not a leaf; only elliptic tails are supported "
                "(the setting with a unique series on each elliptic tail)"
            )
        else:
            raise UnsupportedConfiguration(
                f"vertex {v.id} has genus {v.genus}; components of genus >= 2 are not supported"
            )
    if tails and d - r - 1 < 0:
        raise UnsupportedConfiguration("elliptic tails need d >= r + 1")
    return g, tails, rational


def _interior_edges(graph: DualGraph, rational: Iterable[str]) -> list[str]:
    rat = set(rational)
    return [e.id for e in graph.edges if set(e.ends) <= rat and e.ends[0] != e.ends[1]]


def _fixed_conditions(graph, r, d, tails):
    """Sequences forced by the tails, and the partitions they put on rational vertices."""
    tail = tail_sequence(r, d)
    seqs: dict[tuple[str, str], VanishingSequence] = {}
    conds: dict[str, list[Partition]] = {v: [] for v in graph.vertex_ids}
    tail_set = set(tails)
    for e in graph.edges:
        ends = e.ends
        for t in ends:
            if t in tail_set:
                seqs[(e.id, t)] = tail
        for v in ends:
            if v not in tail_set and any(w in tail_set for w in ends):
                seqs[(e.id, v)] = tail.complement()
                conds[v].append(tail.complement().partition())
    return seqs, conds


def enumerate_refined(
    graph: DualGraph, r: int, d: int, general_position: bool = True
) -> list[LimitSeriesType]:
    """All refined limit series types with nonzero multiplicity, in canonical order."""
    if not general_position:
        raise UnsupportedConfiguration(
            "Schubert multiplicities are only valid for points in general position"
        )
    _, tails, rational = _classify(graph, r, d)
    rows, cols = box_for(r, d)
    seqs, conds = _fixed_conditions(graph, r, d, tails)
    for e in graph.edges:
        if all(v in tails for v in e.ends):
            a, b = seqs[(e.id, e.ends[0])], seqs[(e.id, e.ends[1])]
            if any(node_slack(a, b)):
                return []
    interior = _interior_edges(graph, rational)
    labels = partitions_in_box(rows, cols)
    size_at = {v: sum(p.size for p in conds[v]) for v in rational}
    area = rows * cols
    out = []
    chosen: dict[str, Partition] = {}

    def rec(i):
        if i == len(interior):
            out.append(_build_type(graph, r, d, seqs, conds, chosen, rational))
            return
        eid = interior[i]
        u, w = sorted(graph.edge(eid).ends)
        for lam in labels:
            mu = complement_partition(lam)
            if size_at[u] + lam.size > area or size_at[w] + mu.size > area:
                continue
            chosen[eid] = lam
            size_at[u] += lam.size
            size_at[w] += mu.size
            rec(i + 1)
            size_at[u] -= lam.size
            size_at[w] -= mu.size
            del chosen[eid]

    rec(0)
    return [t for t in out if t is not None]


def _build_type(graph, r, d, seqs, conds, chosen, rational):
    sequences = dict(seqs)
    local = {v: list(conds[v]) for v in rational}
    for eid, lam in chosen.items():
        u, w = sorted(graph.edge(eid).ends)
        mu = complement_partition(lam)
        sequences[(eid, u)] = VanishingSequence(partition_to_vanishing(lam, r), r, d)
        sequences[(eid, w)] = VanishingSequence(partition_to_vanishing(mu, r), r, d)
        local[u].append(lam)
        local[w].append(mu)
    mult = {}
    for v in rational:
        m = intersection_number(local[v], r, d)
        if m == 0:
            return None
        mult[v] = m
    return LimitSeriesType(graph, r, d, sequences, mult)


def count_with_conditions(
    graph: DualGraph, r: int, d: int, conditions: Mapping[str, Iterable[Partition]] | None = None
) -> int:
    """Count refined series with extra ramification imposed at rational vertices.

    Evaluated by the transfer recursion over rational-rational nodes, so
    the enumeration is never materialized. rho is not checked here.
    """
    _, tails, rational = _classify(graph, r, d, require_rho_zero=False)
    rows, cols = box_for(r, d)
    seqs, conds = _fixed_conditions(graph, r, d, tails)
    for v, extra in (conditions or {}).items():
        if v not in rational:
            raise InputError(f"extra conditions must sit on rational vertices, not {v!r}")
        conds[v].extend(extra)
    for e in graph.edges:
        if all(v in tails for v in e.ends):
            if any(node_slack(seqs[(e.id, e.ends[0])], seqs[(e.id, e.ends[1])])):
                return 0
    if not rational:
        return 1
    interior = set(_interior_edges(graph, rational))
    labels = partitions_in_box(rows, cols)
    top = full_box(rows, cols)

    def local_class(v):
        acc = ClassCombination(rows, cols, {(): 1})
        for p in conds[v]:
            acc = acc * ClassCombination.of(p)
        return acc

    def subtree(v, parent_edge):
        acc = local_class(v)
        for eid in graph.incident_edges(v):
            if eid == parent_edge or eid not in interior:
                continue
            child = graph.edge(eid).other(v)
            below = subtree(child, eid)
            transfer = {}
            for alpha in labels:
                n = (below * ClassCombination.of(alpha)).coefficient(top)
                if n:
                    transfer[complement_partition(alpha)] = n
            acc = acc * ClassCombination(rows, cols, transfer)
            if not acc:
                return acc
        return acc

    roots = []
    seen: set[str] = set()
    for v in sorted(rational):
        if v in seen:
            continue
        roots.append(v)
        stack = [v]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(graph.edge(e).other(x) for e in graph.incident_edges(x) if e in interior)
    total = 1
    for root in roots:
        total *= subtree(root, None).coefficient(top)
    return total


def count_refined(graph: DualGraph, r: int, d: int, general_position: bool = True) -> int:
    """Number of limit g^r_d's counted with Schubert multiplicity (rho = 0 only)."""
    if not general_position:
        raise UnsupportedConfiguration(
            "Schubert multiplicities are only valid for points in general position"
        )
    _classify(graph, r, d)
    return count_with_conditions(graph, r, d)


def split_count(graph: DualGraph, r: int, d: int, eid: str) -> int:
    """Count by cutting a rational-rational node and summing over complementary labels."""
    _, tails, rational = _classify(graph, r, d, require_rho_zero=False)
    if eid not in _interior_edges(graph, rational):
        raise InputError(f"edge {eid!r} does not join two rational components")
    left, right = split_at_edge(graph, eid)
    u, w = sorted(graph.edge(eid).ends)
    rows, cols = box_for(r, d)
    left_graph, right_graph = _induced(graph, left), _induced(graph, right)
    total = 0
    for lam in partitions_in_box(rows, cols):
        a = count_with_conditions(left_graph, r, d, {u: [lam]})
        if a:
            total += a * count_with_conditions(right_graph, r, d, {w: [complement_partition(lam)]})
    return total


def _induced(graph: DualGraph, vertices: frozenset[str]) -> DualGraph:
    return DualGraph(
        [v for v in graph.vertices if v.id in vertices],
        [e for e in graph.edges if set(e.ends) <= vertices],
        [m for m in graph.marks if m.vertex in vertices],
    )


def transport(t: LimitSeriesType, a: GraphAutomorphism) -> LimitSeriesType:
    """Move every label of ``t`` along the automorphism ``a``."""
    return LimitSeriesType(
        t.graph,
        t.r,
        t.d,
        {(a.edge(e), a.vertex(v)): s for (e, v), s in t.sequences.items()},
        {a.vertex(v): m for v, m in t.multiplicities.items()},
    )


@dataclass(frozen=True)
class GaloisCount:
    strata: int
    invariant: tuple[LimitSeriesType, ...]
    multiplicities: tuple[int, ...]
    determines_points: bool
    note: str


def galois_invariant_count(
    types: Sequence[LimitSeriesType],
    group: GraphAutomorphism | Iterable[GraphAutomorphism],
) -> GaloisCount:
    """Combinatorial types fixed by every automorphism in ``group``.

    This counts invariant strata. It equals the number of rational points
    only when every invariant stratum has multiplicity 1.
    """
    if isinstance(group, GraphAutomorphism):
        group = [group]
    group = list(group)
    for t in types:
        for a in group:
            check_automorphism(t.graph, a)
    invariant = tuple(t for t in types if all(transport(t, a) == t for a in group))
    mults = tuple(t.multiplicity for t in invariant)
    points = all(m == 1 for m in mults)
    if points:
        note = "every invariant stratum is a single reduced point; the count is a point count"
    else:
        note = (
            "some invariant strata have multiplicity > 1; this counts invariant combinatorial "
            "strata, not rational points (real/arithmetic Schubert input needed)"
        )
    return GaloisCount(len(invariant), invariant, mults, points, note)


@dataclass(frozen=True)
class RealCountReport:
    d: int
    total: int
    cools_coppens: int
    eremenko_gabrielov: int

    def as_dict(self) -> dict[str, int]:
        return {
            "total": self.total,
            "cools_coppens": self.cools_coppens,
            "eremenko_gabrielov": self.eremenko_gabrielov,
        }


def real_count_formulas(d: int) -> RealCountReport:
    """Complex, Cools-Coppens and Eremenko-Gabrielov counts of g^1_d's in genus 2d-2."""
    if d < 2:
        raise InputError("d must be at least 2")
    total = comb(2 * d - 2, d - 1) // d
    cools_coppens = comb(d - 1, -(-(d - 1) // 2))
    eg = comb(d - 1, d // 2) // (d - 1) if d % 2 == 0 else 0
    return RealCountReport(d, total, cools_coppens, eg)


@dataclass(frozen=True)
class SmoothFiberPrediction:
    n: int
    hypotheses: dict = field(default_factory=dict)
    statement: str = ""
    warnings: tuple[str, ...] = ()


def predict_smooth_fiber_count(
    n: int, finite: bool = True, reduced: bool = True, rho_dimensional: bool = True
) -> SmoothFiberPrediction:
    """Restate the nearby-fiber conclusion for ``n`` rational reduced limit series.

    Nothing is checked; the caller certifies the hypotheses.
    """
    if n < 0:
        raise InputError("n must be nonnegative")
    hyps = {"finite": finite, "reduced": reduced, "rho_dimensional": rho_dimensional}
    if n == 0:
        statement = "no rational series on nearby fibers"
    else:
        statement = f"exactly {n} rational linear series on every nearby smooth fiber"
    warnings = () if all(hyps.values()) else (
        "hypotheses unverified: " + ", ".join(k for k, v in hyps.items() if not v),
    )
    return SmoothFiberPrediction(n, hyps, statement, warnings)

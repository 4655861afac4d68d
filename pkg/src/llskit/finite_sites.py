"""Small ready-made finite sites and sheaves on them.

Builders for open-set posets of finite topological spaces, one- and
two-object sites with the trivial topology, and the Galois-shaped site of
G-sets {empty, point, G, G x G}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .descent import (
    Covering,
    FiniteCategory,
    FiniteGroup,
    FiniteSite,
    GSet,
    PiSheafDatum,
    SetSheaf,
    gset_category,
    gset_fiber_product,
    slice_site,
)
from .errors import InputError


def _name(u: frozenset) -> str:
    return "{" + ",".join(sorted(u)) + "}" if u else "{}"


def poset_site(opens: Iterable[Iterable[str]], coverings: str = "all") -> FiniteSite:
    """Open sets ordered by inclusion.

    ``coverings="all"`` declares every family of proper subsets whose union
    is the target; ``"irredundant"`` keeps only families of nonempty opens
    where no member lies in the union of the others; ``"identity"``
    declares none. The empty open is always covered by the empty family
    unless the mode is ``"identity"``.
    """
    opens = sorted({frozenset(u) for u in opens}, key=lambda u: (len(u), sorted(u)))
    names = {u: _name(u) for u in opens}
    arrows = {}
    for u in opens:
        for v in opens:
            if u <= v:
                arrows[f"{names[u]}<{names[v]}" if u != v else f"id_{names[u]}"] = (names[u], names[v])
    by_pair = {st: a for a, st in arrows.items()}
    table = {}
    for u, v, w in itertools.product(opens, repeat=3):
        if u <= v <= w:
            table[(by_pair[(names[v], names[w])], by_pair[(names[u], names[v])])] = by_pair[(names[u], names[w])]
    cat = FiniteCategory([names[u] for u in opens], arrows, table,
                         {names[u]: f"id_{names[u]}" for u in opens})
    covs, fps = [], {}
    if coverings in ("all", "irredundant"):
        for t in opens:
            proper = [u for u in opens if u < t and (u or coverings == "all")]
            for k in range(0 if not t else 1, len(proper) + 1):
                for fam in itertools.combinations(proper, k):
                    if frozenset().union(*fam) != t:
                        continue
                    if coverings == "irredundant" and any(
                        u <= frozenset().union(*(v for v in fam if v is not u)) for u in fam
                    ):
                        continue
                    covs.append(Covering(names[t], tuple(by_pair[(names[u], names[t])] for u in fam)))
    elif coverings != "identity":
        raise InputError(f"unknown covering mode {coverings!r}")
    for t in opens:
        below = [u for u in opens if u <= t]
        for u in below:
            for v in below:
                meet = u & v
                if meet not in names:
                    raise InputError("opens are not closed under intersection")
                fps[(by_pair[(names[u], names[t])], by_pair[(names[v], names[t])])] = (
                    names[meet], by_pair[(names[meet], names[u])], by_pair[(names[meet], names[v])]
                )
    return FiniteSite(cat, covs, fps)


def poset_function_sheaf(site: FiniteSite, values: Sequence[Hashable], points: Mapping[str, frozenset] | None = None) -> SetSheaf:
    """Functions from the points of each open set to ``values``, restricted along inclusions."""
    cat = site.category
    pts = points or {x: _points(x) for x in cat.objects}
    vals = {}
    for x in cat.objects:
        dom = sorted(pts[x])
        vals[x] = [tuple(zip(dom, img)) for img in itertools.product(values, repeat=len(dom))]
    restrict = {}
    for f, (a, b) in cat.arrows.items():
        keep = pts[a]
        restrict[f] = {s: tuple(p for p in s if p[0] in keep) for s in vals[b]}
    return SetSheaf(cat, vals, restrict)


def poset_locally_constant_sheaf(site: FiniteSite, values: Sequence[Hashable]) -> SetSheaf:
    """Functions constant on each connected piece, for spaces given by their opens.

    Built as the sheafification-free subpresheaf of functions constant on
    every minimal nonempty open; on the fixture spaces this is a sheaf.
    """
    cat = site.category
    pts = {x: _points(x) for x in cat.objects}
    minimal = [pts[x] for x in cat.objects if pts[x] and not any(pts[y] and pts[y] < pts[x] for y in cat.objects)]
    full = poset_function_sheaf(site, values)
    vals = {
        x: [s for s in full.values[x] if all(len({v for p, v in s if p in m}) <= 1 for m in minimal)]
        for x in cat.objects
    }
    restrict = {f: {s: full.restrict[f][s] for s in vals[cat.dst(f)]} for f in cat.arrows}
    return SetSheaf(cat, vals, restrict)


def _points(name: str) -> frozenset:
    inner = name[1:-1]
    return frozenset(inner.split(",")) if inner else frozenset()


def monoid_site(elements: Sequence[str], table: Mapping[tuple[str, str], str], unit: str) -> FiniteSite:
    """A one-object category from a monoid, with the trivial topology."""
    arrows = {e: ("*", "*") for e in elements}
    cat = FiniteCategory(["*"], arrows, dict(table), {"*": unit})
    return FiniteSite(cat)


def arrow_site() -> FiniteSite:
    """Two objects and one arrow a -> b, trivial topology."""
    cat = FiniteCategory(["a", "b"], {"f": ("a", "b")})
    return FiniteSite(cat)


def iso_pair_site() -> FiniteSite:
    """Two isomorphic objects a, b; b is covered by the isomorphism a -> b."""
    arrows = {"f": ("a", "b"), "g": ("b", "a")}
    table = {("g", "f"): "id_a", ("f", "g"): "id_b"}
    cat = FiniteCategory(["a", "b"], arrows, table)
    return FiniteSite(cat, [Covering("b", ("f",))], {("f", "f"): ("a", "id_a", "id_a")})


def isolated_site() -> FiniteSite:
    """Two objects with no arrows between them, trivial topology."""
    return FiniteSite(FiniteCategory(["a", "z"], {}))


def datum_from_sheaf(site: FiniteSite, F: SetSheaf, pi: Sequence[str]) -> PiSheafDatum:
    """Pull ``F`` back to the slices over ``pi``; the comparison maps are identities."""
    cat = site.category
    sheaves = {}
    for p in pi:
        sl = slice_site(site, p).category
        vals = {a: F.values[cat.src(a)] for a in sl.objects}
        restrict = {name: F.restrict[name.split("|", 1)[0]] for name in sl.arrows}
        sheaves[p] = SetSheaf(sl, vals, restrict)
    beta = {}
    for p in pi:
        for q in pi:
            for f in cat.hom(p, q):
                beta[f] = {a: {x: x for x in F.values[cat.src(a)]} for a in sheaves[p].values}
    return PiSheafDatum(tuple(pi), sheaves, beta)


def representable_sheaf(site: FiniteSite, x: str) -> SetSheaf:
    """Hom(-, x) with restriction by precomposition."""
    cat = site.category
    vals = {t: cat.hom(t, x) for t in cat.objects}
    restrict = {
        f: {h: cat.compose(h, f) for h in vals[cat.dst(f)]} for f in cat.arrows
    }
    return SetSheaf(cat, vals, restrict)


def constant_point_sheaf(site: FiniteSite) -> SetSheaf:
    cat = site.category
    return SetSheaf(cat, {x: ["*"] for x in cat.objects}, {f: {"*": "*"} for f in cat.arrows})


@dataclass
class GaloisSite:
    """The site of G-sets {0, B, Bp, P}: empty set, point, G and G x G."""

    group: FiniteGroup
    site: FiniteSite
    gsets: dict[str, GSet]
    funcs: dict[str, dict]
    orbit_inclusions: list[str] = field(default_factory=list)


def galois_site(group: FiniteGroup) -> GaloisSite:
    G = group
    els = G.elements
    gsets = {
        "0": GSet((), {}),
        "B": GSet(("pt",), {(g, "pt"): "pt" for g in els}),
        "Bp": GSet(tuple(els), {(g, x): G.mul(g, x) for g in els for x in els}),
        "P": GSet(
            tuple(itertools.product(els, els)),
            {(g, (x, y)): (G.mul(g, x), G.mul(g, y)) for g in els for x in els for y in els},
        ),
    }
    cat, funcs = gset_category(G, gsets)
    (pi,) = cat.hom("Bp", "B")
    # One inclusion Bp -> P per orbit of P.
    incl, seen = [], set()
    for f in cat.hom("Bp", "P"):
        image = frozenset(funcs[f].values())
        if image not in seen:
            seen.add(image)
            incl.append(f)
    covs = [Covering("B", (pi,)), Covering("P", tuple(incl)), Covering("0", ())]
    fps = {}
    for c in covs:
        for f in c.arrows:
            for g in c.arrows:
                fps[(f, g)] = gset_fiber_product(G, gsets, cat, funcs, f, g)
    return GaloisSite(G, FiniteSite(cat, covs, fps), gsets, funcs, incl)


def gset_hom_sheaf(gs: GaloisSite, Y: GSet) -> SetSheaf:
    """Hom_G(-, Y): sections over B are the G-fixed points of Y."""
    cat = gs.site.category
    vals = {}
    for name, X in gs.gsets.items():
        maps = []
        for images in itertools.product(Y.elements, repeat=len(X.elements)):
            m = dict(zip(X.elements, images))
            if all(m[X.action[(g, x)]] == Y.action[(g, m[x])] for g in gs.group.elements for x in X.elements):
                maps.append(images)
        vals[name] = maps
    restrict = {}
    for f, (a, b) in cat.arrows.items():
        src_els = gs.gsets[a].elements
        dst_els = gs.gsets[b].elements
        idx = {y: i for i, y in enumerate(dst_els)}
        restrict[f] = {s: tuple(s[idx[gs.funcs[f][x]]] for x in src_els) for s in vals[b]}
    return SetSheaf(cat, vals, restrict)


def galois_datum(gs: GaloisSite, X: Sequence[Hashable], action: Mapping[tuple, Hashable]) -> PiSheafDatum:
    """Descent datum over Bp from a set ``X`` with a G-action.

    Over a: T -> G the sections are functions from the fiber of a over the
    identity to X; the automorphism of G given by right multiplication by s
    is sent to the map twisting by the action of s.
    """
    G = gs.group
    cat = gs.site.category
    funcs = gs.funcs
    arrows_in = [a for a in cat.arrows if cat.dst(a) == "Bp"]

    def fiber(a):
        return [t for t in gs.gsets[cat.src(a)].elements if funcs[a][t] == G.identity]

    vals = {a: [tuple(zip(fiber(a), img)) for img in itertools.product(X, repeat=len(fiber(a)))] for a in arrows_in}
    restrict = {}
    for a in arrows_in:
        for h in cat.arrows:
            if cat.dst(h) != cat.src(a):
                continue
            ah = cat.compose(a, h)
            restrict[f"{h}|{a}"] = {
                s: tuple((t, dict(s)[funcs[h][t]]) for t in fiber(ah)) for s in vals[a]
            }
    sheaf = SetSheaf(slice_site(gs.site, "Bp").category, vals, restrict)
    beta = {}
    for sigma in cat.hom("Bp", "Bp"):
        s = funcs[sigma][G.identity]  # sigma(g) = g * s
        comps = {}
        for a in arrows_in:
            sa = cat.compose(sigma, a)
            comps[a] = {
                phi: tuple(
                    (t, action[(s, dict(phi)[gs.gsets[cat.src(a)].action[(s, t)]])]) for t in fiber(sa)
                )
                for phi in vals[a]
            }
        beta[sigma] = comps
    return PiSheafDatum(("Bp",), {"Bp": sheaf}, beta)

"""Sheaves of finite sets on finite sites, and descent at desk scale.

A finite site is a finite category with declared coverings and declared
fiber products. Limits are subsets of products; colimits are quotients of
disjoint unions by the generated equivalence relation. Natural
isomorphisms are found by exhaustive search, so every set handled by
:func:`find_natural_isomorphism` is capped at ``MAX_ISO_SET`` elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import (
    CocycleError,
    GroupActionError,
    HypothesisError,
    InputError,
    NotFunctorialError,
    SiteError,
)

MAX_ISO_SET = 8


class FiniteCategory:
    """Objects, arrows and a composition table.

    ``compose[(g, f)]`` is g after f, for f: a -> b and g: b -> c.
    Missing identities are created as ``id_<object>`` and composites with
    identities are filled in. ``check_associativity=False`` skips the cubic
    associativity check for tables derived from an associative composition.
    """

    def __init__(
        self,
        objects: Iterable[str],
        arrows: Mapping[str, tuple[str, str]],
        compose: Mapping[tuple[str, str], str] | None = None,
        identities: Mapping[str, str] | None = None,
        check_associativity: bool = True,
    ):
        self._check_assoc = check_associativity
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise SiteError("duplicate object names")
        self.arrows = {a: (s, t) for a, (s, t) in arrows.items()}
        for a, (s, t) in self.arrows.items():
            if s not in self.objects or t not in self.objects:
                raise SiteError(f"arrow {a} has unknown endpoint")
        ids = dict(identities or {})
        for x in self.objects:
            if x not in ids:
                name = f"id_{x}"
                if name in self.arrows:
                    raise SiteError(f"cannot create identity {name}: name taken")
                ids[x] = name
                self.arrows[name] = (x, x)
            elif self.arrows.get(ids[x]) != (x, x):
                raise SiteError(f"identity of {x} must be an endomorphism of {x}")
        self.identities = ids
        table = dict(compose or {})
        for f, (s, t) in self.arrows.items():
            table.setdefault((ids[t], f), f)
            table.setdefault((f, ids[s]), f)
        self.table = table
        self._out: dict[str, list[str]] = {x: [] for x in self.objects}
        self._hom: dict[tuple[str, str], list[str]] = {}
        for f, (s, t) in sorted(self.arrows.items()):
            self._out[s].append(f)
            self._hom.setdefault((s, t), []).append(f)
        self._validate()

    def _validate(self):
        for (g, f), h in self.table.items():
            if f not in self.arrows or g not in self.arrows or h not in self.arrows:
                raise SiteError(f"composition entry ({g} o {f}) = {h} uses unknown arrows")
            if self.arrows[f][1] != self.arrows[g][0]:
                raise SiteError(f"composition entry ({g} o {f}) is not composable")
            if self.arrows[h] != (self.arrows[f][0], self.arrows[g][1]):
                raise SiteError(f"composite {g} o {f} = {h} has the wrong endpoints")
        for f, (_, b) in self.arrows.items():
            for g in self._out[b]:
                if (g, f) not in self.table:
                    raise SiteError(f"composition table is missing {g} o {f}")
        if not self._check_assoc:
            return
        for f, (_, b) in self.arrows.items():
            for g in self._out[b]:
                gf = self.table[(g, f)]
                for h in self._out[self.arrows[g][1]]:
                    if self.table[(h, gf)] != self.table[(self.table[(h, g)], f)]:
                        raise SiteError(f"composition is not associative at ({h}, {g}, {f})")

    def src(self, f: str) -> str:
        return self.arrows[f][0]

    def dst(self, f: str) -> str:
        return self.arrows[f][1]

    def compose(self, g: str, f: str) -> str:
        try:
            return self.table[(g, f)]
        except KeyError:
            raise SiteError(f"{g} o {f} is not defined") from None

    def hom(self, a: str, b: str) -> list[str]:
        return list(self._hom.get((a, b), []))

    def arrows_from(self, a: str) -> list[str]:
        return list(self._out[a])

    def identity(self, x: str) -> str:
        return self.identities[x]

    def inverse(self, f: str) -> str | None:
        s, t = self.arrows[f]
        for g in self.hom(t, s):
            if self.compose(g, f) == self.identities[s] and self.compose(f, g) == self.identities[t]:
                return g
        return None

    def isomorphism(self, a: str, b: str) -> str | None:
        """Some isomorphism a -> b, or None."""
        for f in self.hom(a, b):
            if self.inverse(f) is not None:
                return f
        return None

    def full_subcategory(self, objects: Iterable[str]) -> "FiniteCategory":
        keep = set(objects)
        arrows = {f: st for f, st in self.arrows.items() if st[0] in keep and st[1] in keep}
        table = {k: v for k, v in self.table.items() if k[0] in arrows and k[1] in arrows}
        ids = {x: self.identities[x] for x in self.objects if x in keep}
        return FiniteCategory([x for x in self.objects if x in keep], arrows, table, ids, check_associativity=False)


@dataclass(frozen=True)
class Covering:
    target: str
    arrows: tuple[str, ...]

    @property
    def name(self) -> str:
        return f"{self.target}<=" + "+".join(self.arrows)


FiberProduct = tuple[str, str, str]


class FiniteSite:
    """A finite category with declared coverings and fiber products.

    Identity coverings are always present. ``fiber_products[(f, g)]`` is
    ``(P, p1, p2)`` with f o p1 = g o p2; the swapped pair and pairs with
    an identity leg are filled in.
    """

    def __init__(
        self,
        category: FiniteCategory,
        coverings: Iterable[Covering | tuple[str, Sequence[str]]] = (),
        fiber_products: Mapping[tuple[str, str], FiberProduct] | None = None,
    ):
        self.category = cat = category
        covs = []
        for c in coverings:
            c = c if isinstance(c, Covering) else Covering(c[0], tuple(c[1]))
            covs.append(Covering(c.target, tuple(c.arrows)))
        for x in cat.objects:
            ident = Covering(x, (cat.identity(x),))
            if ident not in covs:
                covs.insert(0, ident)
        seen = set()
        self.coverings: list[Covering] = []
        for c in covs:
            if c in seen:
                continue
            seen.add(c)
            for f in c.arrows:
                if f not in cat.arrows:
                    raise SiteError(f"covering of {c.target} uses unknown arrow {f}")
                if cat.dst(f) != c.target:
                    raise SiteError(f"covering member {f} does not map to {c.target}")
            self.coverings.append(c)
        fps = {}
        for (f, g), (p, p1, p2) in (fiber_products or {}).items():
            fps[(f, g)] = (p, p1, p2)
            fps.setdefault((g, f), (p, p2, p1))
        for f in cat.arrows:
            t = cat.dst(f)
            s = cat.src(f)
            fps.setdefault((f, cat.identity(t)), (s, cat.identity(s), f))
            fps.setdefault((cat.identity(t), f), (s, f, cat.identity(s)))
        self.fiber_products = fps
        self._validate()

    @property
    def objects(self) -> tuple[str, ...]:
        return self.category.objects

    def coverings_of(self, t: str) -> list[Covering]:
        return [c for c in self.coverings if c.target == t]

    def fiber_product(self, f: str, g: str) -> FiberProduct:
        try:
            return self.fiber_products[(f, g)]
        except KeyError:
            raise SiteError(f"no fiber product declared for ({f}, {g})") from None

    def _validate(self):
        cat = self.category
        for c in self.coverings:
            for f in c.arrows:
                for g in c.arrows:
                    if (f, g) not in self.fiber_products:
                        raise SiteError(f"covering {c.name} needs a declared fiber product of {f} and {g}")
        for (f, g), (p, p1, p2) in self.fiber_products.items():
            if cat.dst(f) != cat.dst(g):
                raise SiteError(f"fiber product legs {f}, {g} have different targets")
            if (cat.arrows.get(p1), cat.arrows.get(p2)) != ((p, cat.src(f)), (p, cat.src(g))):
                raise SiteError(f"fiber product projections of ({f}, {g}) have the wrong endpoints")
            if cat.compose(f, p1) != cat.compose(g, p2):
                raise SiteError(f"fiber product square for ({f}, {g}) does not commute")
            for w in cat.objects:
                pairs = {
                    (u, v)
                    for u in cat.hom(w, cat.src(f))
                    for v in cat.hom(w, cat.src(g))
                    if cat.compose(f, u) == cat.compose(g, v)
                }
                got = [(cat.compose(p1, h), cat.compose(p2, h)) for h in cat.hom(w, p)]
                if sorted(got) != sorted(pairs):
                    raise SiteError(
                        f"declared fiber product {p} of ({f}, {g}) fails the universal property at {w}"
                    )
        for c in self.coverings:
            for u in cat.arrows:
                if cat.dst(u) != c.target or u == cat.identity(c.target):
                    continue
                if not all((f, u) in self.fiber_products for f in c.arrows):
                    continue
                pulled = [self.fiber_products[(f, u)][2] for f in c.arrows]
                if not any(self.refines(d, pulled) for d in self.coverings_of(cat.src(u))):
                    raise SiteError(
                        f"pullback of covering {c.name} along {u} is not refined by a declared covering"
                    )

    def refines(self, cov: Covering, family: Sequence[str]) -> bool:
        """Every member of ``cov`` factors through some member of ``family``."""
        return all(self.factor(f, family) is not None for f in cov.arrows)

    def factor(self, f: str, family: Sequence[str]) -> tuple[int, str] | None:
        """(i, h) with family[i] o h = f, or None."""
        cat = self.category
        for i, m in enumerate(family):
            for h in cat.hom(cat.src(f), cat.src(m)):
                if cat.compose(m, h) == f:
                    return i, h
        return None


class SetSheaf:
    """A presheaf of finite sets: ``values[x]`` and, for f: a -> b, ``restrict[f]``: F(b) -> F(a).

    Identity restrictions may be omitted.
    """

    def __init__(
        self,
        category: FiniteCategory,
        values: Mapping[str, Iterable[Hashable]],
        restrict: Mapping[str, Mapping[Hashable, Hashable]],
    ):
        self.category = category
        self.values = {x: tuple(values[x]) for x in category.objects if x in values}
        missing = set(category.objects) - set(self.values)
        if missing:
            raise InputError(f"presheaf has no value on objects {sorted(missing)}")
        self.restrict = {f: dict(m) for f, m in restrict.items()}
        for x in category.objects:
            self.restrict.setdefault(category.identity(x), {v: v for v in self.values[x]})

    def __call__(self, f: str, x):
        return self.restrict[f][x]

    def __repr__(self):
        return "SetSheaf(" + ", ".join(f"{x}:{len(v)}" for x, v in self.values.items()) + ")"


def check_functorial(F: SetSheaf) -> None:
    cat = F.category
    for f, (a, b) in cat.arrows.items():
        m = F.restrict.get(f)
        if m is None:
            raise NotFunctorialError(f"no restriction map along {f}")
        if set(m) != set(F.values[b]) or not set(m.values()) <= set(F.values[a]):
            raise NotFunctorialError(f"restriction along {f} is not a map F({b}) -> F({a})")
    for x in cat.objects:
        if any(F(cat.identity(x), v) != v for v in F.values[x]):
            raise NotFunctorialError(f"identity of {x} does not act as the identity")
    for (g, f), gf in cat.table.items():
        for v in F.values[cat.dst(g)]:
            if F(gf, v) != F(f, F(g, v)):
                raise NotFunctorialError(f"F({g} o {f}) != F({f}) o F({g})")


def _limit(members: Sequence[str], pair_data, values, res) -> list[tuple]:
    """Compatible families over a covering.

    ``pair_data(i, j)`` gives (P, p1, p2); ``values(obj)`` and ``res(arrow, x)``
    evaluate the presheaf.
    """
    n = len(members)
    out = []
    chosen: list = []
    pairs = {(i, j): pair_data(i, j) for i in range(n) for j in range(i + 1)}

    def rec(i):
        if i == n:
            out.append(tuple(chosen))
            return
        for x in values(members[i]):
            ok = True
            chosen.append(x)
            for j in range(i + 1):
                _, p1, p2 = pairs[(i, j)]
                if res(p1, x) != res(p2, chosen[j]):
                    ok = False
                    break
            if ok:
                rec(i + 1)
            chosen.pop()

    rec(0)
    return out


def covering_limit(site: FiniteSite, F: SetSheaf, cov: Covering) -> list[tuple]:
    cat = site.category
    return _limit(
        [cat.src(f) for f in cov.arrows],
        lambda i, j: site.fiber_product(cov.arrows[i], cov.arrows[j]),
        lambda x: F.values[x],
        F,
    )


@dataclass(frozen=True)
class SheafCheck:
    ok: bool
    covering: Covering | None = None
    kind: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def check_sheaf(site: FiniteSite, F: SetSheaf) -> SheafCheck:
    """Check the sheaf axiom on every declared covering.

    Raises :class:`NotFunctorialError` for a non-functorial presheaf;
    otherwise reports the first failing covering with a witness.
    """
    check_functorial(F)
    for cov in site.coverings:
        lim = covering_limit(site, F, cov)
        image: dict[tuple, Hashable] = {}
        for x in F.values[cov.target]:
            fam = tuple(F(f, x) for f in cov.arrows)
            if fam in image:
                return SheafCheck(False, cov, "non-injective", (image[fam], x))
            image[fam] = x
        for fam in lim:
            if fam not in image:
                return SheafCheck(False, cov, "non-surjective", fam)
    return SheafCheck(True)


def find_natural_isomorphism(F: SetSheaf, G: SetSheaf) -> dict[str, dict] | None:
    """Components of a natural isomorphism F -> G, or None (exhaustive search)."""
    cat = F.category
    if G.category is not cat and G.category.arrows != cat.arrows:
        raise InputError("presheaves live on different categories")
    for x in cat.objects:
        if len(F.values[x]) != len(G.values[x]):
            return None
        if len(F.values[x]) > MAX_ISO_SET:
            raise InputError(f"set at {x} has {len(F.values[x])} elements; search is capped at {MAX_ISO_SET}")
    order = sorted(cat.objects, key=lambda x: len(F.values[x]))
    eta: dict[str, dict] = {}

    def consistent(x) -> bool:
        for f, (a, b) in cat.arrows.items():
            if a in eta and b in eta and x in (a, b):
                for v in F.values[b]:
                    if eta[a][F(f, v)] != G(f, eta[b][v]):
                        return False
        return True

    def rec(k):
        if k == len(order):
            return True
        x = order[k]
        src = F.values[x]
        for perm in itertools.permutations(G.values[x]):
            eta[x] = dict(zip(src, perm))
            if consistent(x) and rec(k + 1):
                return True
        del eta[x]
        return False

    return dict(eta) if rec(0) else None


def check_prop_hypotheses(site: FiniteSite, sub: Iterable[str]) -> None:
    """Raise :class:`HypothesisError` unless ``sub`` supports restriction/extension.

    Clause 1: every object has a declared covering by objects of ``sub``.
    Clause 2: an object maps to ``sub`` iff it is isomorphic to an object of ``sub``.
    """
    cat = site.category
    sub = set(sub)
    if not sub <= set(cat.objects):
        raise InputError(f"unknown objects {sorted(sub - set(cat.objects))}")
    for t in cat.objects:
        if not any(all(cat.src(f) in sub for f in c.arrows) for c in site.coverings_of(t)):
            raise HypothesisError(f"{t} has no declared covering by objects of the subcategory", 1)
        maps_in = any(cat.hom(t, s) for s in sub)
        iso = any(cat.isomorphism(t, s) for s in sub)
        if maps_in != iso:
            raise HypothesisError(
                f"{t} maps into the subcategory but is not isomorphic to any of its objects", 2
            )


def _fp_within(site: FiniteSite, f: str, g: str, allowed: set[str]) -> FiberProduct | None:
    """The declared fiber product, moved along an isomorphism into ``allowed`` if needed."""
    cat = site.category
    p, p1, p2 = site.fiber_product(f, g)
    if p in allowed:
        return p, p1, p2
    for q in sorted(allowed):
        phi = cat.isomorphism(q, p)
        if phi is not None:
            return q, cat.compose(p1, phi), cat.compose(p2, phi)
    return None


def subsite(site: FiniteSite, sub: Iterable[str]) -> FiniteSite:
    """The full subcategory on ``sub`` with the induced coverings."""
    sub = set(sub)
    check_prop_hypotheses(site, sub)
    cat = site.category.full_subcategory(sub)
    covs = [
        c for c in site.coverings
        if c.target in sub and all(site.category.src(f) in sub for f in c.arrows)
    ]
    fps = {}
    for c in covs:
        for f in c.arrows:
            for g in c.arrows:
                moved = _fp_within(site, f, g, sub)
                if moved is None:
                    raise HypothesisError(f"fiber product of {f}, {g} is not isomorphic to a subcategory object", 2)
                fps[(f, g)] = moved
    for (f, g), (p, p1, p2) in site.fiber_products.items():
        if {site.category.src(f), site.category.src(g), site.category.dst(f), p} <= sub:
            fps.setdefault((f, g), (p, p1, p2))
    return FiniteSite(cat, covs, fps)


def restrict_sheaf(site: FiniteSite, sub: Iterable[str], F: SetSheaf) -> SetSheaf:
    """Restriction of ``F`` to the full subcategory on ``sub``."""
    sub_site = subsite(site, sub)
    cat = sub_site.category
    return SetSheaf(
        cat,
        {x: F.values[x] for x in cat.objects},
        {f: F.restrict[f] for f in cat.arrows},
    )


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb, key=repr)] = min(ra, rb, key=repr)


def _extend(site: FiniteSite, base: SetSheaf, base_objects: set[str]) -> SetSheaf:
    """Extend a presheaf on a full subcategory by colimits of covering limits.

    Objects are added in rounds: an object becomes defined once it has a
    declared covering whose members, and whose pairwise fiber products up
    to isomorphism, are already defined. A section of a new object is the
    class of a compatible family, identified across coverings along
    refinements.
    """
    cat = site.category
    defined = set(base_objects)
    values: dict[str, list] = {x: list(base.values[x]) for x in base_objects}
    restrict: dict[str, dict] = {f: dict(base.restrict[f]) for f in cat.arrows
                                 if cat.src(f) in defined and cat.dst(f) in defined}
    # presentations[t] = list of (covering, fp data, {family: element})
    presentations: dict[str, list] = {}

    def res(f, x):
        return restrict[f][x]

    def usable(cov: Covering, allowed):
        if not all(cat.src(f) in allowed for f in cov.arrows):
            return None
        data = {}
        for i, f in enumerate(cov.arrows):
            for j, g in enumerate(cov.arrows):
                moved = _fp_within(site, f, g, allowed)
                if moved is None:
                    return None
                data[(i, j)] = moved
        return data

    for t in base_objects:
        pres = []
        for cov in site.coverings_of(t):
            data = usable(cov, defined)
            if data is None:
                continue
            table = {}
            for x in values[t]:
                table.setdefault(tuple(res(f, x) for f in cov.arrows), x)
            pres.append((cov, data, table))
        presentations[t] = pres

    while defined != set(cat.objects):
        batch = {}
        for t in cat.objects:
            if t in defined:
                continue
            covs = [(c, d) for c in site.coverings_of(t) if (d := usable(c, defined)) is not None]
            if covs:
                batch[t] = covs
        if not batch:
            missing = sorted(set(cat.objects) - defined)
            raise SiteError(f"cannot extend to {missing}: no covering by already-defined objects")
        for t, covs in batch.items():
            uf = _UnionFind()
            lims = []
            for cov, data in covs:
                members = [cat.src(f) for f in cov.arrows]
                lim = _limit(members, lambda i, j, data=data: data[(i, j)], values.__getitem__, res)
                lims.append(lim)
                for fam in lim:
                    uf.add((cov.name, fam))
            for (c1, _), lim1 in zip(covs, lims):
                for (c2, _), _lim2 in zip(covs, lims):
                    if c1 == c2:
                        continue
                    factors = [site.factor(f, c1.arrows) for f in c2.arrows]
                    if any(fc is None for fc in factors):
                        continue
                    for fam in lim1:
                        image = tuple(res(h, fam[i]) for i, h in factors)
                        uf.union((c1.name, fam), (c2.name, image))
            classes: dict = {}
            for (cov, _), lim in zip(covs, lims):
                for fam in lim:
                    classes.setdefault(uf.find((cov.name, fam)), (cov.name, fam))
            elements = sorted(set(classes.values()), key=repr)
            values[t] = elements
            presentations[t] = [
                (cov, data, {fam: classes[uf.find((cov.name, fam))] for fam in lim})
                for (cov, data), lim in zip(covs, lims)
            ]
        defined |= set(batch)
        for f, (a, b) in cat.arrows.items():
            if f in restrict or a not in defined or b not in defined:
                continue
            restrict[f] = _transfer_map(site, f, values[b], presentations, b, a, res)
            # later arrows may need this one; res reads restrict lazily
    return SetSheaf(cat, values, restrict)


def _transfer_map(site, u, sections, presentations, t, t2, res):
    """Restriction along u: t2 -> t via a covering of t2 refining the pullback."""
    cat = site.category
    out = {}
    for x in sections:
        image = None
        for cov, _, table in presentations[t]:
            fams = [fam for fam, cls in table.items() if cls == x]
            if not fams:
                continue
            fam = fams[0]
            for cov2, _, table2 in presentations[t2]:
                factors = [site.factor(cat.compose(u, f), cov.arrows) for f in cov2.arrows]
                if any(fc is None for fc in factors):
                    continue
                target = tuple(res(h, fam[i]) for i, h in factors)
                if target in table2:
                    image = table2[target]
                    break
            if image is not None:
                break
        if image is None:
            raise SiteError(f"cannot compute the restriction of a section of {t} along {u}")
        out[x] = image
    return out


def extend_sheaf(site: FiniteSite, sub: Iterable[str], F_sub: SetSheaf) -> SetSheaf:
    """Extend a sheaf on the full subcategory ``sub`` to the whole site.

    Sections over t are the colimit, over coverings of t by objects of
    ``sub``, of compatible families. For t in ``sub`` the original sections
    are kept as representatives.
    """
    sub = set(sub)
    check_prop_hypotheses(site, sub)
    if set(F_sub.category.objects) != sub:
        raise InputError("presheaf is not defined on exactly the subcategory")
    return _extend(site, F_sub, sub)


@dataclass(frozen=True)
class Factorability:
    ok: bool
    witness: str | None = None

    def __bool__(self):
        return self.ok


def check_factorable(site: FiniteSite, pi: Iterable[str]) -> Factorability:
    """Does every object have a covering whose members all map into ``pi``?"""
    cat = site.category
    pi = set(pi)
    unknown = pi - set(cat.objects)
    if unknown:
        raise InputError(f"unknown objects {sorted(unknown)}")
    for t in cat.objects:
        if not any(
            all(any(cat.hom(cat.src(f), p) for p in pi) for f in c.arrows) for c in site.coverings_of(t)
        ):
            return Factorability(False, t)
    return Factorability(True)


def factorable_subcategory(site: FiniteSite, pi: Iterable[str]) -> list[str]:
    """Objects admitting an arrow to some object of ``pi``."""
    cat = site.category
    pi = set(pi)
    return [t for t in cat.objects if any(cat.hom(t, p) for p in pi)]


def slice_site(site: FiniteSite, p: str) -> FiniteSite:
    """The slice over ``p``: objects are arrows into p, arrows are ``"h|a"`` with a o h the source."""
    cat = site.category
    objs = [f for f in cat.arrows if cat.dst(f) == p]
    arrows = {}
    for a in objs:
        for h in cat.arrows:
            if cat.dst(h) == cat.src(a):
                arrows[f"{h}|{a}"] = (cat.compose(a, h), a)
    table = {}
    for name2, (mid, a2) in arrows.items():
        k = name2.split("|", 1)[0]
        for h in cat.arrows:
            if cat.dst(h) == cat.src(k):
                table[(name2, f"{h}|{mid}")] = f"{cat.compose(k, h)}|{a2}"
    ids = {a: f"{cat.identity(cat.src(a))}|{a}" for a in objs}
    scat = FiniteCategory(objs, arrows, table, ids, check_associativity=False)
    covs = []
    fps = {}
    for a in objs:
        for c in site.coverings_of(cat.src(a)):
            members = tuple(f"{f}|{a}" for f in c.arrows)
            covs.append(Covering(a, members))
            for f in c.arrows:
                for g in c.arrows:
                    q, q1, q2 = site.fiber_product(f, g)
                    top = cat.compose(a, cat.compose(f, q1))
                    fps[(f"{f}|{a}", f"{g}|{a}")] = (
                        top,
                        f"{q1}|{cat.compose(a, f)}",
                        f"{q2}|{cat.compose(a, g)}",
                    )
    return FiniteSite(scat, covs, fps)


@dataclass
class PiSheafDatum:
    """Sheaves on the slices over the objects of ``pi`` with comparison maps.

    ``beta[f][a]`` maps F_p(a) to F_q(f o a) for f: p -> q between objects
    of ``pi`` and a an arrow into p. Missing identity entries are identities.
    """

    pi: tuple[str, ...]
    sheaves: dict[str, SetSheaf]
    beta: dict[str, dict[str, dict]]


def check_datum(site: FiniteSite, datum: PiSheafDatum) -> None:
    """Validate slice sheaves, the comparison isomorphisms and the cocycle condition."""
    cat = site.category
    pi = list(datum.pi)
    for p in pi:
        sl = slice_site(site, p)
        F = datum.sheaves.get(p)
        if F is None:
            raise InputError(f"no sheaf given over {p}")
        result = check_sheaf(sl, F)
        if not result:
            raise InputError(f"sheaf over {p} fails the sheaf axiom on {result.covering.name}")
    beta = _complete_beta(site, datum)
    for f, comps in beta.items():
        p, q = cat.src(f), cat.dst(f)
        Fp, Fq = datum.sheaves[p], datum.sheaves[q]
        for a, m in comps.items():
            fa = cat.compose(f, a)
            if set(m) != set(Fp.values[a]) or sorted(m.values(), key=repr) != sorted(Fq.values[fa], key=repr):
                raise CocycleError(f"beta[{f}] at {a} is not a bijection F_{p}({a}) -> F_{q}({fa})", (f, f))
        for a in comps:
            for h in cat.arrows:
                if cat.dst(h) != cat.src(a):
                    continue
                ah = cat.compose(a, h)
                for x in Fp.values[a]:
                    left = beta[f][ah][Fp(f"{h}|{a}", x)]
                    right = Fq(f"{h}|{cat.compose(f, a)}", beta[f][a][x])
                    if left != right:
                        raise CocycleError(f"beta[{f}] is not natural along {h}", (f, h))
    for f in beta:
        for g in beta:
            if cat.dst(f) != cat.src(g):
                continue
            gf = cat.compose(g, f)
            for a, m in beta[f].items():
                for x, y in m.items():
                    if beta[gf][a][x] != beta[g][cat.compose(f, a)][y]:
                        raise CocycleError(f"cocycle condition fails for ({f}, {g})", (f, g))


def _complete_beta(site, datum):
    cat = site.category
    beta = {f: dict(m) for f, m in datum.beta.items()}
    for p in datum.pi:
        ident = cat.identity(p)
        if ident not in beta:
            Fp = datum.sheaves[p]
            beta[ident] = {a: {x: x for x in Fp.values[a]} for a in Fp.values}
    for p in datum.pi:
        for q in datum.pi:
            for f in cat.hom(p, q):
                if f not in beta:
                    raise InputError(f"no comparison map given for {f}: {p} -> {q}")
    return beta


def glue_pi_sheaf(site: FiniteSite, datum: PiSheafDatum) -> SetSheaf:
    """Descend compatible slice sheaves to a sheaf on the whole site.

    For t whose arrows into the objects of ``pi`` form a connected
    category, sections are the colimit of F_p(t -> p) along the comparison
    maps. The remaining objects are reached by covering limits as in
    :func:`extend_sheaf`.
    """
    cat = site.category
    fac = check_factorable(site, datum.pi)
    if not fac:
        raise HypothesisError(f"(site, pi) is not factorable: {fac.witness} has no factorable covering", "factorable")
    check_datum(site, datum)
    beta = _complete_beta(site, datum)
    pi = list(datum.pi)

    arrows_in = {t: [a for a in cat.arrows if cat.src(a) == t and cat.dst(a) in pi] for t in cat.objects}
    connected = []
    reps: dict[str, dict] = {}
    canon: dict[str, str] = {}
    for t in factorable_subcategory(site, pi):
        uf = _UnionFind()
        nodes = arrows_in[t]
        for a in nodes:
            uf.add(a)
        for a in nodes:
            for f in beta:
                if cat.src(f) == cat.dst(a):
                    uf.union(a, cat.compose(f, a))
        if len({uf.find(a) for a in nodes}) != 1:
            continue
        connected.append(t)
        a0 = sorted(nodes)[0]
        canon[t] = a0
        sections = _UnionFind()
        for a in nodes:
            for x in datum.sheaves[cat.dst(a)].values[a]:
                sections.add((a, x))
        for a in nodes:
            for f in beta:
                if cat.src(f) != cat.dst(a):
                    continue
                for x, y in beta[f][a].items():
                    sections.union((a, x), (cat.compose(f, a), y))
        home = datum.sheaves[cat.dst(a0)].values[a0]
        by_class = {}
        for x in home:
            root = sections.find((a0, x))
            if root in by_class:
                raise CocycleError(f"comparison maps identify two sections over {t}", (a0, a0))
            by_class[root] = x
        reps[t] = {node: by_class[sections.find(node)] for node in sections.parent}

    if not connected:
        raise HypothesisError("no object has a connected category of arrows into pi", "connected")
    values = {t: list(datum.sheaves[cat.dst(canon[t])].values[canon[t]]) for t in connected}
    restrict = {}
    keep = set(connected)
    for h, (t2, t) in cat.arrows.items():
        if t2 in keep and t in keep:
            a0 = canon[t]
            Fp = datum.sheaves[cat.dst(a0)]
            restrict[h] = {
                x: reps[t2][(cat.compose(a0, h), Fp(f"{h}|{a0}", x))] for x in values[t]
            }
    base = SetSheaf(cat.full_subcategory(keep), values, restrict)
    return _extend(site, base, keep)


class FiniteGroup:
    """A finite group from its multiplication table ``table[(g, h)] = g*h``."""

    def __init__(self, elements: Sequence[Hashable], table: Mapping[tuple, Hashable]):
        self.elements = tuple(elements)
        self.table = dict(table)
        els = set(self.elements)
        for g in self.elements:
            for h in self.elements:
                if self.table.get((g, h)) not in els:
                    raise GroupActionError(f"table is not closed at ({g}, {h})")
        ids = [e for e in self.elements if all(self.table[(e, g)] == g == self.table[(g, e)] for g in self.elements)]
        if not ids:
            raise GroupActionError("no identity element")
        self.identity = ids[0]
        for g, h, k in itertools.product(self.elements, repeat=3):
            if self.table[(self.table[(g, h)], k)] != self.table[(g, self.table[(h, k)])]:
                raise GroupActionError(f"multiplication is not associative at ({g}, {h}, {k})")
        for g in self.elements:
            if not any(self.table[(g, h)] == self.identity for h in self.elements):
                raise GroupActionError(f"{g} has no inverse")

    def mul(self, g, h):
        return self.table[(g, h)]

    def inverse(self, g):
        return next(h for h in self.elements if self.table[(g, h)] == self.identity)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls(range(n), {(a, b): (a + b) % n for a in range(n) for b in range(n)})


def check_action(group: FiniteGroup, X: Sequence[Hashable], act: Callable[[Hashable, Hashable], Hashable]) -> None:
    xs = set(X)
    for x in X:
        if act(group.identity, x) != x:
            raise GroupActionError(f"identity moves {x!r}")
        for g in group.elements:
            if act(g, x) not in xs:
                raise GroupActionError(f"{g} sends {x!r} outside the set")
            for h in group.elements:
                if act(group.mul(g, h), x) != act(g, act(h, x)):
                    raise GroupActionError(f"(gh).x != g.(h.x) for g={g}, h={h}, x={x!r}")


def galois_fixed_points(
    group: FiniteGroup,
    X: Sequence[Hashable],
    action: Mapping[tuple, Hashable] | Callable,
    twist: Mapping[Hashable, Mapping] | None = None,
) -> list:
    """Elements fixed by every group element.

    ``action`` is ``{(g, x): g.x}`` or a callable. An optional ``twist``
    post-composes a permutation per group element; the twisted map must
    again be an action.
    """
    base = action if callable(action) else (lambda g, x: action[(g, x)])
    if twist is None:
        act = base
    else:
        act = lambda g, x: twist[g][base(g, x)]  # noqa: E731
    check_action(group, X, act)
    return [x for x in X if all(act(g, x) == x for g in group.elements)]


@dataclass(frozen=True)
class GSet:
    elements: tuple
    action: Mapping  # (g, x) -> g.x


def _gset_maps(group: FiniteGroup, X: GSet, Y: GSet) -> list[dict]:
    """Equivariant maps, chosen on orbit representatives with compatible stabilizers."""
    reps, seen = [], set()
    for x in X.elements:
        if x not in seen:
            reps.append(x)
            seen.update(X.action[(g, x)] for g in group.elements)
    choices = []
    for x in reps:
        stab = [g for g in group.elements if X.action[(g, x)] == x]
        choices.append([y for y in Y.elements if all(Y.action[(g, y)] == y for g in stab)])
    maps = []
    for images in itertools.product(*choices):
        m = {}
        for x, y in zip(reps, images):
            for g in group.elements:
                m[X.action[(g, x)]] = Y.action[(g, y)]
        maps.append({x: m[x] for x in X.elements})
    return maps


def gset_category(group: FiniteGroup, gsets: Mapping[str, GSet]) -> tuple[FiniteCategory, dict[str, dict]]:
    """Finite G-sets with all equivariant maps; also returns the underlying functions."""
    arrows, funcs = {}, {}
    identities = {}
    for a, X in gsets.items():
        for b, Y in gsets.items():
            for k, m in enumerate(_gset_maps(group, X, Y)):
                if a == b and all(m[x] == x for x in X.elements):
                    name = f"id_{a}"
                    identities[a] = name
                else:
                    name = f"{a}>{b}#{k}"
                arrows[name] = (a, b)
                funcs[name] = m
    lookup = {}
    for name, m in funcs.items():
        a, b = arrows[name]
        lookup[(a, b, tuple(sorted(m.items(), key=repr)))] = name
    table = {}
    for f, (a, b) in arrows.items():
        for g, (b2, c) in arrows.items():
            if b2 != b:
                continue
            comp = {x: funcs[g][funcs[f][x]] for x in gsets[a].elements}
            table[(g, f)] = lookup[(a, c, tuple(sorted(comp.items(), key=repr)))]
    return FiniteCategory(list(gsets), arrows, table, identities, check_associativity=False), funcs


def gset_fiber_product(group, gsets, cat, funcs, f, g) -> FiberProduct:
    """Find an object representing the fiber product of f and g among ``gsets``."""
    X, Y = gsets[cat.src(f)], gsets[cat.src(g)]
    pairs = [(x, y) for x in X.elements for y in Y.elements if funcs[f][x] == funcs[g][y]]
    for name, P in gsets.items():
        if len(P.elements) != len(pairs):
            continue
        for p1 in cat.hom(name, cat.src(f)):
            for p2 in cat.hom(name, cat.src(g)):
                image = {(funcs[p1][z], funcs[p2][z]) for z in P.elements}
                if image == set(pairs) and len(image) == len(pairs):
                    return name, p1, p2
    raise SiteError(f"no listed G-set represents the fiber product of {f} and {g}")

"""The finite-site fixture suite shared by the descent tests and the acceptance run."""

from dataclasses import dataclass, field

from llskit.descent import FiniteGroup, FiniteSite, GSet, SetSheaf
from llskit.finite_sites import (
    arrow_site,
    constant_point_sheaf,
    galois_site,
    gset_hom_sheaf,
    iso_pair_site,
    monoid_site,
    poset_function_sheaf,
    poset_locally_constant_sheaf,
    poset_site,
    representable_sheaf,
)


@dataclass
class Fixture:
    name: str
    site: FiniteSite
    subs: list = field(default_factory=list)
    sheaves: list = field(default_factory=list)
    pis: list = field(default_factory=list)


def _cyclic_set(G, n, shift):
    els = tuple(range(n))
    return GSet(els, {(g, x): (x + shift * g) % n for g in G.elements for x in els})


def _poset(name, opens, subs, pis, values=(0, 1)):
    site = poset_site(opens, coverings="irredundant")
    sheaves = [
        poset_function_sheaf(site, values),
        poset_function_sheaf(site, (0,)),
        poset_locally_constant_sheaf(site, values),
    ]
    return Fixture(name, site, subs, sheaves, pis)


def _trivial(name, site):
    objs = list(site.objects)
    sheaves = [constant_point_sheaf(site)] + [representable_sheaf(site, x) for x in objs]
    return Fixture(name, site, [objs], sheaves, [objs])


def suite():
    out = [
        _poset("point", [[], ["a"]], [["{}", "{a}"]], [["{a}"]]),
        _poset("sierpinski", [[], ["a"], ["a", "b"]], [["{}", "{a}", "{a,b}"]], [["{a,b}"]]),
        _poset("discrete2", [[], ["a"], ["b"], ["a", "b"]],
               [["{}", "{a}", "{b}", "{a,b}"], ["{}", "{a}", "{b}"]], [["{a}", "{b}"], ["{a,b}"]]),
        _poset("chain3", [[], ["a"], ["a", "b"], ["a", "b", "c"]],
               [["{}", "{a}", "{a,b}", "{a,b,c}"]], [["{a,b,c}"]]),
        _poset("point+indiscrete", [[], ["a"], ["b", "c"], ["a", "b", "c"]],
               [["{}", "{a}", "{b,c}", "{a,b,c}"], ["{}", "{a}", "{b,c}"]], [["{a}", "{b,c}"]]),
        _poset("coarse3", [[], ["a", "b"], ["a", "b", "c"]], [["{}", "{a,b}", "{a,b,c}"]], [["{a,b,c}"]]),
    ]
    z2 = monoid_site(["1", "s"], {("s", "s"): "1"}, "1")
    fx = _trivial("Z/2 monoid", z2)
    fx.sheaves.append(SetSheaf(z2.category, {"*": [0, 1]}, {"s": {0: 1, 1: 0}}))
    fx.sheaves.append(SetSheaf(z2.category, {"*": [0, 1]}, {"s": {0: 0, 1: 1}}))
    out.append(fx)
    idem = monoid_site(["1", "e"], {("e", "e"): "e"}, "1")
    fx = _trivial("idempotent monoid", idem)
    fx.sheaves.append(SetSheaf(idem.category, {"*": [0, 1, 2]}, {"e": {0: 0, 1: 0, 2: 2}}))
    out.append(fx)
    out.append(_trivial("arrow", arrow_site()))
    iso = iso_pair_site()
    fx = Fixture("iso pair", iso, [["a", "b"], ["a"]],
                 [constant_point_sheaf(iso), representable_sheaf(iso, "a")], [["a"], ["b"]])
    out.append(fx)
    for n in (1, 2):
        G = FiniteGroup.cyclic(n)
        gs = galois_site(G)
        sheaves = [gset_hom_sheaf(gs, _cyclic_set(G, 2, 1)), gset_hom_sheaf(gs, _cyclic_set(G, 2, 0))]
        if n == 1:
            sheaves.append(gset_hom_sheaf(gs, _cyclic_set(G, 1, 0)))
        fx = Fixture(f"galois Z/{n}", gs.site, [list(gs.site.objects), ["0", "Bp", "P"]], sheaves, [["Bp"]])
        fx.galois = gs
        out.append(fx)
    return out

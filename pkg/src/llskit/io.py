"""JSON parsing and serialization with structured, pointer-located errors.

Every parser takes already-decoded JSON plus the JSON pointer of that
value, and raises :class:`SchemaError` (shape problems) or
:class:`InvariantError` (mathematical constraints) carrying the pointer.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .descent import Covering, FiniteCategory, FiniteSite, PiSheafDatum, SetSheaf, slice_site
from .dual_graph import DualGraph, Edge, GraphAutomorphism, GraphFamily, Mark, Vertex
from .errors import InputError, InvariantError, JSONFormatError, SchemaError, SiteError
from .lls import LimitSeriesType
from .multidegree import Multidegree, find_side, sides


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}", "") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise JSONFormatError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "") from None


def dumps(obj: Any) -> str:
    """Canonical compact JSON: sorted keys are not used, so field order is the contract."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _expect(value, kind, pointer, what):
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        name = {dict: "an object", list: "an array", str: "a string", int: "an integer"}.get(kind, str(kind))
        raise SchemaError(f"{what} must be {name}", pointer)
    return value


def _field(obj, key, kind, pointer, what=None):
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", pointer)
    return _expect(obj[key], kind, f"{pointer}/{key}", what or key)


def _relocate(exc: InputError, pointer: str) -> InputError:
    cls = InvariantError if isinstance(exc, InvariantError) else SchemaError
    if type(exc).code not in ("E_INPUT", "E_SCHEMA", "E_INVARIANT"):
        cls = type(exc)
    err = cls(str(exc), exc.pointer if exc.pointer else pointer)
    return err


def parse_graph(obj: Any, pointer: str = "") -> DualGraph:
    _expect(obj, dict, pointer, "graph")
    vs = []
    for i, v in enumerate(_field(obj, "vertices", list, pointer)):
        p = f"{pointer}/vertices/{i}"
        _expect(v, dict, p, "vertex")
        vs.append(Vertex(_field(v, "id", str, p), _field(v, "genus", int, p)))
    es = []
    vids = {v.id for v in vs}
    for i, e in enumerate(obj.get("edges", [])):
        p = f"{pointer}/edges/{i}"
        _expect(e, dict, p, "edge")
        eid = _field(e, "id", str, p)
        ends = _field(e, "ends", list, p)
        if len(ends) != 2 or not all(isinstance(x, str) for x in ends):
            raise SchemaError(f"edge {eid!r} must have two string ends", f"{p}/ends")
        for x in ends:
            if x not in vids:
                raise SchemaError(f"edge {eid!r} references missing vertex {x!r}", f"{p}/ends")
        es.append(Edge(eid, (ends[0], ends[1])))
    ms = []
    for i, m in enumerate(obj.get("marks", [])):
        p = f"{pointer}/marks/{i}"
        _expect(m, dict, p, "mark")
        ms.append(Mark(_field(m, "vertex", str, p), _field(m, "label", str, p)))
    try:
        return DualGraph(vs, es, ms)
    except InputError as exc:
        raise _relocate(exc, pointer) from None


def dump_graph(g: DualGraph) -> dict:
    return {
        "vertices": [{"id": v.id, "genus": v.genus} for v in g.vertices],
        "edges": [{"id": e.id, "ends": list(e.ends)} for e in g.edges],
        "marks": [{"vertex": m.vertex, "label": m.label} for m in g.marks],
    }


def parse_family(obj: Any, pointer: str = "") -> GraphFamily:
    _expect(obj, dict, pointer, "family")
    total = parse_graph(_field(obj, "total", dict, pointer), f"{pointer}/total")
    fibers = []
    for i, f in enumerate(_field(obj, "fibers", list, pointer)):
        p = f"{pointer}/fibers/{i}"
        _expect(f, dict, p, "fiber")
        edges = _field(f, "nodal_edges", list, p)
        fibers.append((_field(f, "base", str, p), [str(e) for e in edges]))
    try:
        return GraphFamily(total, fibers)
    except InputError as exc:
        raise _relocate(exc, pointer) from None


def dump_family(fam: GraphFamily) -> dict:
    return {
        "total": dump_graph(fam.total),
        "fibers": [{"base": f.base, "nodal_edges": sorted(f.nodal_edges)} for f in fam.fibers],
    }


def parse_multidegree(obj: Any, graph: DualGraph, pointer: str = "") -> Multidegree:
    """``{"d": 4, "sides": [{"edge": "e1", "half": ["v1"], "value": 3}, ...]}``.

    Every edge needs at least one side; giving both sides is allowed if
    they sum to d.
    """
    _expect(obj, dict, pointer, "multidegree")
    d = _field(obj, "d", int, pointer)
    if d <= 0:
        raise SchemaError("d must be positive", f"{pointer}/d")
    values = {}
    for i, s in enumerate(_field(obj, "sides", list, pointer)):
        p = f"{pointer}/sides/{i}"
        _expect(s, dict, p, "side")
        eid = _field(s, "edge", str, p)
        half = _field(s, "half", list, p)
        value = _field(s, "value", int, p)
        try:
            side = find_side(graph, eid, half)
        except InputError as exc:
            raise SchemaError(str(exc), p) from None
        first, _ = sides(graph, eid)
        canon = value if side.half == first.half else d - value
        if eid in values and values[eid][0] != canon:
            raise InvariantError(
                f"md(Y) + md(Y^c) must equal d={d} at edge {eid!r}", p
            )
        values.setdefault(eid, (canon, p))
    missing = sorted(set(graph.edge_ids) - set(values))
    if missing:
        raise SchemaError(f"multidegree has no side for edges {missing}", f"{pointer}/sides")
    return Multidegree(graph, d, {e: v for e, (v, _) in values.items()})


def dump_multidegree(md: Multidegree) -> dict:
    out = []
    for eid, value in sorted(md.canonical_values().items()):
        first, _ = sides(md.graph, eid)
        out.append({"edge": eid, "half": sorted(first.half), "value": value})
    return {"d": md.d, "sides": out}


def parse_automorphism(obj: Any, pointer: str = "") -> GraphAutomorphism:
    _expect(obj, dict, pointer, "automorphism")
    parts = {}
    for key in ("vertices", "edges", "labels"):
        m = obj.get(key, {})
        _expect(m, dict, f"{pointer}/{key}", key)
        for k, v in m.items():
            _expect(v, str, f"{pointer}/{key}/{k}", "image")
        parts[key] = m
    return GraphAutomorphism(parts["vertices"], parts["edges"], parts["labels"])


def dump_type(t: LimitSeriesType) -> dict:
    return {
        "sequences": [
            {"edge": e, "at": v, "seq": list(s.values)} for (e, v), s in sorted(t.sequences.items())
        ],
        "multiplicities": [
            {"vertex": v, "multiplicity": m} for v, m in sorted(t.multiplicities.items()) if m != 1
        ],
        "multiplicity": t.multiplicity,
    }


def parse_type(obj: Any, graph: DualGraph, r: int, d: int, pointer: str = "") -> LimitSeriesType:
    _expect(obj, dict, pointer, "limit series type")
    seqs = {}
    for i, s in enumerate(_field(obj, "sequences", list, pointer)):
        p = f"{pointer}/sequences/{i}"
        _expect(s, dict, p, "sequence")
        seq = _field(s, "seq", list, p)
        seqs[(_field(s, "edge", str, p), _field(s, "at", str, p))] = [
            _expect(x, int, f"{p}/seq", "vanishing order") for x in seq
        ]
    mults = {}
    for i, m in enumerate(obj.get("multiplicities", [])):
        p = f"{pointer}/multiplicities/{i}"
        mults[_field(m, "vertex", str, p)] = _field(m, "multiplicity", int, p)
    try:
        return LimitSeriesType(graph, r, d, seqs, mults)
    except InputError as exc:
        raise _relocate(exc, pointer) from None


def _element(x):
    return tuple(_element(y) for y in x) if isinstance(x, list) else x


def _plain(x):
    return [_plain(y) for y in x] if isinstance(x, tuple) else x


def parse_site(obj: Any, pointer: str = "") -> FiniteSite:
    _expect(obj, dict, pointer, "site")
    objects = _field(obj, "objects", list, pointer)
    for i, x in enumerate(objects):
        _expect(x, str, f"{pointer}/objects/{i}", "object name")
    arrows = {}
    for i, a in enumerate(obj.get("arrows", [])):
        p = f"{pointer}/arrows/{i}"
        _expect(a, dict, p, "arrow")
        aid = _field(a, "id", str, p)
        src, dst = _field(a, "src", str, p), _field(a, "dst", str, p)
        for end in (src, dst):
            if end not in objects:
                raise SchemaError(f"arrow {aid!r} references missing object {end!r}", p)
        if aid in arrows:
            raise SchemaError(f"duplicate arrow id {aid!r}", p)
        arrows[aid] = (src, dst)
    identities = obj.get("identities", {})
    _expect(identities, dict, f"{pointer}/identities", "identities")
    table = {}
    for i, c in enumerate(obj.get("compose", [])):
        p = f"{pointer}/compose/{i}"
        _expect(c, dict, p, "composition entry")
        table[(_field(c, "g", str, p), _field(c, "f", str, p))] = _field(c, "gf", str, p)
    covs = []
    for i, c in enumerate(obj.get("coverings", [])):
        p = f"{pointer}/coverings/{i}"
        _expect(c, dict, p, "covering")
        by = _field(c, "by", list, p)
        covs.append(Covering(_field(c, "target", str, p), tuple(str(x) for x in by)))
    fps = {}
    for i, fp in enumerate(obj.get("fiber_products", [])):
        p = f"{pointer}/fiber_products/{i}"
        _expect(fp, dict, p, "fiber product")
        legs = _field(fp, "legs", list, p)
        proj = _field(fp, "projections", list, p)
        if len(legs) != 2 or len(proj) != 2:
            raise SchemaError("legs and projections must have two entries each", p)
        fps[(legs[0], legs[1])] = (_field(fp, "object", str, p), proj[0], proj[1])
    try:
        cat = FiniteCategory(objects, arrows, table, identities)
        return FiniteSite(cat, covs, fps)
    except InputError as exc:
        raise _relocate(exc, pointer) from None
    except SiteError as exc:
        raise SchemaError(str(exc), pointer) from None


def dump_site(site: FiniteSite) -> dict:
    cat = site.category
    return {
        "objects": list(cat.objects),
        "arrows": [{"id": a, "src": s, "dst": t} for a, (s, t) in sorted(cat.arrows.items())],
        "identities": dict(cat.identities),
        "compose": [{"g": g, "f": f, "gf": h} for (g, f), h in sorted(cat.table.items())],
        "coverings": [{"target": c.target, "by": list(c.arrows)} for c in site.coverings],
        "fiber_products": [
            {"legs": [f, g], "object": p, "projections": [p1, p2]}
            for (f, g), (p, p1, p2) in sorted(site.fiber_products.items())
        ],
    }


def parse_sheaf(obj: Any, category: FiniteCategory, pointer: str = "") -> SetSheaf:
    """``{"values": {obj: [...]}, "restrict": {arrow: [[x, y], ...]}}``; nested arrays become tuples."""
    _expect(obj, dict, pointer, "sheaf")
    values = _field(obj, "values", dict, pointer)
    vals = {}
    for x in category.objects:
        if x not in values:
            raise SchemaError(f"no value on object {x!r}", f"{pointer}/values")
        vals[x] = [_element(e) for e in _expect(values[x], list, f"{pointer}/values/{x}", "value")]
    restrict = {}
    for f, pairs in obj.get("restrict", {}).items():
        p = f"{pointer}/restrict/{f}"
        if f not in category.arrows:
            raise SchemaError(f"restriction along unknown arrow {f!r}", p)
        _expect(pairs, list, p, "restriction")
        restrict[f] = {_element(a): _element(b) for a, b in pairs}
    try:
        return SetSheaf(category, vals, restrict)
    except InputError as exc:
        raise _relocate(exc, pointer) from None


def dump_sheaf(F: SetSheaf) -> dict:
    return {
        "values": {x: [_plain(e) for e in v] for x, v in F.values.items()},
        "restrict": {
            f: [[_plain(a), _plain(b)] for a, b in m.items()] for f, m in sorted(F.restrict.items())
        },
    }


def parse_datum(obj: Any, site: FiniteSite, pointer: str = "") -> PiSheafDatum:
    _expect(obj, dict, pointer, "datum")
    pi = tuple(_field(obj, "pi", list, pointer))
    for p in pi:
        if p not in site.objects:
            raise SchemaError(f"unknown object {p!r} in pi", f"{pointer}/pi")
    sheaves_obj = _field(obj, "sheaves", dict, pointer)
    sheaves = {}
    for p in pi:
        if p not in sheaves_obj:
            raise SchemaError(f"no sheaf over {p!r}", f"{pointer}/sheaves")
        sheaves[p] = parse_sheaf(sheaves_obj[p], slice_site(site, p).category, f"{pointer}/sheaves/{p}")
    beta = {}
    for f, comps in obj.get("beta", {}).items():
        if f not in site.category.arrows:
            raise SchemaError(f"unknown arrow {f!r}", f"{pointer}/beta")
        beta[f] = {a: {_element(x): _element(y) for x, y in pairs} for a, pairs in comps.items()}
    return PiSheafDatum(pi, sheaves, beta)


def dump_datum(datum: PiSheafDatum) -> dict:
    return {
        "pi": list(datum.pi),
        "sheaves": {p: dump_sheaf(F) for p, F in datum.sheaves.items()},
        "beta": {
            f: {a: [[_plain(x), _plain(y)] for x, y in m.items()] for a, m in comps.items()}
            for f, comps in datum.beta.items()
        },
    }


def parse_inputs(kind: str, path: str | Path, context: Any = None):
    """Load and validate one input file.

    ``kind`` is graph, family, multidegree (context: graph), automorphism,
    site, sheaf (context: site) or datum (context: site).
    """
    obj = load_json(path)
    if kind == "graph":
        return parse_graph(obj)
    if kind == "family":
        return parse_family(obj)
    if kind == "multidegree":
        return parse_multidegree(obj, context)
    if kind == "automorphism":
        return parse_automorphism(obj)
    if kind == "site":
        return parse_site(obj)
    if kind == "sheaf":
        return parse_sheaf(obj, context.category)
    if kind == "datum":
        return parse_datum(obj, context)
    raise ValueError(f"unknown input kind {kind!r}")

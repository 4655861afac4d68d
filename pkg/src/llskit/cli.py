"""Command-line interface.

Exit status: 0 on success, 1 for domain errors (valid input the tools do
not support or that fails a mathematical hypothesis), 2 for malformed
input. JSON output (``--format json``) is the stable contract.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import io as jio
from .descent import check_factorable, check_sheaf, glue_pi_sheaf
from .dual_graph import check_automorphism
from .errors import InputError, LLSError, SiteError
from .lls import (
    count_refined,
    enumerate_refined,
    galois_invariant_count,
    real_count_formulas,
)
from .multidegree import find_side, find_sufficient_collection, fiber_multidegree, twist
from .schubert import (
    ClassCombination,
    Partition,
    box_for,
    brill_noether_rho,
    intersection_number,
)

DEFAULT_MAX_BOX = 64


class UsageError(InputError):
    code = "E_USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _max_box() -> int:
    raw = os.environ.get("LLSKIT_MAX_BOX", str(DEFAULT_MAX_BOX))
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"LLSKIT_MAX_BOX must be an integer, got {raw!r}") from None
    if value <= 0:
        raise UsageError("LLSKIT_MAX_BOX must be positive")
    return value


class BoxTooLarge(LLSError):
    pass


def _guard(r: int, d: int) -> tuple[int, int]:
    rows, cols = box_for(r, d)
    cap = _max_box()
    if rows * cols > cap:
        raise BoxTooLarge(f"box {rows}x{cols} exceeds LLSKIT_MAX_BOX={cap}")
    return rows, cols


def _emit(args, payload, text: str | None = None):
    if args.format == "json":
        print(jio.dumps(payload))
    else:
        print(text if text is not None else (payload if isinstance(payload, (int, str)) else jio.dumps(payload)))


def cmd_rho(args):
    _emit(args, brill_noether_rho(args.g, args.r, args.d))


def _partitions(texts, rows, cols):
    return [Partition.parse(t, rows, cols) for t in texts]


def cmd_schubert_product(args):
    rows, cols = _guard(args.r, args.d)
    acc = ClassCombination(rows, cols, {(): 1})
    for lam in _partitions(args.classes, rows, cols):
        acc = acc * ClassCombination.of(lam)
    payload = [{"partition": list(lam.parts), "coefficient": c} for lam, c in acc.items()]
    _emit(args, payload, acc.format())


def cmd_schubert_count(args):
    rows, cols = _guard(args.r, args.d)
    conds = _partitions(args.classes, rows, cols)
    _emit(args, intersection_number(conds, args.r, args.d, method=args.method))


def cmd_lls_enumerate(args):
    _guard(args.r, args.d)
    g = jio.parse_inputs("graph", args.graph)
    types = enumerate_refined(g, args.r, args.d)
    payload = [jio.dump_type(t) for t in types]
    lines = [f"{len(types)} refined types"] + [
        f"  mult {t.multiplicity}: " + " ".join(
            f"{e}@{v}={list(s.values)}" for (e, v), s in sorted(t.sequences.items())
        )
        for t in types
    ]
    _emit(args, payload, "\n".join(lines))


def cmd_lls_count(args):
    _guard(args.r, args.d)
    g = jio.parse_inputs("graph", args.graph)
    _emit(args, count_refined(g, args.r, args.d))


def cmd_lls_real_counts(args):
    report = real_count_formulas(args.d)
    print(jio.dumps(report.as_dict()))


def cmd_lls_galois(args):
    _guard(args.r, args.d)
    g = jio.parse_inputs("graph", args.graph)
    a = jio.parse_inputs("automorphism", args.autom)
    check_automorphism(g, a)
    types = enumerate_refined(g, args.r, args.d)
    res = galois_invariant_count(types, a)
    payload = {
        "strata": res.strata,
        "total_types": len(types),
        "multiplicities": list(res.multiplicities),
        "determines_points": res.determines_points,
        "note": res.note,
    }
    _emit(args, payload, f"{res.strata} invariant strata of {len(types)}; {res.note}")


def cmd_md_fiber(args):
    g = jio.parse_inputs("graph", args.graph)
    md = jio.parse_inputs("multidegree", args.md, g)
    _emit(args, fiber_multidegree(g, md))


def cmd_md_twist(args):
    g = jio.parse_inputs("graph", args.graph)
    md = jio.parse_inputs("multidegree", args.md, g)
    side = find_side(g, args.edge, args.half.split(","))
    _emit(args, jio.dump_multidegree(twist(md, side)))


def cmd_md_sufficient(args):
    fam = jio.parse_inputs("family", args.family)
    coll = find_sufficient_collection(fam, args.d)
    _emit(args, [jio.dump_multidegree(md) for md in coll])


def cmd_descent_check(args):
    site = jio.parse_inputs("site", args.site)
    payload = {"objects": len(site.objects), "arrows": len(site.category.arrows),
               "coverings": len(site.coverings)}
    if args.pi:
        fac = check_factorable(site, args.pi.split(","))
        payload["factorable"] = fac.ok
        if not fac.ok:
            payload["witness"] = fac.witness
    if args.sheaf:
        F = jio.parse_inputs("sheaf", args.sheaf, site)
        res = check_sheaf(site, F)
        payload["sheaf"] = res.ok
        if not res.ok:
            payload["failure"] = {
                "covering": {"target": res.covering.target, "by": list(res.covering.arrows)},
                "kind": res.kind,
                "witness": jio._plain(tuple(res.witness)),
            }
    _emit(args, payload)


def cmd_descent_glue(args):
    site = jio.parse_inputs("site", args.site)
    datum = jio.parse_inputs("datum", args.datum, site)
    F = glue_pi_sheaf(site, datum)
    _emit(args, jio.dump_sheaf(F), "\n".join(f"{x}: {len(v)} sections" for x, v in F.values.items()))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="llskit", description="Limit linear series on compact-type curves.")
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="output format; accepted anywhere on the command line")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("rho", help="Brill-Noether number")
    for name in ("g", "r", "d"):
        q.add_argument(name, type=int)
    q.set_defaults(func=cmd_rho)

    s = sub.add_parser("schubert").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name, func in (("product", cmd_schubert_product), ("count", cmd_schubert_count)):
        q = s.add_parser(name)
        q.add_argument("--r", type=int, required=True)
        q.add_argument("--d", type=int, required=True)
        q.add_argument("classes", nargs="*", help="partitions like 2,1 (use 0 for the empty one)")
        if name == "count":
            q.add_argument("--method", choices=("auto", "pieri", "lr"), default="auto")
        q.set_defaults(func=func)

    s = sub.add_parser("lls").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name, func in (("enumerate", cmd_lls_enumerate), ("count", cmd_lls_count)):
        q = s.add_parser(name)
        q.add_argument("graph")
        q.add_argument("--r", type=int, required=True)
        q.add_argument("--d", type=int, required=True)
        q.set_defaults(func=func)
    q = s.add_parser("real-counts")
    q.add_argument("--d", type=int, required=True)
    q.set_defaults(func=cmd_lls_real_counts)
    q = s.add_parser("galois")
    q.add_argument("graph")
    q.add_argument("autom")
    q.add_argument("--r", type=int, default=1)
    q.add_argument("--d", type=int, required=True)
    q.set_defaults(func=cmd_lls_galois)

    s = sub.add_parser("md").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    q = s.add_parser("fiber")
    q.add_argument("graph")
    q.add_argument("md")
    q.set_defaults(func=cmd_md_fiber)
    q = s.add_parser("twist")
    q.add_argument("graph")
    q.add_argument("md")
    q.add_argument("--edge", required=True)
    q.add_argument("--half", required=True, help="comma-separated vertices of the side")
    q.set_defaults(func=cmd_md_twist)
    q = s.add_parser("sufficient")
    q.add_argument("family")
    q.add_argument("--d", type=int, required=True)
    q.set_defaults(func=cmd_md_sufficient)

    s = sub.add_parser("descent").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    q = s.add_parser("check")
    q.add_argument("site")
    q.add_argument("--sheaf")
    q.add_argument("--pi", help="comma-separated objects to test for factorability")
    q.set_defaults(func=cmd_descent_check)
    q = s.add_parser("glue")
    q.add_argument("site")
    q.add_argument("datum")
    q.set_defaults(func=cmd_descent_glue)
    return p


def _report(exc: Exception, fmt: str, status: int) -> int:
    code = getattr(exc, "code", None) or type(exc).__name__
    pointer = getattr(exc, "pointer", None)
    if fmt == "json":
        err = {"error": code, "message": str(exc)}
        if pointer is not None:
            err["pointer"] = pointer
        print(jio.dumps(err), file=sys.stderr)
    else:
        where = f" {pointer}" if pointer else ""
        print(f"error[{code}]{where}: {exc}", file=sys.stderr)
    return status


def _pop_format(argv: list[str]) -> tuple[list[str], str]:
    """Accept ``--format`` anywhere on the command line."""
    fmt, rest, i = "text", [], 0
    while i < len(argv):
        arg = argv[i]
        if arg == "--format" or arg.startswith("--format="):
            value = arg.split("=", 1)[1] if "=" in arg else (argv[i + 1] if i + 1 < len(argv) else "")
            i += 1 if "=" in arg else 2
            if value not in ("text", "json"):
                raise UsageError(f"--format must be text or json, got {value!r}")
            fmt = value
            continue
        rest.append(arg)
        i += 1
    return rest, fmt


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "text"
    try:
        argv, fmt = _pop_format(argv)
        args = build_parser().parse_args(argv)
        args.format = fmt
        args.func(args)
    except (InputError, SiteError) as exc:
        return _report(exc, fmt, 2)
    except LLSError as exc:
        return _report(exc, fmt, 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""``polycov`` command line.

Subcommands read and write the JSON forms of posets and sggis, so they chain
through pipes::

    polycov make "pyramid(toroid44(3))" | polycov mon | polycov cover --json
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructors
from .covers import (
    DEFAULT_FACET_CAP,
    DEFAULT_POINT_CAP,
    NotACGroup,
    PreconditionError,
    SymbolicGroup,
    extend_2k,
    regular_cover,
)
from .group import DEFAULT_ENUM_CAP, CapExceeded
from .monodromy import monodromy
from .poset import NotAPolytope, Polytope, PosetStructureError
from .reconstruct import CoveringError, covering_map, polytope_from_group
from .sggi import Sggi, check_sggi, intersection_condition, mix, schlafli_type, sggi_defects


class UsageError(Exception):
    pass


def _default_cap() -> int:
    raw = os.environ.get("POLYCOV_CAP")
    if not raw:
        return DEFAULT_ENUM_CAP
    try:
        return int(float(raw))
    except ValueError:
        raise UsageError(f"POLYCOV_CAP must be an integer, got {raw!r}") from None


def _read_json(path: str) -> dict:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not JSON ({exc})") from exc


def _load_poset(path: str) -> Polytope:
    data = _read_json(path)
    if "faces" not in data:
        raise ValueError(f"{path}: expected poset JSON with 'faces'")
    return Polytope.from_json(data)


def _load_sggi(path: str) -> Sggi:
    data = _read_json(path)
    if "generators" not in data:
        raise ValueError(f"{path}: expected sggi JSON with 'generators'")
    return Sggi.from_json(data)


def _load_sggi_or_poset(path: str) -> Sggi:
    data = _read_json(path)
    if "generators" in data:
        return Sggi.from_json(data)
    if "faces" in data:
        return monodromy(Polytope.from_json(data))
    raise ValueError(f"{path}: neither sggi nor poset JSON")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _fmt_set(idx) -> str:
    return "{" + ",".join(map(str, idx)) + "}"


# ---- subcommands -----------------------------------------------------------


def cmd_make(args) -> int:
    try:
        Q = constructors.build(args.expr)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(Q.to_json())
    return 0


def cmd_validate(args) -> int:
    rep = _load_poset(args.poset).validate()
    if args.json:
        _emit(rep.as_dict())
    else:
        print("passed" if rep.passed else "failed")
        for v in rep.violations:
            print(f"  axiom {v.axiom}: {v.message} {list(v.witness)}")
    return 0


def cmd_flags(args) -> int:
    Q = _load_poset(args.poset)
    Q.require_valid()
    _emit([list(f) for f in Q.flags()])
    return 0


def cmd_dual(args) -> int:
    _emit(_load_poset(args.poset).dual().to_json())
    return 0


def _mon_report(G: Sggi, cap: int) -> dict:
    out = {
        "rank": G.rank,
        "domain": G.degree,
        "order": str(G.order()),
        "type": list(schlafli_type(G).periods),
        "sggi": check_sggi(G),
        "sggi_defects": sggi_defects(G),
    }
    try:
        rep = intersection_condition(G, cap)
        out["c_group"] = out["sggi"] and rep.passed
        out["intersection"] = rep.as_dict()
    except CapExceeded as exc:
        out["c_group"] = None
        out["intersection"] = {"undecided": str(exc), "pair": [list(p) for p in getattr(exc, "pair", ())]}
    return out


def cmd_mon(args) -> int:
    G = monodromy(_load_poset(args.poset))
    if not args.report:
        _emit(G.to_json())
        return 0
    rep = _mon_report(G, args.cap)
    if args.json:
        _emit(rep)
        return 0
    print(f"rank:     {rep['rank']}")
    print(f"flags:    {rep['domain']}")
    print(f"order:    {rep['order']}")
    print(f"type:     {_fmt_set(rep['type'])}")
    print(f"sggi:     {str(rep['sggi']).lower()}")
    c = rep["c_group"]
    print(f"C-group:  {'undecided (cap)' if c is None else str(c).lower()}")
    for w in rep["intersection"].get("failures", []):
        print(f"  I={_fmt_set(w['I'])} J={_fmt_set(w['J'])}: "
              f"|<I> meet <J>| = {w['meet_order']}, |<I cap J>| = {w['common_order']}")
    return 0


def cmd_cover(args) -> int:
    G = _load_sggi_or_poset(args.input)
    rep = regular_cover(G, args.point_cap, args.facet_cap, args.cap)
    if args.json:
        _emit(rep.as_dict())
        return 0
    d = rep.as_dict()
    print(f"start prefix k = {d['start_prefix']}" + (" (scan stopped at cap)" if d["prefix_scan_capped"] else ""))
    print(f"{'stage':>5}  {'mode':<9} {'facets':>7}  {'type':<14} order")
    for s in d["stages"]:
        facets = "-" if s["facet_count"] is None else str(s["facet_count"])
        print(f"{s['index']:>5}  {s['mode']:<9} {facets:>7}  {_fmt_set(s['type']):<14} {s['order']}")
        if "extension" in s:
            e = s["extension"]
            print(f"{'':>5}  2^K ext.  {'':>7}  {_fmt_set(e['type']):<14} {e['order']}")
    bound = "" if d["final_order_exact"] else " (upper bound)"
    print(f"final order: {d['final_order']}{bound}")
    tb = "" if d["final_type_exact"] else " (entry-wise lcm bound)"
    print(f"final type:  {_fmt_set(d['final_type'])}{tb}")
    print(f"certified:   {str(d['certified']).lower()}")
    return 0


def cmd_extend(args) -> int:
    G = _load_sggi(args.sggi)
    ext = extend_2k(G, args.point_cap, args.facet_cap, args.cap)
    _emit(ext.as_dict() if isinstance(ext, SymbolicGroup) else ext.to_json())
    return 0


def cmd_mix(args) -> int:
    _emit(mix(_load_sggi(args.a), _load_sggi(args.b)).to_json())
    return 0


def cmd_reconstruct(args) -> int:
    _emit(polytope_from_group(_load_sggi(args.sggi), args.cap).to_json())
    return 0


def cmd_covermap(args) -> int:
    _emit(covering_map(_load_poset(args.source), _load_poset(args.target)).to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polycov", description="Monodromy groups and finite regular covers of polytopes.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    cap_default = _default_cap()

    def caps(sp, points=False):
        sp.add_argument("--cap", type=int, default=cap_default,
                        help=f"element cap for exhaustive enumeration (default {cap_default}, env POLYCOV_CAP)")
        if points:
            sp.add_argument("--point-cap", type=int, default=DEFAULT_POINT_CAP,
                            help="largest domain for an explicit group")
            sp.add_argument("--facet-cap", type=int, default=DEFAULT_FACET_CAP,
                            help="most facets for an explicit 2^K extension")

    sp = sub.add_parser("make", help="build a poset: " + constructors.GRAMMAR)
    sp.add_argument("expr")
    sp.set_defaults(func=cmd_make)

    sp = sub.add_parser("validate", help="check axioms A, B, C")
    sp.add_argument("poset", nargs="?", default="-")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("flags", help="list flags as face-id arrays")
    sp.add_argument("poset", nargs="?", default="-")
    sp.set_defaults(func=cmd_flags)

    sp = sub.add_parser("dual", help="reverse the partial order")
    sp.add_argument("poset", nargs="?", default="-")
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("mon", help="monodromy group as sggi JSON, or --report")
    sp.add_argument("poset", nargs="?", default="-")
    sp.add_argument("--report", action="store_true")
    sp.add_argument("--json", action="store_true")
    caps(sp)
    sp.set_defaults(func=cmd_mon)

    sp = sub.add_parser("cover", help="finite regular cover of an sggi or poset")
    sp.add_argument("input", nargs="?", default="-")
    sp.add_argument("--json", action="store_true")
    caps(sp, points=True)
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("extend", help="2^K extension of a string C-group")
    sp.add_argument("sggi", nargs="?", default="-")
    caps(sp, points=True)
    sp.set_defaults(func=cmd_extend)

    sp = sub.add_parser("mix", help="mix of two sggis of equal rank")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.set_defaults(func=cmd_mix)

    sp = sub.add_parser("reconstruct", help="coset geometry of an sggi as poset JSON")
    sp.add_argument("sggi", nargs="?", default="-")
    caps(sp)
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("covermap", help="flag map of a regular poset onto another")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.set_defaults(func=cmd_covermap)
    return p


DOMAIN_ERRORS = (CapExceeded, NotAPolytope, PosetStructureError, PreconditionError, NotACGroup,
                 CoveringError, ValueError, OSError)


def run(argv=None) -> int:
    try:
        parser = build_parser()
    except UsageError as exc:
        print(f"polycov: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"polycov {args.command}: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"polycov {args.command}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

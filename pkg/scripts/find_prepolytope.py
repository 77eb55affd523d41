"""Bounded exhaustive search for a small sggi whose coset geometry is a pre-polytope.

A hit is an sggi on at most ``--max-degree`` points whose coset geometry
passes axioms A and B but fails C (some section has a disconnected flag
graph).  The first hit in the fixed search order is written as sggi JSON.

    python scripts/find_prepolytope.py --rank 4 --max-degree 8 -o tests/data/prepolytope_witness.json
"""

import argparse
import itertools
import json
import sys
import time

from polycov.perm import Permutation
from polycov.reconstruct import polytope_from_group
from polycov.sggi import Sggi, intersection_condition


def involutions(d):
    """All non-identity involutions on ``d`` points, in lexicographic order of image tuples."""
    out = []
    for k in range(1, d // 2 + 1):
        for pts in itertools.combinations(range(d), 2 * k):
            for matching in _matchings(pts):
                img = list(range(d))
                for a, b in matching:
                    img[a], img[b] = b, a
                out.append(tuple(img))
    return sorted(set(out))


def _matchings(pts):
    if not pts:
        yield ()
        return
    a = pts[0]
    for i in range(1, len(pts)):
        rest = pts[1:i] + pts[i + 1:]
        for m in _matchings(rest):
            yield ((a, pts[i]),) + m


def mul(a, b):
    return tuple(b[x] for x in a)


def commute(a, b):
    return mul(a, b) == mul(b, a)


def dihedral(a, b):
    ident = tuple(range(len(a)))
    out = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in (a, b):
                y = mul(x, g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return out


def transitive(gens, d):
    seen = {0}
    todo = [0]
    while todo:
        x = todo.pop()
        for g in gens:
            if g[x] not in seen:
                seen.add(g[x])
                todo.append(g[x])
    return len(seen) == d


def candidates(rank, d):
    invs = involutions(d)
    # one representative per conjugacy class for g0
    firsts = [tuple(x for pair in ((2 * i + 1, 2 * i) for i in range(k)) for x in pair) + tuple(range(2 * k, d))
              for k in range(1, d // 2 + 1)]
    for g0 in firsts:
        for g1 in invs:
            if g1 == g0:
                continue
            if rank == 3:
                for g2 in invs:
                    if g2 != g1 and commute(g0, g2):
                        yield (g0, g1, g2)
            else:
                for g2 in invs:
                    if g2 == g1 or not commute(g0, g2):
                        continue
                    for g3 in invs:
                        if g3 != g2 and commute(g0, g3) and commute(g1, g3):
                            yield (g0, g1, g2, g3)


def local_failure(gens):
    """Cheap necessary test: some pair of consecutive dihedral subgroups meets too much."""
    for j in range(len(gens) - 2):
        a = dihedral(gens[j], gens[j + 1])
        b = dihedral(gens[j + 1], gens[j + 2])
        if len(a & b) > 2:
            return True
    return False


def vertex_facet_failure(rank):
    def pred(report, poset):
        for v in report.violations:
            if v.axiom != "C":
                continue
            lo, hi = v.witness
            if poset.rank_of(lo) == 0 and poset.rank_of(hi) == rank - 1:
                return True
        return False
    return pred


def search(rank, max_degree, want_vertex_facet, log=sys.stderr):
    for d in range(2, max_degree + 1):
        seen = 0
        for gens in candidates(rank, d):
            if not transitive(gens, d) or (rank == 3 and not local_failure(gens)):
                continue
            seen += 1
            G = Sggi([Permutation(g) for g in gens], d)
            if intersection_condition(G).passed:
                continue
            P = polytope_from_group(G)
            report = P.validate()
            failed = report.axioms_failed()
            if failed != {"C"}:
                continue
            if want_vertex_facet and not vertex_facet_failure(rank)(report, P):
                continue
            print(f"hit on {d} points after {seen} transitive candidates", file=log)
            return G, report
        print(f"degree {d}: {seen} transitive candidates, no hit", file=log)
    return None, None


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rank", type=int, default=4, choices=(3, 4))
    ap.add_argument("--max-degree", type=int, default=8)
    ap.add_argument("--any-section", action="store_true",
                    help="accept any disconnected section, not only vertex-facet ones")
    ap.add_argument("-o", "--output")
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    G, report = search(args.rank, args.max_degree, not args.any_section)
    if G is None:
        print("no witness found", file=sys.stderr)
        return 1
    sections = [list(v.witness) for v in report.violations]
    lines = [
        "{",
        f'  "rank": {G.rank},',
        f'  "domain": {G.degree},',
        '  "generators": [',
        ",\n".join("    " + json.dumps(g.tolist()) for g in G.gens),
        "  ],",
        f'  "disconnected_sections": {json.dumps(sections)}',
        "}",
    ]
    text = "\n".join(lines)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"search took {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

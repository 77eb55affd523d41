"""Built-in polytope families and the small expression language used by the CLI.

Face ids are derived from construction coordinates, so the same expression
always yields byte-identical JSON.
"""

from __future__ import annotations

import ast
import itertools

from .poset import Polytope

LEAST = "min"
GREATEST = "max"


def polygon(p: int) -> Polytope:
    if p < 2:
        raise ValueError(f"a polygon needs p >= 2, got {p}")
    faces = [(LEAST, -1), (GREATEST, 2)]
    covers = []
    for i in range(p):
        v, e = f"v{i}", f"e{i}"
        faces += [(v, 0), (e, 1)]
        covers += [(LEAST, v), (v, e), (f"v{(i + 1) % p}", e), (e, GREATEST)]
    return Polytope(2, faces, covers)


def simplex(n: int) -> Polytope:
    """Face lattice of the n-simplex: subsets of n+1 vertices."""
    if n < 1:
        raise ValueError(f"simplex rank must be >= 1, got {n}")

    def name(s):
        return "s(" + ",".join(map(str, s)) + ")"

    faces, covers = [], []
    for k in range(n + 2):
        for s in itertools.combinations(range(n + 1), k):
            faces.append((name(s), k - 1))
            for drop in range(k):
                covers.append((name(s[:drop] + s[drop + 1:]), name(s)))
    return Polytope(n, faces, covers)


def hypercube(n: int) -> Polytope:
    """Face lattice of the n-cube; faces are words over ``0``, ``1``, ``*``."""
    if n < 1:
        raise ValueError(f"hypercube rank must be >= 1, got {n}")
    empty = "c()"
    faces, covers = [(empty, -1)], []
    for word in itertools.product("01*", repeat=n):
        w = "".join(word)
        faces.append((f"c({w})", w.count("*")))
        if "*" not in w:
            covers.append((empty, f"c({w})"))
        for i, ch in enumerate(w):
            if ch == "*":
                for bit in "01":
                    covers.append((f"c({w[:i]}{bit}{w[i + 1:]})", f"c({w})"))
    return Polytope(n, faces, covers)


def toroid44(b: int) -> Polytope:
    """The torus map {4,4}_(b,0): a b x b grid of squares with opposite sides glued."""
    if b < 2:
        raise ValueError(f"toroid44 needs b >= 2, got {b}")
    faces = [(LEAST, -1), (GREATEST, 3)]
    covers = []
    for i, j in itertools.product(range(b), repeat=2):
        i1, j1 = (i + 1) % b, (j + 1) % b
        v, eh, ev, sq = f"v({i},{j})", f"eh({i},{j})", f"ev({i},{j})", f"s({i},{j})"
        faces += [(v, 0), (eh, 1), (ev, 1), (sq, 2)]
        covers += [(LEAST, v), (sq, GREATEST)]
        covers += [(v, eh), (f"v({i1},{j})", eh), (v, ev), (f"v({i},{j1})", ev)]
        covers += [(eh, sq), (f"eh({i},{j1})", sq), (ev, sq), (f"ev({i1},{j})", sq)]
    return Polytope(3, faces, covers)


def pyramid(Q: Polytope) -> Polytope:
    """Join of ``Q`` with a new apex vertex; raises the rank by one."""
    Q.require_valid()
    apex = "apex"
    while apex in Q.faces:
        apex += "'"
    least = Q.least

    def join(f):
        return apex if f == least else f"{f}+{apex}"

    faces = [(f, Q.rank_of(f)) for f in Q.faces]
    faces += [(join(f), Q.rank_of(f) + 1) for f in Q.faces]
    covers = list(Q.covers)
    covers += [(join(a), join(b)) for a, b in Q.covers]
    covers += [(f, join(f)) for f in Q.faces]
    return Polytope(Q.rank + 1, faces, covers)


def dual(Q: Polytope) -> Polytope:
    return Q.dual()


_BUILDERS = {
    "polygon": polygon,
    "simplex": simplex,
    "hypercube": hypercube,
    "toroid44": toroid44,
    "pyramid": pyramid,
    "dual": dual,
}

GRAMMAR = "expr := polygon(p) | simplex(n) | hypercube(n) | toroid44(b) | pyramid(expr) | dual(expr)"


def build(expr: str) -> Polytope:
    """Evaluate a construction expression such as ``"pyramid(toroid44(3))"``."""
    try:
        tree = ast.parse(expr.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {expr!r}; {GRAMMAR}") from exc
    return _eval(tree, expr)


def _eval(node, expr):
    if not (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1
            and not node.keywords and node.func.id in _BUILDERS):
        raise ValueError(f"unsupported construction in {expr!r}; {GRAMMAR}")
    name, (arg,) = node.func.id, node.args
    if name in ("pyramid", "dual"):
        return _BUILDERS[name](_eval(arg, expr))
    if not (isinstance(arg, ast.Constant) and type(arg.value) is int):
        raise ValueError(f"{name} takes an integer literal in {expr!r}; {GRAMMAR}")
    return _BUILDERS[name](arg.value)

"""Coset geometries of sggis and flag-level covering maps."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .group import DEFAULT_ENUM_CAP
from .monodromy import is_regular, monodromy
from .poset import Flag, Polytope
from .sggi import Sggi, covers

LEAST = "min"
GREATEST = "max"


class CoveringError(ValueError):
    pass


def cayley_table(G: Sggi, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """``T[x, j]`` = index of ``x * g_j`` in the group's enumeration order."""
    grp = G.group
    elems = grp.element_array(cap)
    table = np.empty((len(elems), G.rank), dtype=np.int64)
    for j, g in enumerate(G.gens):
        table[:, j] = grp.rank_rows(g.images[elems])
    return table


def polytope_from_group(G: Sggi, cap: int = DEFAULT_ENUM_CAP) -> Polytope:
    """Coset geometry of ``G``: rank-``j`` faces are the cosets ``x<g_k : k != j>``.

    Faces of consecutive ranks are incident when the cosets meet; a least and
    a greatest face are adjoined.  A face is named ``"j:i"`` with ``i`` the
    smallest element index in its coset.  For a string C-group the result is
    the regular polytope of that group; otherwise it may be a pre-polytope.
    """
    n = G.rank
    table = cayley_table(G, cap)
    labels = [_kernels.orbit_union(table, [k for k in range(n) if k != j]) for j in range(n)]
    width = len(str(len(table) - 1))

    def name(j, i):
        return f"{j}:{i:0{width}d}"

    faces = [(LEAST, -1), (GREATEST, n)]
    covers_ = []
    for j in range(n):
        ids = np.unique(labels[j])
        faces += [(name(j, i), j) for i in ids.tolist()]
        if j == 0:
            covers_ += [(LEAST, name(0, i)) for i in ids.tolist()]
        if j == n - 1:
            covers_ += [(name(j, i), GREATEST) for i in ids.tolist()]
        if j > 0:
            pairs = np.unique(np.stack([labels[j - 1], labels[j]], axis=1), axis=0)
            covers_ += [(name(j - 1, a), name(j, b)) for a, b in pairs.tolist()]
    return Polytope(n, faces, covers_)


@dataclass(frozen=True)
class CoveringMap:
    """Images of the flags of ``R`` (by canonical index) among the flags of ``Q``."""

    images: np.ndarray
    target_flags: int

    def fibre_sizes(self) -> np.ndarray:
        return np.bincount(self.images, minlength=self.target_flags)

    def is_surjective(self) -> bool:
        return bool((self.fibre_sizes() > 0).all())

    def to_json(self) -> dict:
        return {"source_flags": len(self.images), "target_flags": self.target_flags,
                "images": self.images.tolist()}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def covering_map(R: Polytope, Q: Polytope, base_r: Flag | None = None, base_q: Flag | None = None) -> CoveringMap:
    """The unique adjacency-preserving flag map of regular ``R`` onto ``Q`` with ``base_r -> base_q``."""
    if R.rank != Q.rank:
        raise CoveringError(f"ranks differ: {R.rank} vs {Q.rank}")
    mon_r, mon_q = monodromy(R), monodromy(Q)
    if mon_r.group.order_int() != len(R.flags()):
        raise CoveringError("source polytope is not regular")
    if not covers(mon_r, mon_q):
        raise CoveringError("Mon(R) does not cover Mon(Q)")
    start = R.flag_index[tuple(base_r)] if base_r is not None else 0
    target = Q.flag_index[tuple(base_q)] if base_q is not None else 0
    gr = [g.images for g in mon_r.gens]
    gq = [g.images for g in mon_q.gens]
    eta = np.full(mon_r.degree, -1, dtype=np.int64)
    eta[start] = target
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for a, b in zip(gr, gq):
            y = a[x]
            if eta[y] < 0:
                eta[y] = b[eta[x]]
                todo.append(y)
    for a, b in zip(gr, gq):
        if not np.array_equal(eta[a], b[eta]):
            raise AssertionError("flag map does not preserve adjacency")
    cmap = CoveringMap(eta, mon_q.degree)
    if (eta < 0).any() or not cmap.is_surjective():
        raise AssertionError("flag map is not a surjection")
    return cmap


__all__ = ["cayley_table", "polytope_from_group", "covering_map", "CoveringMap", "CoveringError", "is_regular"]

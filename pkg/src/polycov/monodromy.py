"""Monodromy groups of polytopes and the flag-count regularity test."""

from __future__ import annotations

import numpy as np

from .perm import Permutation
from .poset import NotAPolytope, Polytope
from .sggi import Sggi


def monodromy(Q: Polytope) -> Sggi:
    """``Mon(Q)``: generator ``j`` sends each flag to its ``j``-adjacent flag.

    The domain is ``Q.flags()`` in canonical order.
    """
    if Q.rank < 1:
        raise NotAPolytope("monodromy groups are defined for rank >= 1")
    Q.require_valid()
    flags = Q.flags()
    index = Q.flag_index
    gens = []
    for j in range(Q.rank):
        img = np.fromiter((index[Q.adjacent_flag(f, j)] for f in flags), dtype=np.int64, count=len(flags))
        gens.append(Permutation(img, check=False))
    return Sggi(gens, len(flags))


def is_regular(Q: Polytope) -> bool:
    """True iff ``|Mon(Q)|`` equals the number of flags."""
    return monodromy(Q).group.order_int() == len(Q.flags())

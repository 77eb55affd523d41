"""Finite regular covers: facet actions, the 2^K extension, mixing and the cover driver.

Groups that are too large to hold as permutation groups are carried as
:class:`SymbolicGroup` records whose order is exact (for an extension) or an
upper bound (for a mix).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .factored import FactoredInteger
from .group import DEFAULT_ENUM_CAP, CapExceeded, PermGroup
from .perm import Permutation
from .sggi import (
    SchlafliType,
    Sggi,
    check_sggi,
    covers,
    intersection_condition,
    is_string_c_group,
    mix,
    schlafli_type,
    sggi_defects,
)

DEFAULT_POINT_CAP = 10**4
# An explicit extension has a chain at least |A| levels deep; beyond this many
# facets the construction is reported symbolically.
DEFAULT_FACET_CAP = 256

_BLOCK_CELLS = 1 << 22


class NotACGroup(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class SymbolicGroup:
    """A group known only through its rank, type and (bound on the) order."""

    rank: int
    type: SchlafliType
    order: FactoredInteger
    provenance: str
    order_exact: bool = True
    type_exact: bool = True
    # order of <first rank-1 generators>, needed to count facets later
    facet_subgroup_order: FactoredInteger | None = None

    def as_dict(self) -> dict:
        return {
            "rank": self.rank,
            "type": list(self.type.periods),
            "order": str(self.order),
            "order_exact": self.order_exact,
            "type_exact": self.type_exact,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class FacetAction:
    action: PermGroup  # generator t is the action of g_t on facets
    base_facet: int
    facet_count: int
    faithful: bool


def facet_action(G: Sggi, cap: int = DEFAULT_ENUM_CAP) -> FacetAction:
    """Right action of ``G`` on the cosets of ``<g_0, ..., g_{m-2}>``.

    Coset ``Hx`` is keyed by the smallest chain rank among its elements, so
    only the facet subgroup ``H`` has to be enumerated.  The base facet is
    ``H`` itself (index 0).
    """
    m = G.rank
    if m < 1:
        raise ValueError("facet action needs rank >= 1")
    grp = G.group
    H = G.subgroup(range(m - 1))
    helems = H.element_array(cap)
    hsize, d = helems.shape
    gens = [g.images for g in G.gens]

    def keys(reps: np.ndarray) -> np.ndarray:
        out = np.empty(len(reps), dtype=np.int64)
        step = max(1, _BLOCK_CELLS // (hsize * max(d, 1)))
        for s in range(0, len(reps), step):
            chunk = reps[s:s + step]
            # rows h then x, for every h in H and x in the chunk
            rows = chunk[:, helems].reshape(-1, d)
            ranks = grp.rank_rows(rows).reshape(len(chunk), hsize)
            out[s:s + step] = ranks.min(axis=1)
        return out

    ident = np.arange(d, dtype=np.int64)
    reps = [ident]
    index = {int(keys(ident[None, :])[0]): 0}
    images: list[list[int]] = [[] for _ in gens]
    done = 0
    while done < len(reps):
        frontier = np.array(reps[done:])
        done = len(reps)
        for t, g in enumerate(gens):
            moved = g[frontier]
            for x, key in zip(moved, keys(moved)):
                key = int(key)
                if key not in index:
                    index[key] = len(reps)
                    reps.append(x)
                images[t].append(index[key])
    count = len(reps)
    # images[t] was filled frontier by frontier in the same order as reps
    action = PermGroup([Permutation(np.array(img), check=False) for img in images], count)
    faithful = action.order_int() == grp.order_int()
    return FacetAction(action, 0, count, faithful)


def _extension_type(G: Sggi) -> SchlafliType:
    return SchlafliType(schlafli_type(G).periods + (4,))


def _require_c_group(G: Sggi, cap: int) -> None:
    if not check_sggi(G):
        raise NotACGroup("; ".join(sggi_defects(G)))
    if not intersection_condition(G, cap).passed:
        w = intersection_condition(G, cap).witness
        raise NotACGroup(f"intersection condition fails for I={list(w.I)}, J={list(w.J)}")


def extend_2k(
    G: Sggi | SymbolicGroup,
    cap: int = DEFAULT_POINT_CAP,
    facet_cap: int = DEFAULT_FACET_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
    name: str = "K",
) -> Sggi | SymbolicGroup:
    """Rank ``m+1`` string C-group of type ``{p_1,...,p_{m-1},4}`` with facets ``G``.

    Explicitly, the group acts on signed facets ``A x {+1,-1}`` (point
    ``2F`` is ``(F,+1)``, ``2F+1`` is ``(F,-1)``): the old generators permute
    facets and keep signs, the new one flips the sign over the base facet.
    When ``G`` does not act faithfully on its facets, ``G``'s own domain is
    appended so the group stays isomorphic to the wreath product.  Large
    cases come back as a :class:`SymbolicGroup` with order ``|G| * 2^|A|``.
    """
    return _extend(G, cap, facet_cap, enum_cap, name)[0]


def _extend(G, cap, facet_cap, enum_cap, name) -> tuple[Sggi | SymbolicGroup, int | None]:
    if isinstance(G, SymbolicGroup):
        return _extend_symbolic(G, name), None
    _require_c_group(G, enum_cap)
    fa = facet_action(G, enum_cap)
    nA = fa.facet_count
    order = G.order() * FactoredInteger({2: nA})
    extra = 0 if fa.faithful else G.degree
    if nA > facet_cap or 2 * nA + extra > cap:
        sym = SymbolicGroup(
            G.rank + 1, _extension_type(G), order, f"2^{name} ({nA} facets)",
            facet_subgroup_order=G.order(),
        )
        return sym, nA
    gens = []
    signs = np.array([0, 1])
    for t in range(G.rank):
        a = fa.action.generators[t].images
        img = (2 * a[:, None] + signs[None, :]).reshape(-1)
        if extra:
            img = np.concatenate([img, G.gens[t].images + 2 * nA])
        gens.append(Permutation(img, check=False))
    flip = np.arange(2 * nA + extra)
    flip[[2 * fa.base_facet, 2 * fa.base_facet + 1]] = [2 * fa.base_facet + 1, 2 * fa.base_facet]
    gens.append(Permutation(flip, check=False))
    ext = Sggi(gens, 2 * nA + extra)
    if ext.group.order_int() != int(order):
        raise AssertionError(f"2^K order {ext.group.order()} differs from |G|*2^|A| = {order}")
    return ext, nA


def _extend_symbolic(G: SymbolicGroup, name: str) -> SymbolicGroup:
    if G.facet_subgroup_order is None:
        raise ValueError("facet count of a symbolic group is unknown")
    facets = G.order // G.facet_subgroup_order
    if facets.log2() > 1e6:
        raise OverflowError(f"facet count {facets} too large to use as an exponent")
    return SymbolicGroup(
        G.rank + 1, SchlafliType(tuple(G.type.periods) + (4,)), G.order * FactoredInteger({2: int(facets)}),
        f"2^{name}", order_exact=G.order_exact, type_exact=G.type_exact,
        facet_subgroup_order=G.order,
    )


@dataclass
class Stage:
    index: int  # the group covers <g_0, ..., g_index>
    group: Sggi | SymbolicGroup
    mode: str  # "explicit" or "symbolic"
    facet_count: int | None = None
    extension: Sggi | SymbolicGroup | None = None
    c_group: bool | None = None  # None: not verified
    covers_prefix: bool | None = None

    def order(self) -> FactoredInteger:
        return self.group.order if isinstance(self.group, SymbolicGroup) else self.group.order()

    def type(self) -> SchlafliType:
        return self.group.type if isinstance(self.group, SymbolicGroup) else schlafli_type(self.group)

    def as_dict(self) -> dict:
        out = {
            "index": self.index,
            "mode": self.mode,
            "order": str(self.order()),
            "type": list(self.type().periods),
            "facet_count": self.facet_count,
            "c_group": self.c_group,
            "covers_prefix": self.covers_prefix,
        }
        if self.extension is not None:
            ext = self.extension
            out["extension"] = (
                ext.as_dict() if isinstance(ext, SymbolicGroup)
                else {"rank": ext.rank, "type": list(schlafli_type(ext).periods), "order": str(ext.order()),
                      "degree": ext.degree}
            )
        return out


def _mix_symbolic(P: Sggi, ext: Sggi | SymbolicGroup, H_order: FactoredInteger) -> SymbolicGroup:
    ext_order = ext.order if isinstance(ext, SymbolicGroup) else ext.order()
    ext_type = ext.type if isinstance(ext, SymbolicGroup) else schlafli_type(ext)
    lcm_type = SchlafliType(tuple(math.lcm(a, b) for a, b in zip(schlafli_type(P).periods, ext_type.periods)))
    return SymbolicGroup(
        P.rank, lcm_type, P.order() * ext_order, "mix(G prefix, 2^K)",
        order_exact=False, type_exact=False, facet_subgroup_order=H_order,
    )


def bump_stage(
    G: Sggi,
    i: int,
    H: Sggi | SymbolicGroup,
    cap: int = DEFAULT_POINT_CAP,
    facet_cap: int = DEFAULT_FACET_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> Stage:
    """From a string C-group ``H`` covering ``<g_0..g_i>``, one covering ``<g_0..g_{i+1}>``."""
    if not 0 <= i <= G.rank - 2:
        raise ValueError(f"bump index {i} outside 0..{G.rank - 2}")
    P = G.prefix(i + 2)
    if isinstance(H, Sggi):
        if H.rank != i + 1:
            raise PreconditionError(f"H has rank {H.rank}, expected {i + 1}")
        if not covers(H, G.prefix(i + 1)):
            raise PreconditionError(f"H does not cover <g_0..g_{i}>")
        H_order = H.order()
    else:
        H_order = H.order
    ext, facets = _extend(H, cap, facet_cap, enum_cap, f"H{i}")
    if isinstance(ext, SymbolicGroup) or P.degree + ext.degree > cap:
        return Stage(i + 1, _mix_symbolic(P, ext, H_order), "symbolic", facets, ext)
    L = mix(P, ext)
    try:
        c_group = is_string_c_group(L, enum_cap)
    except CapExceeded:
        c_group = None
    return Stage(i + 1, L, "explicit", facets, ext, c_group, covers(L, P))


def bump(G: Sggi, i: int, H: Sggi | SymbolicGroup, cap: int = DEFAULT_POINT_CAP, **kw) -> Sggi | SymbolicGroup:
    return bump_stage(G, i, H, cap, **kw).group


@dataclass
class CoverReport:
    start_prefix: int  # k: <g_0..g_{k-1}> is the largest string C-group prefix
    stages: list[Stage] = field(default_factory=list)
    certified: bool = False
    prefix_scan_capped: bool = False

    @property
    def final(self) -> Stage:
        return self.stages[-1]

    @property
    def mode(self) -> str:
        return self.final.mode

    @property
    def final_order(self) -> FactoredInteger:
        return self.final.order()

    @property
    def final_type(self) -> SchlafliType:
        return self.final.type()

    @property
    def bumps(self) -> list[Stage]:
        return self.stages[1:]

    def as_dict(self) -> dict:
        return {
            "start_prefix": self.start_prefix,
            "prefix_scan_capped": self.prefix_scan_capped,
            "mode": self.mode,
            "final_order": str(self.final_order),
            "final_order_exact": self.mode == "explicit",
            "final_type": list(self.final_type.periods),
            "final_type_exact": self.mode == "explicit",
            "certified": self.certified,
            "stages": [s.as_dict() for s in self.stages],
        }


def largest_c_group_prefix(G: Sggi, enum_cap: int = DEFAULT_ENUM_CAP) -> tuple[int, bool]:
    """Largest ``k`` with ``<g_0..g_{k-1}>`` a string C-group, and whether a cap cut the scan."""
    k = 0
    for j in range(1, G.rank + 1):
        try:
            ok = is_string_c_group(G.prefix(j), enum_cap)
        except CapExceeded:
            return k, True
        if not ok:
            break
        k = j
    return k, False


def regular_cover(
    G: Sggi,
    cap: int = DEFAULT_POINT_CAP,
    facet_cap: int = DEFAULT_FACET_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> CoverReport:
    """A string C-group covering ``G``, built by repeated bumps from the largest C-group prefix."""
    if not check_sggi(G):
        raise PreconditionError("; ".join(sggi_defects(G)))
    if G.rank == 0:
        raise PreconditionError("rank-0 sggi has nothing to cover")
    # k >= 1: a single involution (or identity) always passes
    k, capped = largest_c_group_prefix(G, enum_cap)
    start = G.prefix(k)
    report = CoverReport(k, [Stage(k - 1, start, "explicit", c_group=True, covers_prefix=True)],
                         prefix_scan_capped=capped)
    H: Sggi | SymbolicGroup = start
    for i in range(k - 1, G.rank - 1):
        stage = bump_stage(G, i, H, cap, facet_cap, enum_cap)
        report.stages.append(stage)
        H = stage.group
    if isinstance(H, Sggi):
        report.certified = covers(H, G)
    return report

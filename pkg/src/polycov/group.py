"""Permutation groups backed by a deterministic Schreier-Sims stabilizer chain."""

from __future__ import annotations

import math
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .factored import FactoredInteger
from .perm import Permutation

DEFAULT_ENUM_CAP = 10**7

# Upper bound on (rows x degree) cells materialised at once during enumeration.
_BLOCK_CELLS = 1 << 22


class CapExceeded(Exception):
    """An exhaustive computation would exceed its element cap."""

    def __init__(self, order: FactoredInteger, cap: int, what: str = "group"):
        self.order = order
        self.cap = cap
        self.what = what
        super().__init__(f"{what} has order {order} > cap {cap}")


class _Level:
    """One level of the chain: base point, strong generators, basic orbit."""

    def __init__(self, point: int, degree: int):
        self.point = point
        self.gens: list[np.ndarray] = []
        self.orbit: list[int] = [point]
        self.pos = np.full(degree, -1, dtype=np.int64)
        self.pos[point] = 0
        ident = np.arange(degree, dtype=np.int64)
        self.reps: list[np.ndarray] = [ident]
        self.inv_reps: list[np.ndarray] = [ident]
        # (parent slot, generator index) that first reached each orbit slot
        self.tree: list[tuple[int, int]] = [(-1, -1)]
        self.checked: set[tuple[int, int]] = set()

    def add_gen(self, g: np.ndarray) -> None:
        self.gens.append(g)
        self._grow()

    def _grow(self) -> None:
        # BFS closure of the orbit under all current generators.
        slot = 0
        while slot < len(self.orbit):
            beta = self.orbit[slot]
            for gi, g in enumerate(self.gens):
                gamma = int(g[beta])
                if self.pos[gamma] < 0:
                    self.pos[gamma] = len(self.orbit)
                    self.orbit.append(gamma)
                    rep = g[self.reps[slot]]
                    inv = np.empty_like(rep)
                    inv[rep] = np.arange(len(rep))
                    self.reps.append(rep)
                    self.inv_reps.append(inv)
                    self.tree.append((slot, gi))
            slot += 1


def _schreier_sims(gens: Sequence[np.ndarray], degree: int) -> list[_Level]:
    ident = np.arange(degree, dtype=np.int64)
    gens = [g for g in gens if not np.array_equal(g, ident)]
    levels: list[_Level] = []
    if not gens:
        return levels

    def new_level(g: np.ndarray) -> None:
        moved = np.flatnonzero(g != ident)
        levels.append(_Level(int(moved[0]), degree))

    first = min(int(np.flatnonzero(g != ident)[0]) for g in gens)
    levels.append(_Level(first, degree))
    for g in gens:
        if all(g[lv.point] == lv.point for lv in levels):
            new_level(g)
    for i, lv in enumerate(levels):
        for g in gens:
            if all(g[levels[k].point] == levels[k].point for k in range(i)):
                lv.gens.append(g)
        lv._grow()

    def sift(h: np.ndarray, start: int) -> tuple[np.ndarray, int]:
        for k in range(start, len(levels)):
            lv = levels[k]
            t = lv.pos[h[lv.point]]
            if t < 0:
                return h, k
            h = lv.inv_reps[t][h]
        return h, len(levels)

    def check(i: int) -> tuple[np.ndarray, int] | None:
        lv = levels[i]
        for slot in range(len(lv.orbit)):
            beta = lv.orbit[slot]
            for gi, g in enumerate(lv.gens):
                if (slot, gi) in lv.checked:
                    continue
                gamma_slot = lv.pos[g[beta]]
                if lv.tree[gamma_slot] == (slot, gi):
                    lv.checked.add((slot, gi))
                    continue
                h = lv.inv_reps[gamma_slot][g[lv.reps[slot]]]
                h, j = sift(h, i + 1)
                if j < len(levels) or not np.array_equal(h, ident):
                    return h, j
                lv.checked.add((slot, gi))
        return None

    i = len(levels) - 1
    while i >= 0:
        found = check(i)
        if found is None:
            i -= 1
            continue
        h, j = found
        if j == len(levels):
            new_level(h)
        for k in range(i + 1, j + 1):
            levels[k].add_gen(h)
        i = j
    return levels


class PermGroup:
    """Group generated by permutations of ``{0, ..., degree-1}``.

    The stabilizer chain is built on first use.  Base points are chosen as the
    smallest moved point, so chains and enumeration orders are reproducible.
    """

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree is required for a group with no generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise ValueError(f"generator of degree {g.degree} in a group of degree {degree}")
        self.degree = degree
        self.generators = tuple(gens)

    @classmethod
    def from_arrays(cls, arrays, degree: int | None = None) -> PermGroup:
        return cls([Permutation(a, check=False) for a in arrays], degree)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @cached_property
    def _levels(self) -> list[_Level]:
        return _schreier_sims([g.images for g in self.generators], self.degree)

    @cached_property
    def _tables(self):
        levels = self._levels
        d = self.degree
        base = np.array([lv.point for lv in levels], dtype=np.int64)
        pos = np.full((len(levels), d), -1, dtype=np.int64)
        for i, lv in enumerate(levels):
            pos[i] = lv.pos
        sizes = [len(lv.orbit) for lv in levels]
        offsets = np.zeros(len(levels) + 1, dtype=np.int64)
        offsets[1:] = np.cumsum(sizes)
        if levels:
            uinv = np.vstack([np.array(lv.inv_reps) for lv in levels])
        else:
            uinv = np.zeros((0, d), dtype=np.int64)
        radix = np.ones(len(levels), dtype=np.int64)
        acc = 1
        for i in range(len(levels) - 1, -1, -1):
            radix[i] = acc
            acc *= sizes[i]
        return base, pos, uinv, offsets, radix

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self._levels]

    @property
    def strong_generators(self) -> list[Permutation]:
        seen: dict[bytes, Permutation] = {}
        for lv in self._levels:
            for g in lv.gens:
                seen.setdefault(g.tobytes(), Permutation(g, check=False))
        return list(seen.values())

    def transversal_lengths(self) -> list[int]:
        return [len(lv.orbit) for lv in self._levels]

    def order(self) -> FactoredInteger:
        return FactoredInteger.product(self.transversal_lengths())

    def order_int(self) -> int:
        return math.prod(self.transversal_lengths())

    def is_trivial(self) -> bool:
        return not self._levels

    def _check_degree(self, p: Permutation) -> None:
        if p.degree != self.degree:
            raise ValueError(f"domain sizes differ: {p.degree} vs {self.degree}")

    def contains(self, p: Permutation) -> bool:
        self._check_degree(p)
        return bool(self.rank_rows(p.images[None, :])[0] >= 0)

    def rank_rows(self, rows: np.ndarray) -> np.ndarray:
        """Position of each row in :meth:`enumerate` order, -1 for non-members."""
        base, pos, uinv, offsets, radix = self._tables
        rows = np.asarray(rows, dtype=np.int64)
        if not len(base):
            ident = np.arange(self.degree)
            return np.where((rows == ident).all(axis=1), 0, -1).astype(np.int64)
        return _kernels.sift_rank(rows, base, pos, uinv, offsets, radix)

    def element_blocks(self, cap: int = DEFAULT_ENUM_CAP) -> Iterator[np.ndarray]:
        """All elements as consecutive row blocks, in rank order."""
        n = self.order_int()
        if n > cap:
            raise CapExceeded(self.order(), cap)
        levels = self._levels
        d = self.degree
        max_rows = max(1, _BLOCK_CELLS // max(d, 1))
        # Levels split..end are materialised as one block; the rest are looped.
        split = len(levels)
        block_rows = 1
        while split > 0 and block_rows * len(levels[split - 1].orbit) <= max_rows:
            split -= 1
            block_rows *= len(levels[split].orbit)
        deep = np.arange(d, dtype=np.int64)[None, :]
        for lv in reversed(levels[split:]):
            reps = np.array(lv.reps)
            # deep elements act first, then the coset representative
            deep = reps[:, deep].reshape(-1, d)
        shallow = levels[:split]
        if not shallow:
            yield deep
            return
        radices = [len(lv.orbit) for lv in shallow]
        for digits in np.ndindex(*radices):
            w = np.arange(d, dtype=np.int64)
            for lv, t in zip(reversed(shallow), reversed(digits)):
                w = lv.reps[t][w]
            yield w[deep]

    def element_array(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        blocks = list(self.element_blocks(cap))
        return np.vstack(blocks)

    def enumerate(self, cap: int = DEFAULT_ENUM_CAP) -> list[Permutation]:
        return [Permutation(row, check=False) for row in self.element_array(cap)]

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        todo = [point]
        out = [point]
        while todo:
            x = todo.pop()
            for g in self.generators:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
                    out.append(y)
        return sorted(out)

    def is_transitive(self) -> bool:
        return self.degree == 0 or len(self.orbit(0)) == self.degree


def group_order(G: PermGroup) -> FactoredInteger:
    return G.order()


def contains(G: PermGroup, p: Permutation) -> bool:
    return G.contains(p)


def enumerate_group(G: PermGroup, cap: int = DEFAULT_ENUM_CAP) -> list[Permutation]:
    return G.enumerate(cap)


def intersection_rows(G: PermGroup, H: PermGroup, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """Elements of ``G`` that lie in ``H``, enumerating the smaller group."""
    if G.degree != H.degree:
        raise ValueError(f"domain sizes differ: {G.degree} vs {H.degree}")
    small, big = (G, H) if G.order_int() <= H.order_int() else (H, G)
    if small.order_int() > cap:
        raise CapExceeded(small.order(), cap, "smaller intersection factor")
    hits = []
    for block in small.element_blocks(cap):
        hits.append(block[big.rank_rows(block) >= 0])
    return np.vstack(hits)


def subgroup_intersection(G: PermGroup, H: PermGroup, cap: int = DEFAULT_ENUM_CAP) -> PermGroup:
    """``G`` meet ``H``, generated greedily from the exhaustive member list."""
    members = intersection_rows(G, H, cap)
    gens: list[Permutation] = []
    current = PermGroup([], G.degree)
    remaining = members
    while True:
        remaining = remaining[current.rank_rows(remaining) < 0]
        if not len(remaining):
            break
        gens.append(Permutation(remaining[0], check=False))
        current = PermGroup(gens, G.degree)
    if current.order_int() != len(members):
        raise AssertionError("intersection generators do not span the member set")
    return current

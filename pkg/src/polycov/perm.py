"""Permutations of ``{0, ..., n-1}`` acting on the right.

``compose(a, b)`` means "first ``a``, then ``b``": the point ``x`` goes to
``b(a(x))``.  This matches writing the action of a group element on a flag as
``(F)g``.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np


class Permutation:
    __slots__ = ("_images", "_hash")

    def __init__(self, images: Sequence[int] | np.ndarray, check: bool = True):
        arr = np.array(images, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("a permutation is a flat image array")
        if check and not np.array_equal(np.sort(arr), np.arange(len(arr))):
            raise ValueError(f"not a bijection on {{0..{len(arr) - 1}}}: {arr.tolist()}")
        arr.flags.writeable = False
        self._images = arr
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(np.arange(n), check=False)

    @classmethod
    def from_cycles(cls, n: int, *cycles: Iterable[int]) -> Permutation:
        """``from_cycles(5, (0, 1), (2, 3, 4))`` maps 0->1, 2->3, 3->4, 4->2."""
        img = list(range(n))
        for cyc in cycles:
            cyc = list(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    @property
    def images(self) -> np.ndarray:
        return self._images

    @property
    def degree(self) -> int:
        return len(self._images)

    def __len__(self) -> int:
        return len(self._images)

    def __call__(self, x: int) -> int:
        return int(self._images[x])

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self, k: int) -> Permutation:
        result = Permutation.identity(self.degree)
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> Permutation:
        inv = np.empty_like(self._images)
        inv[self._images] = np.arange(self.degree)
        return Permutation(inv, check=False)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._images, np.arange(self.degree)))

    def moved_points(self) -> np.ndarray:
        return np.flatnonzero(self._images != np.arange(self.degree))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for start in range(self.degree):
            if seen[start] or self._images[start] == start:
                continue
            cyc = [start]
            seen[start] = True
            x = int(self._images[start])
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = int(self._images[x])
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return element_order(self)

    def tolist(self) -> list[int]:
        return self._images.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self._images, other._images)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._images.tobytes())
        return self._hash

    def __repr__(self) -> str:
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation({cyc or '()'}, degree={self.degree})"


def compose(a: Permutation, b: Permutation) -> Permutation:
    if a.degree != b.degree:
        raise ValueError(f"domain sizes differ: {a.degree} vs {b.degree}")
    return Permutation(b.images[a.images], check=False)


def element_order(p: Permutation) -> int:
    """Least ``m >= 1`` with ``p**m`` the identity (lcm of cycle lengths)."""
    return math.lcm(1, *(len(c) for c in p.cycles()))

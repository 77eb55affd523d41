"""Exact integers kept as prime-exponent maps.

Group orders such as ``2^4632 * 3^14 * 5`` are far beyond anything worth
printing in decimal, so orders travel through the package in factored form.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

_TERM = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def _trial_factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    return all(n % q for q in range(3, r + 1, 2))


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer stored as ``{prime: exponent}``.

    Exponents may themselves be huge Python ints; the value is only
    materialised on request via ``int()``.
    """

    factors: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for p, e in self.factors.items():
            p, e = int(p), int(e)
            if e < 0:
                raise ValueError(f"negative exponent {e} for {p}")
            if e == 0:
                continue
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
            clean[p] = e
        object.__setattr__(self, "factors", dict(sorted(clean.items())))

    @classmethod
    def from_int(cls, n: int) -> FactoredInteger:
        n = int(n)
        if n < 1:
            raise ValueError(f"only positive integers can be factored, got {n}")
        return cls(_trial_factor(n))

    @classmethod
    def product(cls, values: Iterable[int | FactoredInteger]) -> FactoredInteger:
        acc = cls()
        for v in values:
            acc = acc * v
        return acc

    @classmethod
    def parse(cls, text: str) -> FactoredInteger:
        """Inverse of ``str``: accepts ``"2^12 * 3^11 * 5"`` and ``"1"``."""
        acc: dict[int, int] = {}
        for term in text.split("*"):
            m = _TERM.match(term)
            if m is None:
                raise ValueError(f"malformed factor {term!r} in {text!r}")
            base, exp = int(m.group(1)), int(m.group(2) or 1)
            if base == 1 and m.group(2) is None:
                continue
            for p, e in _trial_factor(base).items():
                acc[p] = acc.get(p, 0) + e * exp
        return cls(acc)

    def __mul__(self, other: int | FactoredInteger) -> FactoredInteger:
        if isinstance(other, int):
            other = FactoredInteger.from_int(other)
        if not isinstance(other, FactoredInteger):
            return NotImplemented
        acc = dict(self.factors)
        for p, e in other.factors.items():
            acc[p] = acc.get(p, 0) + e
        return FactoredInteger(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> FactoredInteger:
        if k < 0:
            raise ValueError("negative powers are not integers")
        return FactoredInteger({p: e * k for p, e in self.factors.items()})

    def __int__(self) -> int:
        return math.prod(p**e for p, e in self.factors.items())

    def __hash__(self) -> int:
        return hash(tuple(self.factors.items()))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return other >= 1 and self == FactoredInteger.from_int(other)
        if not isinstance(other, FactoredInteger):
            return NotImplemented
        return self.factors == other.factors

    def divides(self, other: FactoredInteger) -> bool:
        return all(other.factors.get(p, 0) >= e for p, e in self.factors.items())

    def __floordiv__(self, other: FactoredInteger) -> FactoredInteger:
        if not other.divides(self):
            raise ValueError(f"{other} does not divide {self}")
        return FactoredInteger({p: e - other.factors.get(p, 0) for p, e in self.factors.items()})

    def log2(self) -> float:
        return sum(e * math.log2(p) for p, e in self.factors.items())

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors.items())

    def __repr__(self) -> str:
        return f"FactoredInteger({str(self)!r})"

"""String groups generated by involutions (sggis) and string C-group checks."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .factored import FactoredInteger
from .group import DEFAULT_ENUM_CAP, CapExceeded, PermGroup, intersection_rows
from .perm import Permutation, compose, element_order


class NotAnSggi(ValueError):
    pass


class Sggi:
    """Ordered involutions ``g_0, ..., g_{n-1}`` on a shared domain.

    Analysis results (chains of generated subgroups, intersection reports) are
    cached on the instance; the generators themselves never change.
    """

    def __init__(self, gens: Sequence[Permutation], degree: int | None = None):
        self.gens: tuple[Permutation, ...] = tuple(gens)
        if degree is None:
            if not self.gens:
                raise ValueError("degree is required for a rank-0 sggi")
            degree = self.gens[0].degree
        if any(g.degree != degree for g in self.gens):
            raise ValueError("generators act on different domains")
        self.degree = degree
        self._subgroups: dict[tuple[int, ...], PermGroup] = {}

    @property
    def rank(self) -> int:
        return len(self.gens)

    def __repr__(self) -> str:
        return f"Sggi(rank={self.rank}, degree={self.degree})"

    def subgroup(self, idx: Sequence[int]) -> PermGroup:
        """``<g_k : k in idx>`` (cached by index set)."""
        key = tuple(sorted(set(idx)))
        if key not in self._subgroups:
            self._subgroups[key] = PermGroup([self.gens[k] for k in key], self.degree)
        return self._subgroups[key]

    @cached_property
    def group(self) -> PermGroup:
        return self.subgroup(range(self.rank))

    def order(self) -> FactoredInteger:
        return self.group.order()

    def prefix(self, k: int) -> Sggi:
        """The sggi ``<g_0, ..., g_{k-1}>`` on the same domain."""
        sub = Sggi(self.gens[:k], self.degree)
        for key, grp in self._subgroups.items():
            if all(i < k for i in key):
                sub._subgroups[key] = grp
        return sub

    def reindexed(self, order: Sequence[int]) -> Sggi:
        return Sggi([self.gens[i] for i in order], self.degree)

    @cached_property
    def _intersection(self) -> dict[int, IntersectionReport]:
        return {}

    def to_json(self) -> dict:
        return {"rank": self.rank, "domain": self.degree, "generators": [g.tolist() for g in self.gens]}

    @classmethod
    def from_json(cls, data: dict) -> Sggi:
        try:
            gens = [Permutation(g) for g in data["generators"]]
            sg = cls(gens, int(data["domain"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed sggi JSON: {exc}") from exc
        if sg.rank != int(data["rank"]):
            raise ValueError(f"rank {data['rank']} does not match {sg.rank} generators")
        return sg

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class SchlafliType:
    periods: tuple[int, ...]

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.periods)) + "}"

    def __iter__(self):
        return iter(self.periods)

    def __len__(self) -> int:
        return len(self.periods)


@dataclass(frozen=True)
class IntersectionWitness:
    I: tuple[int, ...]
    J: tuple[int, ...]
    meet_order: int  # |<I> meet <J>|
    common_order: int  # |<I cap J>|

    def as_dict(self) -> dict:
        return {"I": list(self.I), "J": list(self.J), "meet_order": self.meet_order,
                "common_order": self.common_order}


@dataclass(frozen=True)
class IntersectionReport:
    failures: tuple[IntersectionWitness, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def witness(self) -> IntersectionWitness | None:
        return self.failures[0] if self.failures else None

    def as_dict(self) -> dict:
        return {"passed": self.passed, "failures": [w.as_dict() for w in self.failures]}


def _as_gens(gens) -> tuple[Permutation, ...]:
    return gens.gens if isinstance(gens, Sggi) else tuple(gens)


def sggi_defects(gens) -> list[str]:
    """Human-readable reasons why ``gens`` is not an sggi (empty if it is)."""
    gens = _as_gens(gens)
    out = []
    if len({g.degree for g in gens}) > 1:
        return ["generators act on different domains"]
    for j, g in enumerate(gens):
        if not compose(g, g).is_identity():
            out.append(f"g{j} is not an involution")
    for j, k in itertools.combinations(range(len(gens)), 2):
        if k - j > 1 and compose(gens[j], gens[k]) != compose(gens[k], gens[j]):
            out.append(f"g{j} and g{k} do not commute")
    return out


def check_sggi(gens) -> bool:
    return not sggi_defects(gens)


def schlafli_type(G: Sggi) -> SchlafliType:
    return SchlafliType(tuple(element_order(compose(G.gens[j - 1], G.gens[j])) for j in range(1, G.rank)))


def _pairs(n: int):
    # All unordered pairs of index sets with neither containing the other;
    # comparable pairs satisfy the condition trivially.
    subsets = [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]
    subsets.sort(key=lambda s: (-len(s), sorted(s)))
    for a, b in itertools.combinations(subsets, 2):
        if not (a <= b or b <= a):
            yield tuple(sorted(a)), tuple(sorted(b))


def intersection_condition(G: Sggi, cap: int = DEFAULT_ENUM_CAP) -> IntersectionReport:
    """Compare ``|<I> meet <J>|`` with ``|<I cap J>|`` for every pair of index sets.

    Raises :class:`CapExceeded` (with ``.pair`` set) if a pair's smaller
    factor cannot be enumerated under ``cap``.
    """
    cached = G._intersection.get(cap)
    if cached is not None:
        return cached
    failures = []
    for I, J in _pairs(G.rank):
        common = G.subgroup(sorted(set(I) & set(J))).order_int()
        A, B = G.subgroup(I), G.subgroup(J)
        try:
            meet = len(intersection_rows(A, B, cap))
        except CapExceeded as exc:
            exc.pair = (I, J)
            raise
        if meet != common:
            failures.append(IntersectionWitness(I, J, meet, common))
    report = IntersectionReport(tuple(failures))
    G._intersection[cap] = report
    return report


def is_string_c_group(G: Sggi, cap: int = DEFAULT_ENUM_CAP) -> bool:
    return check_sggi(G) and intersection_condition(G, cap).passed


def mix(G: Sggi, H: Sggi) -> Sggi:
    """Subgroup of ``G x H`` generated by the pairs ``(g_t, h_t)``, on the disjoint union."""
    if G.rank != H.rank:
        raise ValueError(f"cannot mix sggis of ranks {G.rank} and {H.rank}")
    shift = G.degree
    gens = [Permutation(np.concatenate([g.images, h.images + shift]), check=False) for g, h in zip(G.gens, H.gens)]
    return Sggi(gens, G.degree + H.degree)


def covers(Gp: Sggi, G: Sggi) -> bool:
    """Whether ``g'_t -> g_t`` extends to an epimorphism ``Gp -> G``."""
    if Gp.rank != G.rank:
        raise ValueError(f"cannot compare sggis of ranks {Gp.rank} and {G.rank}")
    return mix(Gp, G).group.order_int() == Gp.group.order_int()

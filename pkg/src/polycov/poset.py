"""Ranked posets with least and greatest faces, as models of abstract polytopes.

A :class:`Polytope` is stored as its Hasse diagram.  Nothing is assumed about
the axioms until :meth:`Polytope.validate` is called; pre-polytopes (diamond
condition holds, strong flag-connectivity fails) are representable.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Flag = tuple[str, ...]


class PosetStructureError(ValueError):
    """Malformed input: duplicate ids, unknown ids, ranks out of range."""


class NotAPolytope(ValueError):
    """An operation needing a valid polytope received something else."""


@dataclass(frozen=True)
class Violation:
    axiom: str  # "A", "B" or "C"
    message: str
    witness: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {"axiom": self.axiom, "message": self.message, "witness": list(self.witness)}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.violations

    def axioms_failed(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def as_dict(self) -> dict:
        return {"passed": self.passed, "violations": [v.as_dict() for v in self.violations]}


class Polytope:
    """Finite ranked poset given by faces ``(id, rank)`` and cover pairs."""

    def __init__(self, rank: int, faces: Iterable[tuple[str, int]], covers: Iterable[tuple[str, str]]):
        self.rank = int(rank)
        face_list = [(str(f), int(r)) for f, r in faces]
        ids = [f for f, _ in face_list]
        if len(set(ids)) != len(ids):
            dup = sorted({f for f in ids if ids.count(f) > 1})
            raise PosetStructureError(f"duplicate face ids: {dup}")
        self._rank_of = dict(face_list)
        for f, r in face_list:
            if not -1 <= r <= self.rank:
                raise PosetStructureError(f"face {f!r} has rank {r} outside -1..{self.rank}")
        cover_set = set()
        for lo, hi in covers:
            lo, hi = str(lo), str(hi)
            for x in (lo, hi):
                if x not in self._rank_of:
                    raise PosetStructureError(f"cover pair ({lo!r}, {hi!r}) names unknown face {x!r}")
            cover_set.add((lo, hi))
        self.faces: tuple[str, ...] = tuple(sorted(ids))
        self.covers: tuple[tuple[str, str], ...] = tuple(sorted(cover_set))
        up: dict[str, list[str]] = {f: [] for f in self.faces}
        down: dict[str, list[str]] = {f: [] for f in self.faces}
        for lo, hi in self.covers:
            up[lo].append(hi)
            down[hi].append(lo)
        self._up = {f: tuple(sorted(v)) for f, v in up.items()}
        self._down = {f: tuple(sorted(v)) for f, v in down.items()}

    # ---- basic access -------------------------------------------------

    def rank_of(self, face: str) -> int:
        return self._rank_of[face]

    def faces_of_rank(self, r: int) -> list[str]:
        return [f for f in self.faces if self._rank_of[f] == r]

    def face_counts(self) -> list[int]:
        """Number of faces of rank -1, 0, ..., n."""
        counts = [0] * (self.rank + 2)
        for f in self.faces:
            counts[self._rank_of[f] + 1] += 1
        return counts

    def upper_covers(self, face: str) -> tuple[str, ...]:
        return self._up[face]

    def lower_covers(self, face: str) -> tuple[str, ...]:
        return self._down[face]

    @cached_property
    def _unique_top(self) -> frozenset[str]:
        tops = self.faces_of_rank(self.rank)
        if len(tops) == 1 and all(self._up[f] or f == tops[0] for f in self.faces):
            return frozenset(tops)
        return frozenset()

    @cached_property
    def least(self) -> str:
        lows = self.faces_of_rank(-1)
        if len(lows) != 1:
            raise NotAPolytope(f"expected one face of rank -1, found {len(lows)}")
        return lows[0]

    @cached_property
    def greatest(self) -> str:
        tops = self.faces_of_rank(self.rank)
        if len(tops) != 1:
            raise NotAPolytope(f"expected one face of rank {self.rank}, found {len(tops)}")
        return tops[0]

    def above(self, face: str) -> set[str]:
        seen = {face}
        todo = [face]
        while todo:
            for g in self._up[todo.pop()]:
                if g not in seen:
                    seen.add(g)
                    todo.append(g)
        return seen

    def below(self, face: str) -> set[str]:
        seen = {face}
        todo = [face]
        while todo:
            for g in self._down[todo.pop()]:
                if g not in seen:
                    seen.add(g)
                    todo.append(g)
        return seen

    def leq(self, a: str, b: str) -> bool:
        return b in self.above(a)

    def __repr__(self) -> str:
        return f"Polytope(rank={self.rank}, face_counts={self.face_counts()})"

    # ---- flags --------------------------------------------------------

    @cached_property
    def _middles(self) -> dict[tuple[str, str], tuple[str, ...]]:
        # faces strictly between a and c where rank(c) = rank(a) + 2
        mids: dict[tuple[str, str], list[str]] = defaultdict(list)
        for a in self.faces:
            for b in self._up[a]:
                for c in self._up[b]:
                    mids[a, c].append(b)
        return {k: tuple(sorted(v)) for k, v in mids.items()}

    def _chains(self, lo: str, hi: str) -> list[Flag]:
        """Maximal chains from ``lo`` to ``hi`` in lexicographic id order."""
        target = self._rank_of[hi]
        # everything lies below a unique top face; skip the filter there
        ok = None if hi in self._unique_top else self.below(hi)
        out: list[Flag] = []
        chain = [lo]

        def walk(f: str) -> None:
            if f == hi:
                out.append(tuple(chain))
                return
            if self._rank_of[f] >= target:
                return
            for g in self._up[f]:
                if ok is None or g in ok:
                    chain.append(g)
                    walk(g)
                    chain.pop()

        walk(lo)
        return out

    @cached_property
    def _flags(self) -> tuple[Flag, ...]:
        return tuple(self._chains(self.least, self.greatest))

    def flags(self) -> list[Flag]:
        return list(self._flags)

    @cached_property
    def flag_index(self) -> dict[Flag, int]:
        return {f: i for i, f in enumerate(self._flags)}

    def adjacent_flag(self, flag: Sequence[str], j: int) -> Flag:
        """The flag differing from ``flag`` exactly in its rank-``j`` face."""
        if not 0 <= j <= self.rank - 1:
            raise ValueError(f"adjacency rank {j} outside 0..{self.rank - 1}")
        flag = tuple(flag)
        pos = j + 1  # flag[0] is the rank -1 face
        mids = self._middles.get((flag[pos - 1], flag[pos + 1]), ())
        others = [h for h in mids if h != flag[pos]]
        if len(others) != 1:
            raise NotAPolytope(
                f"no unique {j}-adjacent flag: {len(mids)} faces between "
                f"{flag[pos - 1]!r} and {flag[pos + 1]!r}"
            )
        return flag[:pos] + (others[0],) + flag[pos + 1:]

    # ---- validation ---------------------------------------------------

    def validate(self) -> ValidationReport:
        return self._report

    @cached_property
    def _report(self) -> ValidationReport:
        v: list[Violation] = []
        v.extend(self._check_a())
        v.extend(self._check_b())
        if not any(x.axiom == "A" for x in v):
            v.extend(self._check_c())
        return ValidationReport(tuple(v))

    def _check_a(self) -> list[Violation]:
        out = []
        for r in (-1, self.rank):
            found = self.faces_of_rank(r)
            if len(found) != 1:
                out.append(Violation("A", f"{len(found)} faces of rank {r}, expected exactly 1", tuple(found)))
        for lo, hi in self.covers:
            if self._rank_of[hi] != self._rank_of[lo] + 1:
                out.append(Violation("A", "cover pair does not span one rank step", (lo, hi)))
        for f in self.faces:
            r = self._rank_of[f]
            if r > -1 and not self._down[f]:
                out.append(Violation("A", "face has no lower cover", (f,)))
            if r < self.rank and not self._up[f]:
                out.append(Violation("A", "face has no upper cover", (f,)))
        return out

    def _check_b(self) -> list[Violation]:
        out = []
        for (a, c), mids in sorted(self._middles.items()):
            if self._rank_of[c] != self._rank_of[a] + 2:
                continue
            if len(mids) != 2:
                out.append(Violation("B", f"{len(mids)} faces between, expected 2", (a, c) + mids))
        return out

    def _check_c(self) -> list[Violation]:
        out = []
        for lo in self.faces:
            for hi in sorted(self.above(lo)):
                if self._rank_of[hi] - self._rank_of[lo] < 3:
                    continue
                comps = self._flag_components(lo, hi)
                if comps > 1:
                    out.append(Violation("C", f"flag graph of section has {comps} components", (lo, hi)))
        return out

    def _flag_components(self, lo: str, hi: str) -> int:
        chains = self._chains(lo, hi)
        index = {c: i for i, c in enumerate(chains)}
        parent = list(range(len(chains)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c, i in index.items():
            for pos in range(1, len(c) - 1):
                for h in self._middles.get((c[pos - 1], c[pos + 1]), ()):
                    if h != c[pos]:
                        k = index[c[:pos] + (h,) + c[pos + 1:]]
                        a, b = find(i), find(k)
                        if a != b:
                            parent[max(a, b)] = min(a, b)
        return sum(1 for i in range(len(chains)) if find(i) == i)

    def require_valid(self) -> None:
        rep = self.validate()
        if not rep.passed:
            first = rep.violations[0]
            raise NotAPolytope(f"axiom {first.axiom} fails: {first.message} {list(first.witness)}")

    # ---- derived posets -----------------------------------------------

    def section(self, lo: str, hi: str) -> Polytope:
        """The interval ``hi/lo``, re-ranked so that ``lo`` has rank -1."""
        if not self.leq(lo, hi):
            raise ValueError(f"{lo!r} is not below {hi!r}")
        shift = self._rank_of[lo] + 1
        keep = self.above(lo) & self.below(hi)
        return Polytope(
            self._rank_of[hi] - shift,
            [(f, self._rank_of[f] - shift) for f in keep],
            [(a, b) for a, b in self.covers if a in keep and b in keep],
        )

    def dual(self) -> Polytope:
        n = self.rank
        return Polytope(n, [(f, n - 1 - self._rank_of[f]) for f in self.faces], [(b, a) for a, b in self.covers])

    # ---- serialisation ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "faces": [{"id": f, "rank": self._rank_of[f]} for f in self.faces],
            "cover_relations": [[a, b] for a, b in self.covers],
        }

    @classmethod
    def from_json(cls, data: dict) -> Polytope:
        try:
            return cls(
                data["rank"],
                [(f["id"], f["rank"]) for f in data["faces"]],
                [tuple(p) for p in data["cover_relations"]],
            )
        except (KeyError, TypeError) as exc:
            raise PosetStructureError(f"malformed poset JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def validate(Q: Polytope) -> ValidationReport:
    return Q.validate()


def flags(Q: Polytope) -> list[Flag]:
    return Q.flags()


def adjacent_flag(Q: Polytope, f: Sequence[str], j: int) -> Flag:
    return Q.adjacent_flag(f, j)


def section(Q: Polytope, lo: str, hi: str) -> Polytope:
    return Q.section(lo, hi)


def dual(Q: Polytope) -> Polytope:
    return Q.dual()

"""Closure of a path under a set of unary XFDs, and implication between unary XFDs.

Each XFD ``r -> s`` fires at most once.  It is indexed under every path of its
trigger window ({w : r∩s ≤ w, w ≤ r or w ≤ s}) so that adding a member only
touches the XFDs that member can enable, which keeps the whole computation
linear in the size of Σ.
"""
from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NonUnaryInput
from .paths import ROOT, Path, intersect, prefix_closure
from .semantics import Xfd


@dataclass(frozen=True)
class ClosureSet:
    start: Path
    members: frozenset[Path]
    used: tuple[Xfd, ...]
    steps: int = 0

    def __contains__(self, p: Path) -> bool:
        return p in self.members

    def to_json(self) -> dict:
        return {
            "start": str(self.start),
            "closure": sorted(str(p) for p in self.members),
            "used": sorted(str(f) for f in self.used),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def require_unary(sigma: Iterable[Xfd]) -> list[Xfd]:
    sigma = list(sigma)
    for f in sigma:
        if not f.is_unary:
            raise NonUnaryInput(f"not a unary XFD: {f}")
    return sigma


def trigger_window(r: Path, s: Path) -> list[Path]:
    """Paths p1 with r∩s a prefix of p1 and p1 a prefix of r or of s."""
    n = len(intersect(r, s))
    out = {r.prefix(i) for i in range(n, len(r) + 1)}
    out.update(s.prefix(i) for i in range(n, len(s) + 1))
    return sorted(out, key=len)


def closure(sigma: Sequence[Xfd], p: Path, universe: Iterable[Path] | None = None) -> ClosureSet:
    sigma = require_unary(sigma)
    if universe is None:
        universe = prefix_closure([q for f in sigma for q in f.paths] + [p])
    attrs: dict[Path, list[Path]] = defaultdict(list)
    for u in universe:
        if u.is_attribute:
            attrs[u.parent()].append(u)

    watch: dict[Path, list[int]] = defaultdict(list)
    for i, f in enumerate(sigma):
        for w in trigger_window(f.lhs[0], f.rhs):
            watch[w].append(i)

    members: set[Path] = set()
    fired = [False] * len(sigma)
    queued = [False] * len(sigma)
    queue: deque[int] = deque()

    def enqueue(i: int) -> None:
        if not queued[i]:
            queued[i] = True
            queue.append(i)

    def add(x: Path) -> None:
        if x in members:
            return
        members.add(x)
        for i in watch.get(x, ()):
            enqueue(i)
        if x.is_element:
            for a in x.prefixes()[:-1]:
                add(a)
            for a in attrs.get(x, ()):
                add(a)

    add(p)
    add(ROOT)
    for i, f in enumerate(sigma):
        if intersect(f.lhs[0], f.rhs) == ROOT:
            enqueue(i)

    used = []
    steps = 0
    while queue:
        i = queue.popleft()
        steps += 1
        fired[i] = True
        used.append(sigma[i])
        add(sigma[i].rhs)
    return ClosureSet(p, frozenset(members), tuple(used), steps)


def implies(sigma: Sequence[Xfd], f: Xfd) -> bool:
    if not f.is_unary:
        raise NonUnaryInput(f"not a unary XFD: {f}")
    sigma = require_unary(sigma)
    universe = prefix_closure([q for g in sigma for q in g.paths] + [f.lhs[0], f.rhs])
    return f.rhs in closure(sigma, f.lhs[0], universe).members

"""Derivations with axioms A1-A8 over a finite, prefix-closed path universe.

This is deliberately the slow, obvious engine: a worklist fixpoint over facts
``(lhs set, rhs)`` with one provenance record per fact.  The fast closure
module is tested against it.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .closure import require_unary
from .errors import NonUnaryInput
from .paths import ROOT, Path, intersect, is_prefix, prefix_closure
from .semantics import Xfd

Fact = tuple[frozenset, Path]


def path_universe(sigma: Iterable[Xfd], extra: Iterable[Path] = ()) -> frozenset[Path]:
    paths = [q for f in sigma for q in f.paths]
    return frozenset(prefix_closure(paths + list(extra)))


@dataclass(frozen=True)
class DerivationStep:
    axiom: str
    premises: tuple[Xfd, ...]
    conclusion: Xfd

    def __str__(self) -> str:
        if not self.premises:
            return f"{self.axiom} ⊢ {self.conclusion}"
        prem = ", ".join(f"[{p}]" for p in self.premises)
        return f"{self.axiom}: {prem} ⊢ {self.conclusion}"


def _xfd(fact: Fact) -> Xfd:
    lhs, rhs = fact
    return Xfd(tuple(sorted(lhs)), rhs)


def a5_window(p: Path, q: Path) -> list[Path]:
    n = len(intersect(p, q))
    out = {p.prefix(i) for i in range(n, len(p) + 1)}
    out.update(q.prefix(i) for i in range(n, len(q) + 1))
    return sorted(out)


class Derivations:
    """All XFDs with at most ``max_lhs`` lhs paths derivable from ``sigma``."""

    def __init__(self, sigma: Sequence[Xfd], universe: Iterable[Path], max_lhs: int = 1):
        self.sigma = list(sigma)
        self.universe = sorted(set(universe))
        self.max_lhs = max_lhs
        self.why: dict[Fact, tuple[str, tuple[Fact, ...]]] = {}
        self._by_rhs: dict[Path, set[frozenset]] = defaultdict(set)
        self._unary: dict[Path, set[Path]] = defaultdict(set)
        self._run()

    def _add(self, fact: Fact, tag: str, premises: tuple[Fact, ...] = ()) -> None:
        if fact not in self.why:
            self.why[fact] = (tag, premises)
            self._todo.append(fact)

    def _run(self) -> None:
        U = self.universe
        self._todo: list[Fact] = []
        for f in self.sigma:
            if len(f.lhs) > self.max_lhs:
                raise NonUnaryInput(f"{f} has more than {self.max_lhs} lhs paths")
            self._add((frozenset(f.lhs), f.rhs), "Σ")
        for k in range(1, self.max_lhs + 1):
            for lhs in combinations(U, k):
                for p in lhs:
                    self._add((frozenset(lhs), p), "A1")
        for p in U:
            self._add((frozenset([p]), ROOT), "A8")
            if p.is_element:
                for q in p.prefixes():
                    self._add((frozenset([p]), q), "A6")
            if p.is_attribute:
                self._add((frozenset([p.parent()]), p), "A7")

        while self._todo:
            fact = self._todo.pop()
            lhs, q = fact
            self._by_rhs[q].add(lhs)
            # A3 with this fact as the first premise
            for s in list(self._unary.get(q, ())):
                self._add((lhs, s), "A3", (fact, (frozenset([q]), s)))
            if len(lhs) == 1:
                (p,) = lhs
                self._unary[p].add(q)
                # A3 with this fact as the second premise
                for other in list(self._by_rhs.get(p, ())):
                    self._add((other, q), "A3", ((other, p), fact))
                for p1 in a5_window(p, q):
                    self._add((frozenset([p1]), q), "A5", (fact,))
            if all(intersect(p, q) == ROOT for p in lhs):
                for x in U:
                    self._add((frozenset([x]), q), "A4", (fact,))
            if len(lhs) < self.max_lhs:
                for x in U:
                    if x not in lhs:
                        self._add((lhs | {x}, q), "A2", (fact,))

    # queries ----------------------------------------------------------------

    def closure(self, p: Path) -> frozenset[Path]:
        return frozenset(self._unary.get(p, ()))

    def __contains__(self, f: Xfd) -> bool:
        return (frozenset(f.lhs), f.rhs) in self.why

    def facts(self) -> list[Xfd]:
        return sorted((_xfd(f) for f in self.why), key=str)

    def trace(self, f: Xfd) -> list[DerivationStep]:
        """Steps leading to ``f`` in dependency order; empty if not derivable."""
        target = (frozenset(f.lhs), f.rhs)
        if target not in self.why:
            return []
        out: list[DerivationStep] = []
        done: set[Fact] = set()
        stack: list[tuple[Fact, bool]] = [(target, False)]
        while stack:
            fact, expanded = stack.pop()
            if fact in done:
                continue
            tag, premises = self.why[fact]
            if expanded:
                done.add(fact)
                out.append(DerivationStep(tag, tuple(_xfd(x) for x in premises), _xfd(fact)))
                continue
            stack.append((fact, True))
            for x in reversed(premises):
                if x not in done:
                    stack.append((x, False))
        return out


def axiom_closure(sigma: Sequence[Xfd], p: Path,
                  universe: Optional[Iterable[Path]] = None) -> frozenset[Path]:
    sigma = require_unary(sigma)
    if universe is None:
        universe = path_universe(sigma, [p])
    return Derivations(sigma, universe).closure(p)


def derives(sigma: Sequence[Xfd], f: Xfd) -> bool:
    if not f.is_unary:
        raise NonUnaryInput(f"not a unary XFD: {f}")
    return f.rhs in axiom_closure(sigma, f.lhs[0], path_universe(sigma, f.paths))


def derivation(sigma: Sequence[Xfd], f: Xfd) -> list[DerivationStep]:
    if not f.is_unary:
        raise NonUnaryInput(f"not a unary XFD: {f}")
    sigma = require_unary(sigma)
    return Derivations(sigma, path_universe(sigma, f.paths)).trace(f)


def derive_all(sigma: Sequence[Xfd], universe: Iterable[Path], max_lhs: int = 2) -> list[Xfd]:
    return Derivations(sigma, universe, max_lhs).facts()


def check_step(step: DerivationStep, sigma: Sequence[Xfd] = ()) -> bool:
    """Re-check one step against its axiom's side conditions."""
    c, prem = step.conclusion, step.premises
    tag = step.axiom
    if tag == "Σ":
        return c in sigma or any(set(c.lhs) == set(f.lhs) and c.rhs == f.rhs for f in sigma)
    if tag == "A1":
        return c.rhs in c.lhs and not prem
    if tag == "A2":
        (a,) = prem
        return a.rhs == c.rhs and set(a.lhs) < set(c.lhs) and len(c.lhs) == len(a.lhs) + 1
    if tag == "A3":
        a, b = prem
        return (b.is_unary and a.rhs == b.lhs[0] and set(c.lhs) == set(a.lhs)
                and c.rhs == b.rhs)
    if tag == "A4":
        (a,) = prem
        return (c.is_unary and a.rhs == c.rhs
                and all(intersect(p, a.rhs) == ROOT for p in a.lhs))
    if tag == "A5":
        (a,) = prem
        return a.is_unary and c.is_unary and a.rhs == c.rhs and c.lhs[0] in a5_window(a.lhs[0], a.rhs)
    if tag == "A6":
        return c.is_unary and c.lhs[0].is_element and is_prefix(c.rhs, c.lhs[0])
    if tag == "A7":
        return c.is_unary and c.rhs.is_attribute and c.rhs.parent() == c.lhs[0]
    if tag == "A8":
        return c.is_unary and c.rhs == ROOT
    return False

"""Repairing a complete tree until it satisfies a set of unary XFDs.

Two rewrites exist.  For a non-element rhs the larger of two conflicting values
is overwritten by the smaller; for an element rhs the second end node is merged
into the first and the two ancestor chains are zipped together up to their
common ancestor.  Strings are ordered by their UTF-8 bytes.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .closure import require_unary
from .errors import IncompleteInput
from .model import NodeKind, XmlTree, node_val
from .paths import ExtendedTree, Path, is_complete
from .semantics import SatisfactionContext, Xfd, sigma_paths


def _key(s: str) -> bytes:
    return s.encode("utf-8")


@dataclass
class ChaseMeasure:
    count: dict[Path, int]
    values: dict[Path, Counter]

    def __eq__(self, other) -> bool:
        return self.count == other.count and self.values == other.values


def measure(tree: XmlTree) -> ChaseMeasure:
    ext = ExtendedTree(tree)
    count: dict[Path, int] = {}
    values: dict[Path, Counter] = {}
    for p in ext.paths_present():
        ends = ext.n_nodes(p)
        if p.is_element:
            count[p] = len(ends)
        else:
            values[p] = Counter(tree.nodes[v].text for v in ends)
    return ChaseMeasure(count, values)


def multiset_ge(m: Counter, n: Counter) -> bool:
    """``m`` ≥ ``n`` in the multiset extension of byte order."""
    m_only = m - n
    n_only = n - m
    if not n_only:
        return True
    if not m_only:
        return False
    top = max(m_only, key=_key)
    return all(_key(y) < _key(top) for y in n_only)


def measure_decreased(before: ChaseMeasure, after: ChaseMeasure) -> bool:
    """Every component is non-increasing and at least one strictly decreases."""
    strict = False
    for p in set(before.count) | set(after.count):
        a, b = before.count.get(p, 0), after.count.get(p, 0)
        if b > a:
            return False
        strict |= b < a
    empty = Counter()
    for p in set(before.values) | set(after.values):
        a, b = before.values.get(p, empty), after.values.get(p, empty)
        if a == b:
            continue
        if not multiset_ge(a, b):
            return False
        strict = True
    return strict


def delete_same_atts(tree: XmlTree, v: int) -> list[int]:
    """Keep only the byte-order minimum among same-labelled attribute children of ``v``."""
    best: dict[str, int] = {}
    doomed = []
    for c in tree.children(v):
        node = tree.nodes[c]
        if node.kind is not NodeKind.ATTRIBUTE:
            continue
        keep = best.get(node.label)
        if keep is None:
            best[node.label] = c
        elif _key(node.text) < _key(tree.nodes[keep].text):
            doomed.append(keep)
            best[node.label] = c
        else:
            doomed.append(c)
    for c in doomed:
        tree.delete(c)
    return doomed


def merge_elements(tree: XmlTree, v3: int, v4: int) -> None:
    """Fold ``v4`` into ``v3`` and zip their ancestor chains together."""
    for c in tree.children(v4):
        tree.move(c, v3)
    delete_same_atts(tree, v3)
    vl, vr = tree.parent(v3), tree.parent(v4)
    while vl != vr:
        for c in tree.children(vr):
            if c != v4:
                tree.move(c, vl)
        delete_same_atts(tree, vl)
        tree.delete(v4)
        v4 = vr
        vl, vr = tree.parent(vl), tree.parent(vr)
    # the last emptied node on the right-hand chain is not removed inside the loop
    tree.delete(v4)


@dataclass
class ChaseStep:
    xfd: Xfd
    v3: int
    v4: int
    action: str

    def __str__(self) -> str:
        return f"{self.xfd} | ({self.v3}, {self.v4}) | {self.action}"


@dataclass
class ChaseResult:
    tree: XmlTree
    steps: list[ChaseStep] = field(default_factory=list)
    measures: list[ChaseMeasure] = field(default_factory=list)

    @property
    def log(self) -> list[str]:
        return [str(s) for s in self.steps]


def _first_violation(tree: XmlTree, f: Xfd, literal: bool) -> Optional[tuple[int, int]]:
    ctx = SatisfactionContext(ExtendedTree(tree))
    q = f.rhs
    if literal:
        # the guard as printed: any v1, v2 in N(p) with equal val, v1 = v2 allowed
        if not ctx.ends(f.lhs[0]):
            return None
        ends = ctx.ends(q)
        for i, a in enumerate(ends):
            for b in ends[i + 1:]:
                if node_val(tree, a) != node_val(tree, b):
                    return a, b
        return None
    verdict = ctx.check(f)
    if verdict.ok:
        return None
    w = verdict.witness
    return w.instance_a[-1], w.instance_b[-1]


def _check_input(tree: XmlTree, sigma: Sequence[Xfd], paths: Iterable[Path]) -> None:
    if tree.nulls():
        raise IncompleteInput("the chase needs a tree without marked nulls")
    declared = set(paths) | sigma_paths(sigma)
    # an inconsistent tree is never complete
    if not is_complete(tree, declared):
        raise IncompleteInput("tree is not complete w.r.t. the paths of Σ")


def run_chase(tree: XmlTree, sigma: Sequence[Xfd], paths: Iterable[Path] = (),
              literal: bool = False, check_measure: bool = True) -> ChaseResult:
    """Chase a copy of ``tree``; the input is never mutated.

    ``paths`` adds declared paths for the consistency check on top of those
    mentioned in ``sigma``.
    """
    sigma = require_unary(sigma)
    _check_input(tree, sigma, paths)
    out = ChaseResult(tree.copy())
    t = out.tree
    if check_measure:
        out.measures.append(measure(t))
    changed = True
    while changed:
        changed = False
        for f in sigma:
            while True:
                pair = _first_violation(t, f, literal)
                if pair is None:
                    break
                v3, v4 = pair
                if f.rhs.is_element:
                    merge_elements(t, v3, v4)
                    out.steps.append(ChaseStep(f, v3, v4, f"merge {v4} into {v3}"))
                else:
                    a, b = t.nodes[v3].text, t.nodes[v4].text
                    if _key(b) < _key(a):
                        v3, v4, a, b = v4, v3, b, a
                    t.nodes[v4].text = a
                    out.steps.append(ChaseStep(f, v3, v4, f"val({v4}) := {a!r} (was {b!r})"))
                changed = True
                if check_measure:
                    m = measure(t)
                    if not measure_decreased(out.measures[-1], m):
                        raise AssertionError(f"chase measure did not decrease at step {out.steps[-1]}")
                    out.measures.append(m)
    return out


def chase(tree: XmlTree, sigma: Sequence[Xfd], paths: Iterable[Path] = (),
          literal: bool = False) -> XmlTree:
    return run_chase(tree, sigma, paths, literal).tree

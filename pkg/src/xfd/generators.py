"""Random schemas, trees and XFD sets for property tests and experiment scripts."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .model import TEXT_LABEL, StepKind, XmlTree
from .paths import ROOT, Path, PathStep
from .semantics import SatisfactionContext, Xfd, context_for


@dataclass
class SchemaConfig:
    alphabet: int = 6
    max_depth: int = 4
    p_attribute: float = 0.35
    p_text: float = 0.15


@dataclass
class TreeConfig:
    max_nodes: int = 40
    max_copies: int = 3
    p_skip: float = 0.15     # attach a child two levels down, leaving a gap for a null
    p_omit: float = 0.1      # leave out a declared child entirely
    values: tuple[str, ...] = ("a", "b", "c")


def random_schema(rng: random.Random, cfg: SchemaConfig = SchemaConfig()) -> list[Path]:
    """A prefix-closed path set in which every label occurs at one position only."""
    labels = [f"L{i}" for i in range(rng.randint(min(3, cfg.alphabet), cfg.alphabet))]
    elems = [ROOT]
    out = [ROOT]
    for lab in labels:
        par = rng.choice([e for e in elems if len(e) < cfg.max_depth])
        if rng.random() < cfg.p_attribute:
            out.append(par.child(PathStep(lab, StepKind.ATTRIBUTE)))
        else:
            e = par.child(PathStep(lab))
            elems.append(e)
            out.append(e)
    for e in elems[1:]:
        if rng.random() < cfg.p_text and not any(p.parent() == e for p in out if not p.is_root):
            out.append(e.child(PathStep(TEXT_LABEL, StepKind.TEXT)))
    return sorted(out)


def children_map(schema: list[Path]) -> dict[Path, list[Path]]:
    out: dict[Path, list[Path]] = {p: [] for p in schema}
    for p in schema:
        if not p.is_root:
            out[p.parent()].append(p)
    return out


def random_tree(rng: random.Random, schema: list[Path], cfg: TreeConfig = TreeConfig(),
                complete: bool = False) -> XmlTree:
    """A tree consistent with ``schema``.

    With ``complete`` every element gets every declared child, so the tree is
    complete w.r.t. the schema and contains no gaps; otherwise children may be
    omitted or attached below a missing intermediate element.
    """
    kids = children_map(schema)
    size = {}

    def skeleton(p: Path) -> int:
        if p not in size:
            size[p] = 1 + sum(skeleton(c) for c in kids[p])
        return size[p]

    t = XmlTree()
    budget = [cfg.max_nodes - 1]

    def value() -> str:
        return rng.choice(cfg.values)

    def grow(v: int, p: Path) -> None:
        for c in kids[p]:
            need = skeleton(c)
            if complete:
                copies = 1
                while (copies < cfg.max_copies and not c.is_attribute
                       and budget[0] - need * copies >= skeleton(ROOT) and rng.random() < 0.5):
                    copies += 1
            else:
                if rng.random() < cfg.p_omit or budget[0] < need:
                    continue
                hi = 1 if c.is_attribute else cfg.max_copies
                copies = rng.randint(1, hi)
            for _ in range(copies):
                if budget[0] < 1 and not complete:
                    return
                if (not complete and c.is_element and kids[c] and rng.random() < cfg.p_skip):
                    # skip c: hang one of its children directly under v
                    g = rng.choice(kids[c])
                    if g.is_element:
                        budget[0] -= skeleton(g)
                        w = t.add_element(v, g.last.label)
                        grow(w, g)
                        continue
                budget[0] -= 1
                if c.is_attribute:
                    t.add_attribute(v, c.last.label, value())
                elif c.last.kind is StepKind.TEXT:
                    t.add_text(v, value())
                else:
                    w = t.add_element(v, c.last.label)
                    grow(w, c)

    grow(t.root, ROOT)
    return t


def random_xfd(rng: random.Random, schema: list[Path], max_lhs: int = 1) -> Xfd:
    k = rng.randint(1, max_lhs)
    return Xfd.of(rng.sample(schema, min(k, len(schema))), rng.choice(schema))


def random_sigma(rng: random.Random, schema: list[Path], n: int, max_lhs: int = 1) -> list[Xfd]:
    return [random_xfd(rng, schema, max_lhs) for _ in range(n)]


def satisfied_sigma(rng: random.Random, tree: XmlTree, schema: list[Path], n: int,
                    max_lhs: int = 2, tries: int = 60,
                    ctx: Optional[SatisfactionContext] = None) -> list[Xfd]:
    """Sample up to ``n`` XFDs that ``tree`` satisfies, so Σ is never vacuously violated."""
    ctx = ctx or context_for(tree, schema)
    out: list[Xfd] = []
    for _ in range(tries):
        if len(out) >= n:
            break
        f = random_xfd(rng, schema, max_lhs)
        if ctx.holds(f) and f not in out:
            out.append(f)
    return out


def chain_sigma(n: int) -> list[Xfd]:
    """``root.A.@x0 -> root.A.@x1 -> ... ``, n XFDs in total."""
    return [Xfd.of(f"root.A.@x{i}", f"root.A.@x{i + 1}") for i in range(n)]

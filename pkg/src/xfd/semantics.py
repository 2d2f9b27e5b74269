"""XML functional dependencies and strong satisfaction on the minimal extension."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import PathNotDeclared, PathSyntaxError
from .model import Null, XmlTree, node_val
from .paths import ExtendedTree, Path, as_path, intersect, minimal_extension, prefix_closure


@dataclass(frozen=True)
class Xfd:
    lhs: tuple[Path, ...]
    rhs: Path

    def __post_init__(self):
        if not self.lhs:
            raise PathSyntaxError("an XFD needs at least one lhs path")

    @classmethod
    def of(cls, lhs: Union[str, Path, Sequence[Union[str, Path]]], rhs: Union[str, Path]) -> "Xfd":
        if isinstance(lhs, (str, Path)):
            lhs = [lhs]
        return cls(tuple(as_path(p) for p in lhs), as_path(rhs))

    @classmethod
    def parse(cls, text: str) -> "Xfd":
        if text.count("->") != 1:
            raise PathSyntaxError(f"expected exactly one '->' in {text!r}")
        left, right = text.split("->")
        lhs = [t for t in (s.strip() for s in left.split(",")) if t]
        if not lhs:
            raise PathSyntaxError(f"empty left-hand side in {text!r}")
        return cls.of(lhs, right.strip())

    @property
    def is_unary(self) -> bool:
        return len(self.lhs) == 1

    @property
    def paths(self) -> set[Path]:
        return set(self.lhs) | {self.rhs}

    def __str__(self) -> str:
        return ", ".join(map(str, self.lhs)) + " -> " + str(self.rhs)


def sigma_paths(sigma: Iterable[Xfd]) -> set[Path]:
    out: set[Path] = set()
    for f in sigma:
        out |= f.paths
    return out


@dataclass
class LhsCheck:
    path: Path
    x: int
    y: int
    nodes_x: tuple[int, ...]
    nodes_y: tuple[int, ...]
    vals_x: tuple
    vals_y: tuple


@dataclass
class ViolationWitness:
    xfd: Xfd
    instance_a: tuple[int, ...]
    instance_b: tuple[int, ...]
    failed: list[LhsCheck] = field(default_factory=list)

    def describe(self) -> str:
        a, b = self.instance_a[-1], self.instance_b[-1]
        return f"{self.xfd}: instances ending at {a} and {b} are not separated"


@dataclass
class Satisfied:
    xfd: Xfd

    ok = True

    def __bool__(self):
        return True


@dataclass
class Violated:
    xfd: Xfd
    witness: ViolationWitness

    ok = False

    def __bool__(self):
        return False


Verdict = Union[Satisfied, Violated]


class SatisfactionContext:
    """Caches the per-path indexes of one extended tree for repeated checks."""

    def __init__(self, ext: ExtendedTree):
        self.ext = ext
        self.tree = ext.tree
        self._chains: dict[int, list[int]] = {}
        self._pairs: dict[Path, list[tuple[int, int]]] = {}
        self._groups: dict[tuple[Path, int], dict[int, list[int]]] = {}
        self._masks: dict[tuple[Path, Path], int] = {}

    def chain(self, v: int) -> list[int]:
        c = self._chains.get(v)
        if c is None:
            c = self._chains[v] = self.tree.chain(v)
        return c

    def ends(self, q: Path) -> list[int]:
        return self.ext.n_nodes(q)

    def trigger_pairs(self, q: Path) -> list[tuple[int, int]]:
        """Pairs of distinct instances of ``q`` that impose an obligation.

        Every pair does, except when both end nodes are non-null with equal val.
        """
        pairs = self._pairs.get(q)
        if pairs is None:
            ends = self.ends(q)
            vals = [node_val(self.tree, v) for v in ends]
            pairs = []
            for i in range(len(ends)):
                for j in range(i + 1, len(ends)):
                    if vals[i] == vals[j] and not isinstance(vals[i], Null):
                        continue
                    pairs.append((ends[i], ends[j]))
            self._pairs[q] = pairs
        return pairs

    def _grouped(self, p: Path, depth: int) -> dict[int, list[int]]:
        key = (p, depth)
        g = self._groups.get(key)
        if g is None:
            g = {}
            for v in self.ends(p):
                g.setdefault(self.chain(v)[depth - 1], []).append(v)
            self._groups[key] = g
        return g

    def lhs_nodes(self, x: int, p: Path, depth: int) -> list[int]:
        """``Nodes(x, p)`` for ``x`` at path length ``depth`` on a prefix of ``p``."""
        return self._grouped(p, depth).get(x, [])

    def separates(self, p: Path, q: Path, a: int, b: int) -> bool:
        depth = len(intersect(p, q))
        x, y = self.chain(a)[depth - 1], self.chain(b)[depth - 1]
        if p.is_element:
            return x != y
        nx, ny = self.lhs_nodes(x, p, depth), self.lhs_nodes(y, p, depth)
        vx = [node_val(self.tree, v) for v in nx]
        vy = [node_val(self.tree, v) for v in ny]
        if any(isinstance(v, Null) for v in vx + vy):
            return False
        return not (set(vx) & set(vy))

    def mask(self, p: Path, q: Path) -> int:
        """Bitmask over ``trigger_pairs(q)`` of the pairs that ``p`` separates."""
        key = (p, q)
        m = self._masks.get(key)
        if m is None:
            m = 0
            if p == q:
                m = (1 << len(self.trigger_pairs(q))) - 1
            else:
                for i, (a, b) in enumerate(self.trigger_pairs(q)):
                    if self.separates(p, q, a, b):
                        m |= 1 << i
            self._masks[key] = m
        return m

    def full_mask(self, q: Path) -> int:
        return (1 << len(self.trigger_pairs(q))) - 1

    def holds(self, f: Xfd) -> bool:
        if f.rhs in f.lhs:
            return True
        m = 0
        for p in f.lhs:
            m |= self.mask(p, f.rhs)
        return m == self.full_mask(f.rhs)

    def check(self, f: Xfd) -> Verdict:
        if f.rhs in f.lhs:
            return Satisfied(f)
        q = f.rhs
        for a, b in self.trigger_pairs(q):
            if any(self.separates(p, q, a, b) for p in f.lhs):
                continue
            return Violated(f, self._witness(f, a, b))
        return Satisfied(f)

    def _witness(self, f: Xfd, a: int, b: int) -> ViolationWitness:
        w = ViolationWitness(f, tuple(self.chain(a)), tuple(self.chain(b)))
        for p in f.lhs:
            depth = len(intersect(p, f.rhs))
            x, y = self.chain(a)[depth - 1], self.chain(b)[depth - 1]
            nx = tuple(self.lhs_nodes(x, p, depth))
            ny = tuple(self.lhs_nodes(y, p, depth))
            w.failed.append(LhsCheck(
                p, x, y, nx, ny,
                tuple(node_val(self.tree, v) for v in nx),
                tuple(node_val(self.tree, v) for v in ny)))
        return w


def _declared(paths: Iterable[Path], sigma: Iterable[Xfd]) -> frozenset[Path]:
    declared = frozenset(paths)
    closure = prefix_closure(declared)
    for f in sigma:
        missing = [p for p in f.paths if p not in closure]
        if missing:
            raise PathNotDeclared(f"{f}: undeclared path(s) {', '.join(map(str, sorted(missing)))}")
    return declared


def context_for(tree: XmlTree, paths: Iterable[Path]) -> SatisfactionContext:
    return SatisfactionContext(minimal_extension(tree, paths))


def satisfies(tree: XmlTree, paths: Iterable[Path], f: Xfd,
              ext: Optional[ExtendedTree] = None) -> Verdict:
    """Decide strong satisfaction of ``f``; ``paths`` is the declared path set P."""
    declared = _declared(paths, [f])
    if ext is None:
        ext = minimal_extension(tree, declared)
    return SatisfactionContext(ext).check(f)


@dataclass
class Report:
    entries: list[Verdict]

    @property
    def all_satisfied(self) -> bool:
        return all(e.ok for e in self.entries)

    def violated(self) -> list[Violated]:
        return [e for e in self.entries if not e.ok]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def satisfies_all(tree: XmlTree, paths: Iterable[Path], sigma: Sequence[Xfd]) -> Report:
    """Check every XFD of ``sigma`` against one shared minimal extension."""
    sigma = list(sigma)
    declared = _declared(paths, sigma)
    ctx = SatisfactionContext(minimal_extension(tree, declared))
    return Report([ctx.check(f) for f in sigma])

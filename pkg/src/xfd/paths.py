"""Path algebra, path instances and the minimal extension of a tree.

Text syntax: ``root.Division.@d#`` -- steps separated by ``.``, attributes
prefixed with ``@``, the text step written ``S``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import InconsistentInput, NotAnEndNode, PathSyntaxError
from .model import ROOT_LABEL, TEXT_LABEL, StepKind, XmlTree


@dataclass(frozen=True)
class PathStep:
    label: str
    kind: StepKind = StepKind.ELEMENT
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.label, self.kind.value)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if self.kind is StepKind.ATTRIBUTE:
            return "@" + self.label
        return self.label

    @classmethod
    def parse(cls, token: str) -> "PathStep":
        if not token:
            raise PathSyntaxError("empty path step")
        if token.startswith("@"):
            if len(token) == 1:
                raise PathSyntaxError("attribute step without a name")
            return cls(token[1:], StepKind.ATTRIBUTE)
        if token == TEXT_LABEL:
            return cls(TEXT_LABEL, StepKind.TEXT)
        return cls(token, StepKind.ELEMENT)

    @property
    def is_element(self) -> bool:
        return self.kind is StepKind.ELEMENT


ROOT_STEP = PathStep(ROOT_LABEL)


@dataclass(frozen=True)
class Path:
    steps: tuple[PathStep, ...]
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(self.steps))
        if not self.steps or self.steps[0] != ROOT_STEP:
            raise PathSyntaxError(f"path must start with {ROOT_LABEL!r}: {self}")
        for s in self.steps[1:-1]:
            if not s.is_element:
                raise PathSyntaxError(f"only the last step may be an attribute or text: {self}")
        for s in self.steps[1:]:
            if s == ROOT_STEP:
                raise PathSyntaxError(f"{ROOT_LABEL!r} may only appear first: {self}")

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def _trusted(cls, steps: tuple[PathStep, ...]) -> "Path":
        # prefixes of a valid path are valid, so skip the checks
        p = object.__new__(cls)
        object.__setattr__(p, "steps", steps)
        object.__setattr__(p, "_hash", hash(steps))
        return p

    @classmethod
    def parse(cls, text: str) -> "Path":
        text = text.strip()
        if not text:
            raise PathSyntaxError("empty path")
        return cls(tuple(PathStep.parse(t) for t in text.split(".")))

    def __str__(self) -> str:
        return ".".join(str(s) for s in self.steps)

    def __repr__(self) -> str:
        return f"Path({str(self)!r})"

    def __len__(self) -> int:
        return len(self.steps)

    def __lt__(self, other: "Path") -> bool:
        return str(self) < str(other)

    @property
    def last(self) -> PathStep:
        return self.steps[-1]

    @property
    def is_element(self) -> bool:
        """``Last(p)`` is an element label."""
        return self.last.is_element

    @property
    def is_attribute(self) -> bool:
        return self.last.kind is StepKind.ATTRIBUTE

    @property
    def is_root(self) -> bool:
        return len(self.steps) == 1

    def parent(self) -> "Path":
        """``Parnt(p)``; the root has no parent path."""
        if self.is_root:
            raise ValueError("root has no parent path")
        return Path._trusted(self.steps[:-1])

    def child(self, step: PathStep | str) -> "Path":
        if isinstance(step, str):
            step = PathStep.parse(step)
        return Path(self.steps + (step,))

    def prefix(self, n: int) -> "Path":
        if n < 1:
            raise ValueError("a path prefix has at least one step")
        return Path._trusted(self.steps[:n])

    def prefixes(self) -> list["Path"]:
        """All prefixes, shortest first, including the path itself."""
        return [Path._trusted(self.steps[:i]) for i in range(1, len(self.steps) + 1)]


ROOT = Path((ROOT_STEP,))


def as_path(p: Path | str) -> Path:
    return p if isinstance(p, Path) else Path.parse(p)


def is_prefix(p: Path, q: Path) -> bool:
    return len(p) <= len(q) and q.steps[: len(p)] == p.steps


def is_strict_prefix(p: Path, q: Path) -> bool:
    return len(p) < len(q) and q.steps[: len(p)] == p.steps


def intersect(p: Path, q: Path) -> Path:
    n = 0
    for a, b in zip(p.steps, q.steps):
        if a != b:
            break
        n += 1
    return Path._trusted(p.steps[:n])


def anc(p: Path) -> set[Path]:
    return set(p.prefixes()[:-1])


def att(p: Path, universe: Iterable[Path]) -> set[Path]:
    return {q for q in universe if not q.is_root and q.is_attribute and q.parent() == p}


def prefix_closure(paths: Iterable[Path]) -> set[Path]:
    out: set[Path] = {ROOT}
    for p in paths:
        out.update(p.prefixes())
    return out


# ---------------------------------------------------------------------------
# consistency


def step_of(tree: XmlTree, v: int) -> PathStep:
    node = tree.node(v)
    return PathStep(node.label, node.kind.step_kind)


def _position_key(path: Path, i: int):
    # Leaf steps (attribute, text) are identified together with their parent label,
    # so ``root.A.S`` and ``root.B.S`` do not clash.
    s = path.steps[i]
    if s.is_element:
        return s
    return (path.steps[i - 1], s)


@dataclass
class Consistency:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def _label_positions(paths: Iterable[Path]) -> tuple[dict, list[str]]:
    positions: dict = {}
    problems = []
    for p in sorted(prefix_closure(paths)):
        key = _position_key(p, len(p) - 1)
        seen = positions.setdefault(key, p)
        if seen != p:
            problems.append(
                f"condition (i): label {p.last} ends both {seen} and {p}")
    return positions, problems


def check_consistent(tree: XmlTree, paths: Iterable[Path]) -> Consistency:
    """Check that ``tree`` and ``paths`` agree on where every label sits.

    Condition (i) is applied to the prefix closure of ``paths``; condition (ii)
    asks that every parent/child edge of the tree is witnessed, in order, by a
    declared path.
    """
    paths = list(paths)
    _, problems = _label_positions(paths)
    ordered_pairs = set()
    for p in paths:
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                ordered_pairs.add((p.steps[i], p.steps[j]))
    for v in tree.preorder():
        u = tree.nodes[v].parent
        if u is None:
            continue
        pair = (step_of(tree, u), step_of(tree, v))
        if pair not in ordered_pairs:
            problems.append(
                f"condition (ii): edge {pair[0]} -> {pair[1]} (node {u} -> {v}) is not on any path")
    return Consistency(problems)


# ---------------------------------------------------------------------------
# extended trees


class ExtendedTree:
    """A tree (possibly containing marked nulls) indexed by root-to-node path."""

    def __init__(self, tree: XmlTree, source_paths: Iterable[Path] = ()):
        self.tree = tree
        self.source_paths = frozenset(source_paths)

    @cached_property
    def _index(self) -> tuple[dict[int, Path], dict[Path, list[int]]]:
        tree = self.tree
        path_of: dict[int, Path] = {tree.root: ROOT}
        by_path: dict[Path, list[int]] = defaultdict(list)
        for v in tree.preorder():
            u = tree.nodes[v].parent
            if u is not None:
                path_of[v] = path_of[u].child(step_of(tree, v))
            by_path[path_of[v]].append(v)
        return path_of, dict(by_path)

    def path_of(self, v: int) -> Path:
        return self._index[0][v]

    def n_nodes(self, p: Path) -> list[int]:
        """End nodes of the instances of ``p`` in document order."""
        return list(self._index[1].get(p, ()))

    def paths_present(self) -> set[Path]:
        return set(self._index[1])

    def instance(self, v: int) -> tuple[int, ...]:
        return tuple(self.tree.chain(v))

    def path_instances(self, p: Path) -> list[tuple[int, ...]]:
        return [self.instance(v) for v in self.n_nodes(p)]

    def ancestor_at(self, v: int, depth: int) -> int:
        """Node of ``v``'s instance that sits at path length ``depth``."""
        chain = self.tree.chain(v)
        return chain[depth - 1]


def minimal_extension(tree: XmlTree, paths: Iterable[Path]) -> ExtendedTree:
    """Complete ``tree`` with marked nulls so every declared path is fully instantiated.

    Missing intermediate elements are inserted as null ancestors (shared by all
    siblings that lack the same step), then every node on a declared path
    receives null children for each declared continuation it lacks.
    """
    paths = frozenset(as_path(p) for p in paths)
    report = check_consistent(tree, paths)
    if not report.ok:
        raise InconsistentInput("tree and paths are inconsistent", report.problems)
    positions, _ = _label_positions(paths)
    closure = prefix_closure(paths)
    children_of: dict[Path, list[Path]] = defaultdict(list)
    for c in sorted(closure):
        if not c.is_root:
            children_of[c.parent()].append(c)

    ext = tree.copy()
    canon: dict[int, Path] = {ext.root: ROOT}
    stack = [ext.root]
    while stack:
        u = stack.pop()
        cu = canon[u]
        # 1. insert null ancestors between u and children that skip levels
        pending: dict[PathStep, list[int]] = defaultdict(list)
        for v in list(ext.nodes[u].children):
            target = _target_path(ext, u, cu, v, positions)
            canon[v] = target
            if len(target) > len(cu) + 1:
                pending[target.steps[len(cu)]].append(v)
        for step in sorted(pending, key=str):
            w = ext.add_null(u, step.kind, step.label)
            canon[w] = cu.child(step)
            for v in pending[step]:
                ext.move(v, w)
        # 2. add null children for declared continuations that are missing
        present = {step_of(ext, c) for c in ext.nodes[u].children}
        for c in children_of.get(cu, ()):
            if c.last not in present:
                w = ext.add_null(u, c.last.kind, c.last.label)
                canon[w] = c
        stack.extend(reversed(ext.nodes[u].children))
    return ExtendedTree(ext, paths)


def _target_path(ext: XmlTree, u: int, cu: Path, v: int, positions) -> Path:
    step = step_of(ext, v)
    if step.is_element:
        target = positions.get(step)
    else:
        target = positions.get((cu.last, step))
        if target is None:
            candidates = [p for k, p in positions.items()
                          if isinstance(k, tuple) and k[1] == step and is_strict_prefix(cu, p)]
            if len(candidates) > 1:
                raise InconsistentInput(
                    f"ambiguous position for {step} under {cu}: {sorted(map(str, candidates))}")
            target = candidates[0] if candidates else None
    if target is None or not is_strict_prefix(cu, target):
        raise InconsistentInput(f"node {v} ({step}) cannot be placed below {cu}")
    return target


def extend(tree: XmlTree, paths: Iterable[Path]) -> ExtendedTree:
    return minimal_extension(tree, paths)


def is_complete(tree: XmlTree, paths: Iterable[Path]) -> bool:
    """True iff (tree, paths) is consistent and the minimal extension adds nothing."""
    paths = list(paths)
    if not check_consistent(tree, paths).ok:
        return False
    return len(minimal_extension(tree, paths).tree) == len(tree)


def completeness_violations(tree: XmlTree, paths: Iterable[Path]) -> list[tuple[Path, int]]:
    """Brute-force audit: nodes carrying a label of ``p`` that lie on no instance of ``p``."""
    out = []
    ext = ExtendedTree(tree)
    for p in sorted(set(paths)):
        covered = set()
        for inst in ext.path_instances(p):
            covered.update(inst)
        keys = {_position_key(p, i) for i in range(len(p))}
        for v in tree.preorder():
            par = tree.nodes[v].parent
            s = step_of(tree, v)
            key = s if s.is_element or par is None else (step_of(tree, par), s)
            if key in keys and v not in covered:
                out.append((p, v))
    return out


# ---------------------------------------------------------------------------
# N, AAncestor, Nodes


def path_instances(ext: ExtendedTree, p: Path) -> list[tuple[int, ...]]:
    return ext.path_instances(p)


def n_nodes(ext: ExtendedTree, p: Path) -> set[int]:
    return set(ext.n_nodes(p))


def aancestor(ext: ExtendedTree, v: int, p: Path) -> set[int]:
    if v not in ext.tree or ext.path_of(v) != p:
        raise NotAnEndNode(f"node {v} does not end an instance of {p}")
    return set(ext.instance(v))


def nodes_under(ext: ExtendedTree, v: int, p: Path) -> set[int]:
    return {x for x in ext.n_nodes(p) if v in ext.instance(x)}


def null_count(ext: ExtendedTree | XmlTree) -> int:
    tree = ext.tree if isinstance(ext, ExtendedTree) else ext
    return sum(1 for n in tree.nodes.values() if n.is_null)

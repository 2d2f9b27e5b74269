"""Witness trees for non-implication of unary XFDs.

Every construction here is a "branching" tree: the paths of a prefix-closed
spine get one instance, every other path gets exactly two (one per branch).
Leaf values follow a rule per path: the two copies of a duplicated leaf are
either equal or distinct.  Attributes of spine elements stay on the spine
because an element cannot carry two attributes with one label.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .chase import chase
from .closure import closure, implies, require_unary
from .errors import ActuallyImplied, ConstructionFailed, NonUnaryInput, UnsupportedConstruction, WrongKind
from .model import StepKind, XmlTree
from .paths import ROOT, Path, intersect, is_prefix, is_strict_prefix, prefix_closure
from .semantics import Xfd, satisfies, satisfies_all, sigma_paths


class _Fresh:
    def __init__(self):
        self.n = 0

    def __call__(self) -> str:
        s = f"v{self.n:03d}"
        self.n += 1
        return s


def branch_tree(universe: Iterable[Path], spine: Iterable[Path],
                equal: Callable[[Path], bool] = lambda p: False) -> XmlTree:
    """Build a branching tree over a prefix-closed ``universe``.

    Paths in ``spine`` (closed under prefixes) get one instance; all others
    get two.  ``equal(p)`` says whether the two copies of a duplicated
    attribute/text path carry the same value.
    """
    universe = sorted(set(universe), key=lambda p: (len(p), str(p)))
    spine = set(spine) | {ROOT}
    for p in universe:
        if p.is_attribute and p.parent() in spine:
            spine.add(p)
    for p in spine:
        if not p.is_root and p.parent() not in spine:
            raise ValueError(f"spine is not prefix-closed at {p}")
    fresh = _Fresh()
    t = XmlTree()
    inst: dict[Path, list[int]] = {ROOT: [t.root]}
    for p in universe:
        if p.is_root:
            continue
        parents = inst[p.parent()]
        if p in spine:
            owners = parents
        elif p.parent() in spine:
            owners = parents * 2
        else:
            owners = parents
        if p.is_element:
            inst[p] = [t.add_element(v, p.last.label) for v in owners]
            continue
        same = equal(p) and len(owners) == 2
        first = fresh()
        vals = [first] + [first if same else fresh() for _ in owners[1:]]
        add = t.add_attribute if p.is_attribute else (lambda v, _l, s: t.add_text(v, s))
        inst[p] = [add(v, p.last.label, s) for v, s in zip(owners, vals)]
    return t


def _universe(sigma: Sequence[Xfd], extra: Iterable[Path] = ()) -> set[Path]:
    return prefix_closure(list(sigma_paths(sigma)) + list(extra))


def build_T0(sigma: Sequence[Xfd], p: Path) -> XmlTree:
    """Two instances of every non-root path; the two ``p`` values agree, all others differ."""
    sigma = require_unary(sigma)
    if p.is_element:
        raise WrongKind(f"{p} ends in an element; use build_T1")
    U = _universe(sigma, [p])
    root_atts = sorted(u for u in U if u.is_attribute and u.parent() == ROOT)
    if root_atts:
        raise UnsupportedConstruction(
            f"attribute paths directly under root cannot have two instances: {', '.join(map(str, root_atts))}")
    return branch_tree(U, {ROOT}, lambda u: u == p)


def build_T1(sigma: Sequence[Xfd], p: Path) -> XmlTree:
    """One instance for ``p``, its prefixes and their attributes; two for everything else."""
    sigma = require_unary(sigma)
    if not p.is_element:
        raise WrongKind(f"{p} does not end in an element; use build_T0")
    U = _universe(sigma, [p])
    return branch_tree(U, set(p.prefixes()))


# ---------------------------------------------------------------------------
# counterexamples


@dataclass
class BranchSpec:
    case: str
    p_min: Path
    p_branch: Path
    reading: str
    spine: frozenset[Path]
    equal_p: bool = False


@dataclass
class Witness:
    tree: XmlTree
    spec: Optional[BranchSpec]
    paths: frozenset[Path]
    attempts: list[str] = field(default_factory=list)


def _spine_below(U: set[Path], roots: Iterable[Path]) -> frozenset[Path]:
    roots = list(roots)
    return frozenset(u for u in U if not any(is_prefix(r, u) for r in roots))


def classify(p: Path, q: Path) -> str:
    if p.is_element:
        return "AB" if is_strict_prefix(p, q) else "AA"
    if is_strict_prefix(q, p):
        return "BB"
    return "BA"


def branch_specs(sigma: Sequence[Xfd], f: Xfd) -> list[BranchSpec]:
    """Candidate constructions in order of preference for ``sigma`` ⊬ ``f``."""
    p, q = f.lhs[0], f.rhs
    U = _universe(sigma, [p, q])
    to_q = {u: q in closure(sigma, u, U).members for u in U}
    meets = sorted({intersect(u, q) for u in U if to_q[u]}, key=len)
    p_min = meets[0]
    case = classify(p, q)
    if case == "AB":
        above = [m for m in meets if is_strict_prefix(p, m)]
        # with no such meet the branch sits directly below p
        p_min = above[0] if above else q
    elif case == "BA":
        case = "BAA" if is_strict_prefix(p_min.parent(), p) else "BAB"
    equal_p = case in ("BAA", "BB")
    p_branch = p_min.parent()
    specs = []
    if not p_branch.is_root:
        specs.append(BranchSpec(case, p_min, p_branch, "literal", _spine_below(U, [p_branch]), equal_p))
    specs.append(BranchSpec(case, p_min, p_branch, "below", _spine_below(U, [p_min]), equal_p))
    kids = [u for u in U if not u.is_root and u.parent() == p_branch and not u.is_attribute]
    if len(kids) > 1:
        specs.append(BranchSpec(case, p_min, p_branch, "fan", _spine_below(U, kids), equal_p))
    return specs


def _value_rule(sigma, U, p, q, equal_p) -> Callable[[Path], bool]:
    to_q = {u: q in closure(sigma, u, U).members for u in U if not u.is_element}

    def equal(u: Path) -> bool:
        if u == p and equal_p:
            return True
        return not to_q[u]
    return equal


def _verified(tree: XmlTree, paths, sigma, f) -> bool:
    return satisfies_all(tree, paths, sigma).all_satisfied and not satisfies(tree, paths, f).ok


def find_counterexample(sigma: Sequence[Xfd], f: Xfd) -> Witness:
    sigma = require_unary(sigma)
    if not f.is_unary:
        raise NonUnaryInput(f"not a unary XFD: {f}")
    if implies(sigma, f):
        raise ActuallyImplied(f"{f} follows from Σ")
    p, q = f.lhs[0], f.rhs
    U = _universe(sigma, [p, q])
    paths = frozenset(U)
    attempts = []
    for spec in branch_specs(sigma, f):
        tree = branch_tree(U, spec.spine, _value_rule(sigma, U, p, q, spec.equal_p))
        if _verified(tree, paths, sigma, f):
            return Witness(tree, spec, paths, attempts)
        attempts.append(f"{spec.case}/{spec.reading}")

    # chase the canonical tree of the closure proofs with p -> P+
    plus = closure(sigma, p, U).members
    try:
        start = build_T1(sigma, p) if p.is_element else build_T0(sigma, p)
    except UnsupportedConstruction:
        start = None
    if start is not None:
        extra = [Xfd((p,), x) for x in sorted(plus)]
        tree = chase(start, list(sigma) + extra, U)
        if _verified(tree, paths, sigma, f):
            return Witness(tree, None, paths, attempts)
        attempts.append("chase")
    raise ConstructionFailed(f"no candidate witness for {f} verified; tried {', '.join(attempts)}")


def counterexample(sigma: Sequence[Xfd], f: Xfd) -> XmlTree:
    """A tree that satisfies ``sigma`` and violates ``f``, checked before it is returned."""
    return find_counterexample(sigma, f).tree

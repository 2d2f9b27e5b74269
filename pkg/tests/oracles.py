"""Independent, deliberately naive re-implementations used as test oracles."""
from itertools import combinations

from xfd.model import Null, node_val
from xfd.paths import intersect, step_of


def instances(tree, p):
    """Every node sequence from the root that spells ``p`` (no indexes, pure search)."""
    out = [[tree.root]]
    for step in p.steps[1:]:
        nxt = []
        for inst in out:
            for c in tree.children(inst[-1]):
                if step_of(tree, c) == step:
                    nxt.append(inst + [c])
        out = nxt
    return out


def N(tree, p):
    return {inst[-1] for inst in instances(tree, p)}


def aancestor(tree, v, p):
    out = set()
    for inst in instances(tree, p):
        if inst[-1] == v:
            out |= set(inst)
    return out


def nodes(tree, v, p):
    return {x for x in N(tree, p) if v in aancestor(tree, x, p)}


def satisfies(tree, f):
    """Strong satisfaction evaluated literally on an already-extended tree."""
    q = f.rhs
    if q in f.lhs:
        return True
    for a, b in combinations(instances(tree, q), 2):
        va, vb = node_val(tree, a[-1]), node_val(tree, b[-1])
        if va == vb and not isinstance(va, Null):
            continue
        ok = False
        for p in f.lhs:
            meet = N(tree, intersect(p, q))
            (x,) = [v for v in a if v in meet]
            (y,) = [v for v in b if v in meet]
            if p.is_element:
                ok = x != y
            else:
                nx, ny = nodes(tree, x, p), nodes(tree, y, p)
                vx = {node_val(tree, v) for v in nx}
                vy = {node_val(tree, v) for v in ny}
                nulls = any(isinstance(v, Null) for v in vx | vy)
                ok = not nulls and not (vx & vy)
            if ok:
                break
        if not ok:
            return False
    return True


def canonical(tree, v=None, keep_null_index=False):
    """Order-insensitive shape of a subtree; null indices dropped unless asked for."""
    v = tree.root if v is None else v
    n = tree.nodes[v]
    idx = n.null_index if keep_null_index else None
    kids = tuple(sorted(canonical(tree, c, keep_null_index) for c in n.children))
    return (n.kind.value, n.label, n.text or "", idx or 0, kids)

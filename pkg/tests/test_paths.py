import random

import pytest
from hypothesis import given, strategies as st

import oracles
from xfd.errors import InconsistentInput, NotAnEndNode, PathSyntaxError
from xfd.generators import random_schema, random_tree
from xfd.model import NodeKind, StepKind, XmlTree
from xfd.paths import (ROOT, ExtendedTree, Path, PathStep, aancestor, anc, att, check_consistent,
                       completeness_violations, intersect, is_complete, is_prefix, is_strict_prefix,
                       minimal_extension, n_nodes, nodes_under, path_instances)
from xfd.samples import division

P = Path.parse


def test_parse_and_print():
    p = P("root.Division.@d#")
    assert str(p) == "root.Division.@d#"
    assert p.is_attribute and not p.is_element
    assert P("root.A.S").last.kind is StepKind.TEXT
    assert P("root").is_root


@pytest.mark.parametrize("bad", ["", "A.B", "root.@x.B", "root.S.A", "root.A.root", "root..A", "root.@"])
def test_parse_rejects(bad):
    with pytest.raises(PathSyntaxError):
        P(bad)


def test_prefix_relations():
    assert is_strict_prefix(P("root.Division"), P("root.Division.Section"))
    p = P("root.A.B")
    assert is_prefix(p, p) and not is_strict_prefix(p, p)
    assert not is_prefix(P("root.A"), P("root.B"))


def test_intersect_examples():
    assert intersect(P("root.Division.@d#"), P("root.Division.Employee.Emp#.S")) == P("root.Division")
    assert intersect(P("root.A"), P("root.B")) == ROOT
    p = P("root.A.B")
    assert intersect(p, p) == p


def test_attribute_and_element_steps_differ():
    assert intersect(P("root.A.@x"), P("root.A.x")) == P("root.A")


def test_anc_and_att():
    assert anc(ROOT) == set()
    assert anc(P("root.A.B")) == {ROOT, P("root.A")}
    assert anc(P("root.A.D.E")) == {ROOT, P("root.A"), P("root.A.D")}
    assert att(P("root.A"), [P("root.A.@x"), P("root.A.B")]) == {P("root.A.@x")}
    assert att(P("root.Q"), [P("root.A.@x")]) == set()
    universe = [P("root.A.@A#"), P("root.A.B.@B#"), P("root.A.B.C.@C#"), P("root.A.B"), P("root.A.B.D")]
    assert att(P("root.A.B"), universe) == {P("root.A.B.@B#")}


path_strategy = st.lists(st.sampled_from(["A", "B", "C", "@x", "@y", "S"]), max_size=5).map(
    lambda xs: ["root"] + [x for i, x in enumerate(xs) if i == len(xs) - 1 or not (x.startswith("@") or x == "S")]
).map(lambda xs: P(".".join(xs)))


@given(path_strategy, path_strategy)
def test_intersect_laws(p, q):
    m = intersect(p, q)
    assert m == intersect(q, p)
    assert is_prefix(m, p) and is_prefix(m, q)
    # maximality by brute force over all common prefixes
    common = [x for x in p.prefixes() if is_prefix(x, q)]
    assert len(m) == max(len(x) for x in common)


def test_consistency_ok_and_failures():
    t = XmlTree()
    a = t.add_element(t.root, "A")
    t.add_element(a, "B")
    assert check_consistent(t, [P("root.A.B")]).ok
    bad = check_consistent(XmlTree(), [P("root.A.B"), P("root.C.B")])
    assert not bad.ok and "condition (i)" in bad.problems[0]
    d = t.add_element(a, "D")
    t.add_element(d, "E")
    res = check_consistent(t, [P("root.A.B"), P("root.A.D")])
    assert not res.ok and any("condition (ii)" in x for x in res.problems)


def test_text_under_different_parents_is_consistent():
    assert check_consistent(XmlTree(), [P("root.A.S"), P("root.B.S")]).ok


def test_extension_of_inconsistent_input_raises():
    with pytest.raises(InconsistentInput):
        minimal_extension(XmlTree(), [P("root.A.B"), P("root.C.B")])


def test_complete_tree_is_unchanged():
    t = XmlTree()
    a = t.add_element(t.root, "A")
    t.add_attribute(a, "x", "1")
    ext = minimal_extension(t, [P("root.A.@x")])
    assert len(ext.tree) == len(t) and not ext.tree.nulls()
    assert is_complete(t, [P("root.A.@x")])


def test_missing_attribute_gets_null():
    t = XmlTree()
    a = t.add_element(t.root, "A")
    ext = minimal_extension(t, [P("root.A.@x")])
    (n,) = ext.tree.nulls()
    assert ext.tree.parent(n) == a
    assert ext.tree.nodes[n].kind is NodeKind.NULL_ATTRIBUTE and ext.tree.nodes[n].null_index == 1


def test_original_tree_not_mutated():
    s = division()
    before = oracles.canonical(s.tree, keep_null_index=True)
    minimal_extension(s.tree, s.paths)
    assert oracles.canonical(s.tree, keep_null_index=True) == before


def _named_extension():
    s = division()
    ext = minimal_extension(s.tree, s.paths)
    (bot,) = [v for v in ext.tree.nulls() if ext.tree.nodes[v].label == "Section"]
    return s.names, ext, bot


def test_division_functions():
    n, ext, bot = _named_extension()
    assert ext.tree.nodes[bot].null_index == 1
    assert n_nodes(ext, P("root.Division.Section")) == {n["v4"], bot}
    emp = P("root.Division.Section.Employee")
    assert n_nodes(ext, emp) == {n["v7"], n["v5"]}
    assert aancestor(ext, n["v5"], emp) == {n["vr"], n["v2"], bot, n["v5"]}
    assert nodes_under(ext, n["vr"], emp) == {n["v5"], n["v7"]}
    assert nodes_under(ext, n["v1"], emp) == {n["v7"]}
    assert nodes_under(ext, n["v7"], P("root.Division")) == set()
    assert len(path_instances(ext, P("root.Division.Section"))) == 2
    assert path_instances(ext, ROOT) == [(n["vr"],)]


def test_aancestor_rejects_non_end_node():
    n, ext, _ = _named_extension()
    with pytest.raises(NotAnEndNode):
        aancestor(ext, n["v1"], P("root.Division.Section.Employee"))
    assert aancestor(ext, n["vr"], ROOT) == {n["vr"]}


def test_two_children_two_instances():
    t = XmlTree()
    a = t.add_element(t.root, "A")
    t.add_element(a, "B")
    t.add_element(a, "B")
    assert len(path_instances(ExtendedTree(t), P("root.A.B"))) == 2


def test_shared_null_ancestor():
    # two Employees skipping the same Section share one null Section
    t = XmlTree()
    d = t.add_element(t.root, "Division")
    t.add_element(d, "Employee")
    t.add_element(d, "Employee")
    ext = minimal_extension(t, [P("root.Division.Section.Employee")])
    (bot,) = ext.tree.nulls()
    assert len(ext.tree.children(bot)) == 2


def _random_case(seed):
    rng = random.Random(seed)
    schema = random_schema(rng)
    return rng, schema, random_tree(rng, schema)


@given(st.integers(0, 100_000))
def test_extension_passes_completeness_audit(seed):
    _, schema, t = _random_case(seed)
    ext = minimal_extension(t, schema)
    assert completeness_violations(ext.tree, schema) == []
    assert is_complete(ext.tree, schema)
    # every original node is still there, and every new node is a null
    assert set(t.nodes) <= set(ext.tree.nodes)
    assert all(ext.tree.nodes[v].is_null for v in set(ext.tree.nodes) - set(t.nodes))


@given(st.integers(0, 100_000))
def test_extension_independent_of_input_order(seed):
    rng, schema, t = _random_case(seed)
    shuffled = list(schema)
    rng.shuffle(shuffled)
    u = t.copy()
    for node in u.nodes.values():
        rng.shuffle(node.children)
    a = minimal_extension(t, schema).tree
    b = minimal_extension(u, shuffled).tree
    assert oracles.canonical(a) == oracles.canonical(b)


@given(st.integers(0, 100_000))
def test_index_matches_naive_search(seed):
    _, schema, t = _random_case(seed)
    ext = minimal_extension(t, schema)
    for p in schema:
        assert n_nodes(ext, p) == oracles.N(ext.tree, p)
        for v in n_nodes(ext, p):
            assert aancestor(ext, v, p) == oracles.aancestor(ext.tree, v, p)


@given(st.integers(0, 100_000))
def test_unique_meet_node_on_every_instance(seed):
    _, schema, t = _random_case(seed)
    ext = minimal_extension(t, schema)
    for q in schema:
        for inst in path_instances(ext, q):
            for p in schema:
                meet = n_nodes(ext, intersect(p, q))
                assert sum(1 for v in inst if v in meet) == 1

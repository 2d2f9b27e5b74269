import random

import pytest
from hypothesis import given, strategies as st

import oracles
from xfd.errors import InconsistentInput, PathNotDeclared, PathSyntaxError
from xfd.generators import random_schema, random_tree, random_xfd
from xfd.model import StepKind, XmlTree
from xfd.paths import Path, minimal_extension
from xfd.samples import axiom_demo, department
from xfd.semantics import SatisfactionContext, Xfd, satisfies, satisfies_all

P = Path.parse


def test_xfd_parse_and_print():
    f = Xfd.parse("root.A.@x, root.B -> root.C")
    assert f.lhs == (P("root.A.@x"), P("root.B")) and f.rhs == P("root.C")
    assert str(f) == "root.A.@x, root.B -> root.C"
    assert not f.is_unary
    for bad in ["root.A", "root.A -> ", "-> root.A", "root.A -> root.B -> root.C"]:
        with pytest.raises(PathSyntaxError):
            Xfd.parse(bad)


def test_trivial_xfd_always_holds():
    s = department()
    f = Xfd.parse("root.Department.@Head, root.Department -> root.Department")
    assert satisfies(s.tree, s.paths, f).ok


def test_subject_number_determines_name():
    s = department()
    f = s.sigma[0]
    assert satisfies(s.tree, s.paths, f).ok
    t = s.tree.copy()
    t.nodes[s.names["v18"]].text = "s1"
    v = satisfies(t, s.paths, f)
    assert not v.ok
    w = v.witness
    assert {w.instance_a[-1], w.instance_b[-1]} == {s.names["v22"], s.names["v23"]}


def test_head_determines_department():
    s = department()
    f = s.sigma[1]
    assert satisfies(s.tree, s.paths, f).ok
    t = s.tree.copy()
    t.nodes[s.names["v8"]].text = "h1"
    v = satisfies(t, s.paths, f)
    assert not v.ok
    (chk,) = v.witness.failed
    assert (chk.x, chk.y) == (s.names["v1"], s.names["v2"])


def test_two_lhs_paths():
    s = department()
    assert satisfies(s.tree, s.paths, s.sigma[2]).ok


def test_single_instance_is_satisfied():
    t = XmlTree()
    a = t.add_element(t.root, "A")
    t.add_attribute(a, "x", "1")
    assert satisfies(t, [P("root.A.@x"), P("root.B")], Xfd.parse("root.B -> root.A.@x")).ok


def test_axiom_demo_tree_satisfies_sigma():
    s = axiom_demo()
    assert satisfies_all(s.tree, s.paths, s.sigma).all_satisfied


def test_empty_sigma_report():
    s = axiom_demo()
    r = satisfies_all(s.tree, s.paths, [])
    assert r.all_satisfied and len(r) == 0


def test_undeclared_path():
    s = department()
    with pytest.raises(PathNotDeclared):
        satisfies(s.tree, s.paths, Xfd.parse("root.Department.@Zip -> root.Department"))


def test_inconsistent_input():
    t = XmlTree()
    a = t.add_element(t.root, "A")
    t.add_element(a, "Q")
    with pytest.raises(InconsistentInput):
        satisfies(t, [P("root.A.@x")], Xfd.parse("root.A.@x -> root.A"))


def test_two_null_ends_still_impose_an_obligation():
    # two A elements both missing @x: the nulls differ, so the pair must be separated
    t = XmlTree()
    t.add_element(t.root, "A")
    t.add_element(t.root, "A")
    paths = [P("root.A.@x"), P("root.@k")]
    t.add_attribute(t.root, "k", "same")
    assert not satisfies(t, paths, Xfd.parse("root.@k -> root.A.@x")).ok
    assert satisfies(t, paths, Xfd.parse("root.A -> root.A.@x")).ok


def test_null_in_lhs_never_separates():
    t = XmlTree()
    for v in ("1", "2"):
        a = t.add_element(t.root, "A")
        t.add_attribute(a, "y", v)
    # the first A has no @x, so its extension carries a null there
    paths = [P("root.A.@x"), P("root.A.@y")]
    a2 = t.children(t.root)[1]
    t.add_attribute(a2, "x", "k")
    assert not satisfies(t, paths, Xfd.parse("root.A.@x -> root.A.@y")).ok


def _case(seed, max_lhs=3):
    rng = random.Random(seed)
    schema = random_schema(rng)
    tree = random_tree(rng, schema)
    sigma = [random_xfd(rng, schema, max_lhs) for _ in range(rng.randint(1, 5))]
    return rng, schema, tree, sigma


@given(st.integers(0, 1_000_000))
def test_matches_naive_oracle(seed):
    _, schema, tree, sigma = _case(seed)
    assert len(tree) <= 40
    ext = minimal_extension(tree, schema)
    report = satisfies_all(tree, schema, sigma)
    for f, v in zip(sigma, report):
        assert v.ok == oracles.satisfies(ext.tree, f), str(f)


@given(st.integers(0, 1_000_000))
def test_bitmask_and_pairwise_checks_agree(seed):
    _, schema, tree, sigma = _case(seed)
    ctx = SatisfactionContext(minimal_extension(tree, schema))
    for f in sigma:
        assert ctx.holds(f) == ctx.check(f).ok


@given(st.integers(0, 1_000_000))
def test_adding_lhs_paths_never_breaks_satisfaction(seed):
    rng, schema, tree, sigma = _case(seed)
    ctx = SatisfactionContext(minimal_extension(tree, schema))
    for f in sigma:
        extra = rng.choice(schema)
        g = Xfd(f.lhs + (extra,), f.rhs)
        if ctx.holds(f):
            assert ctx.holds(g)


@given(st.integers(0, 1_000_000))
def test_witness_is_a_real_violation(seed):
    _, schema, tree, sigma = _case(seed)
    ctx = SatisfactionContext(minimal_extension(tree, schema))
    for f in sigma:
        v = ctx.check(f)
        if v.ok:
            continue
        a, b = v.witness.instance_a[-1], v.witness.instance_b[-1]
        assert a != b
        assert not any(ctx.separates(p, f.rhs, a, b) for p in f.lhs)

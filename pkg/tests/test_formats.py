import random
import warnings

import pytest
from hypothesis import given, strategies as st

from oracles import canonical
from xfd.errors import KindConflict, ParseError, UnsupportedConstruct
from xfd.formats import (NULL_RE, ConstraintFile, parse_constraints, parse_paths, parse_xml,
                         render_constraints, serialize_tree)
from xfd.generators import random_schema, random_sigma, random_tree
from xfd.model import NodeKind, XmlTree
from xfd.paths import ExtendedTree, Path, minimal_extension
from xfd.samples import AXIOM_SIGMA, division
from xfd.semantics import Xfd

P = Path.parse


def _only_child(tree, v=None):
    (c,) = tree.children(tree.root if v is None else v)
    return c


def test_attribute_on_document_element():
    t = parse_xml('<Division d#="d1"/>')
    d = _only_child(t)
    assert t.nodes[d].label == "Division"
    (a,) = t.children(d)
    assert t.nodes[a].kind is NodeKind.ATTRIBUTE
    assert (t.nodes[a].label, t.nodes[a].text) == ("d#", "d1")


def test_text_becomes_s_child():
    t = parse_xml("<Employee><Emp#>e1</Emp#></Employee>")
    assert ExtendedTree(t).n_nodes(P("root.Employee.Emp#.S"))
    s = _only_child(t, _only_child(t, _only_child(t)))
    assert t.nodes[s].kind is NodeKind.TEXT and t.nodes[s].text == "e1"


def test_root_document_element_is_the_root():
    t = parse_xml('<root a="1"><A/><A/></root>')
    assert len(t.children(t.root)) == 3


def test_entities_comments_and_declaration():
    t = parse_xml('<?xml version="1.0"?>\n<!-- c --><A x="&lt;&amp;&#65;&#x42;">a &gt; b<!-- c --></A>')
    a = _only_child(t)
    vals = sorted((t.nodes[c].kind.value, t.nodes[c].text) for c in t.children(a))
    assert ("attribute", "<&AB") in vals
    assert any(v == "a > b" for _, v in vals)


@pytest.mark.parametrize("doc, cls", [
    ('<?pi x?><A/>', UnsupportedConstruct),
    ('<A><?pi x?></A>', UnsupportedConstruct),
    ('<A><![CDATA[x]]></A>', UnsupportedConstruct),
    ('<!DOCTYPE A><A/>', UnsupportedConstruct),
    ('<x:A/>', UnsupportedConstruct),
    ('<A xmlns="u"/>', UnsupportedConstruct),
    ('', ParseError),
    ('<A>', ParseError),
    ('<A></B>', ParseError),
    ('<A x=1/>', ParseError),
    ('<A x="1" x="2"/>', ParseError),
    ('<A>&nope;</A>', ParseError),
    ('<A/><B/>', ParseError),
    ('<A><root/></A>', ParseError),
])
def test_rejects(doc, cls):
    with pytest.raises(cls):
        parse_xml(doc)


def test_error_position():
    with pytest.raises(ParseError) as e:
        parse_xml("<A>\n  <B>\n</A>")
    assert e.value.line == 3


def test_null_element_token():
    s = division()
    ext = minimal_extension(s.tree, s.paths)
    text = serialize_tree(ext)
    assert '<__null_1__ __label__="Section">' in text
    back = parse_xml(text)
    assert canonical(back, keep_null_index=True) == canonical(ext.tree, keep_null_index=True)


def test_adjacent_texts_survive():
    t = XmlTree()
    a = t.add_element(t.root, "A")
    t.add_text(a, "x")
    t.add_text(a, "y")
    assert canonical(parse_xml(serialize_tree(t))) == canonical(t)


def test_serialize_is_byte_stable():
    s = division()
    assert serialize_tree(s.tree) == serialize_tree(s.tree.copy())


_value = st.text(st.characters(blacklist_categories=("Cs", "Cc")), min_size=1, max_size=8).filter(
    lambda s: s.strip() and not NULL_RE.match(s))


@given(st.integers(0, 10**6), st.data())
def test_round_trip_random_trees(seed, data):
    rng = random.Random(seed)
    schema = random_schema(rng)
    t = random_tree(rng, schema)
    for n in t.nodes.values():
        if n.text is not None:
            n.text = data.draw(_value)
    assert canonical(parse_xml(serialize_tree(t))) == canonical(t)
    ext = minimal_extension(t, schema).tree
    assert canonical(parse_xml(serialize_tree(ext)), keep_null_index=True) == canonical(ext, keep_null_index=True)


def test_single_constraint():
    cf = parse_constraints("root.A.@A# -> root.A.B.@B#\n")
    assert cf.xfds == [Xfd.parse("root.A.@A# -> root.A.B.@B#")]
    assert cf.declared_paths == {P("root.A.@A#"), P("root.A.B.@B#")}


def test_axiom_example_constraints():
    cf = parse_constraints("\n".join(AXIOM_SIGMA))
    assert len(cf.xfds) == 3
    assert all(p in cf.declared_paths for f in cf.xfds for p in f.paths)


def test_binary_lhs():
    (f,) = parse_constraints("root.A, root.A.B.C -> root.G").xfds
    assert len(f.lhs) == 2


def test_comments_paths_and_duplicates():
    text = "// header\npath root.X.@k\nroot.A -> root.B // trailing\n\nroot.A -> root.B\n"
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        cf = parse_constraints(text)
    assert len(cf.xfds) == 1 and len(cf.warnings) == 1 and w
    assert P("root.X.@k") in cf.declared_paths


def test_constraint_errors():
    with pytest.raises(ParseError) as e:
        parse_constraints("root.A -> root.B\nroot.A root.B\n")
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_constraints("root.A -> B\n")
    with pytest.raises(KindConflict):
        parse_constraints("root.A.@x -> root.x\n")


def test_parse_paths_list():
    assert parse_paths("root.A.B\n// c\nroot.A.@x\n") == {P("root.A.B"), P("root.A.@x")}
    with pytest.raises(ParseError):
        parse_paths("A.B\n")


@given(st.integers(0, 10**6))
def test_constraint_round_trip(seed):
    rng = random.Random(seed)
    schema = random_schema(rng)
    sigma = list(dict.fromkeys(random_sigma(rng, schema, rng.randint(0, 6), max_lhs=3)))
    cf = ConstraintFile(set().union(*(f.paths for f in sigma), {schema[-1]}), sigma)
    once = parse_constraints(render_constraints(cf))
    assert once == cf
    assert parse_constraints(render_constraints(once)) == once

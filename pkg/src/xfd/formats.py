"""Text formats: an XML subset, the constraint language, and tree serialization.

The XML reader is hand-written because the labels used for XFD work (``d#``,
``Emp#``) are not legal XML names and would be rejected by a conforming parser.
It accepts elements, attributes, character data, comments and an XML
declaration; anything else is reported as unsupported.

Marked nulls are written with a reserved token ``__null_<j>__``: a null element
becomes ``<__null_j__ __label__="Section">``, a null attribute or text node
carries the token as its value.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import KindConflict, ParseError, PathSyntaxError, UnsupportedConstruct
from .model import ROOT_LABEL, NodeKind, StepKind, XmlTree
from .paths import ExtendedTree, Path
from .semantics import Xfd

NULL_RE = re.compile(r"__null_(\d+)__\Z")
LABEL_ATTR = "__label__"

_ENTITIES = {"lt": "<", "gt": ">", "amp": "&", "quot": '"', "apos": "'"}
_NAME_STOP = set(" \t\r\n/>=<\"'")


def null_token(j: int) -> str:
    return f"__null_{j}__"


# ---------------------------------------------------------------------------
# XML reader


class _Reader:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def where(self, i: Optional[int] = None) -> tuple[int, int]:
        i = self.i if i is None else i
        line = self.s.count("\n", 0, i) + 1
        col = i - (self.s.rfind("\n", 0, i) + 1) + 1
        return line, col

    def error(self, msg: str, cls=ParseError, i: Optional[int] = None):
        return cls(msg, *self.where(i))

    def eof(self) -> bool:
        return self.i >= len(self.s)

    def startswith(self, tok: str) -> bool:
        return self.s.startswith(tok, self.i)

    def skip_ws(self) -> None:
        while self.i < len(self.s) and self.s[self.i] in " \t\r\n":
            self.i += 1

    def expect(self, tok: str) -> None:
        if not self.startswith(tok):
            raise self.error(f"expected {tok!r}")
        self.i += len(tok)

    def name(self) -> str:
        start = self.i
        while self.i < len(self.s) and self.s[self.i] not in _NAME_STOP:
            self.i += 1
        if start == self.i:
            raise self.error("expected a name")
        return self.s[start:self.i]

    def decode(self, raw: str, at: int) -> str:
        out = []
        k = 0
        while k < len(raw):
            c = raw[k]
            if c == "<":
                raise self.error("'<' not allowed here", i=at + k)
            if c != "&":
                out.append(c)
                k += 1
                continue
            end = raw.find(";", k)
            if end < 0:
                raise self.error("unterminated entity reference", i=at + k)
            ent = raw[k + 1:end]
            if ent.startswith("#x"):
                out.append(chr(int(ent[2:], 16)))
            elif ent.startswith("#"):
                out.append(chr(int(ent[1:])))
            elif ent in _ENTITIES:
                out.append(_ENTITIES[ent])
            else:
                raise self.error(f"unknown entity &{ent};", i=at + k)
            k = end + 1
        return "".join(out)

    def skip_misc(self, allow_decl: bool) -> None:
        while True:
            self.skip_ws()
            if self.startswith("<!--"):
                end = self.s.find("-->", self.i + 4)
                if end < 0:
                    raise self.error("unterminated comment")
                self.i = end + 3
            elif self.startswith("<?"):
                if allow_decl and self.startswith("<?xml") and self.i == self.s.find("<?"):
                    end = self.s.find("?>", self.i)
                    if end < 0:
                        raise self.error("unterminated XML declaration")
                    self.i = end + 2
                    allow_decl = False
                else:
                    raise self.error("processing instructions are not supported", UnsupportedConstruct)
            elif self.startswith("<!DOCTYPE"):
                raise self.error("DOCTYPE declarations are not supported", UnsupportedConstruct)
            else:
                return


def _check_name(r: _Reader, name: str, at: int) -> None:
    if ":" in name or name == "xmlns":
        raise r.error(f"namespaces are not supported ({name})", UnsupportedConstruct, at)


def parse_xml(text: str) -> XmlTree:
    """Parse the supported XML subset into a tree under a synthetic ``root``.

    A document element named ``root`` is taken to be the root itself, which is
    how multi-child roots are written out.
    """
    r = _Reader(text)
    r.skip_misc(allow_decl=True)
    if r.eof():
        raise r.error("empty document")
    if not r.startswith("<"):
        raise r.error("expected the document element")
    tree = XmlTree()
    _element(r, tree, None)
    r.skip_misc(allow_decl=False)
    if not r.eof():
        raise r.error("content after the document element")
    return tree


def _element(r: _Reader, tree: XmlTree, parent: Optional[int]) -> None:
    at = r.i
    r.expect("<")
    tag = r.name()
    _check_name(r, tag, at)
    attrs: list[tuple[str, str, int]] = []
    while True:
        r.skip_ws()
        if r.startswith("/>") or r.startswith(">"):
            break
        a_at = r.i
        name = r.name()
        _check_name(r, name, a_at)
        r.skip_ws()
        r.expect("=")
        r.skip_ws()
        if r.eof() or r.s[r.i] not in "\"'":
            raise r.error("attribute value must be quoted")
        q = r.s[r.i]
        end = r.s.find(q, r.i + 1)
        if end < 0:
            raise r.error("unterminated attribute value")
        value = r.decode(r.s[r.i + 1:end], r.i + 1)
        r.i = end + 1
        if any(a[0] == name for a in attrs):
            raise r.error(f"duplicate attribute {name}", i=a_at)
        attrs.append((name, value, a_at))

    m = NULL_RE.match(tag)
    if m:
        label = next((v for n, v, _ in attrs if n == LABEL_ATTR), None)
        if label is None:
            raise r.error(f"null element {tag} lacks {LABEL_ATTR}", i=at)
        attrs = [a for a in attrs if a[0] != LABEL_ATTR]
        if parent is None:
            raise r.error("the document element cannot be a null", i=at)
        v = tree.add_null(parent, StepKind.ELEMENT, label, int(m.group(1)))
    elif parent is None and tag == ROOT_LABEL:
        v = tree.root
    else:
        if tag == ROOT_LABEL:
            raise r.error("'root' is reserved for the document element", i=at)
        v = tree.add_element(tree.root if parent is None else parent, tag)
    for name, value, _ in attrs:
        m = NULL_RE.match(value)
        if m:
            tree.add_null(v, StepKind.ATTRIBUTE, name, int(m.group(1)))
        else:
            tree.add_attribute(v, name, value)

    if r.startswith("/>"):
        r.i += 2
        return
    r.expect(">")
    buf: list[str] = []
    buf_at = r.i

    def flush():
        raw = "".join(buf)
        buf.clear()
        if raw.strip():
            s = r.decode(raw, buf_at)
            m = NULL_RE.match(s)
            if m:
                tree.add_null(v, StepKind.TEXT, "S", int(m.group(1)))
            else:
                tree.add_text(v, s)

    while True:
        if r.eof():
            raise r.error(f"unclosed element <{tag}>", i=at)
        if r.startswith("</"):
            flush()
            r.i += 2
            close = r.name()
            if close != tag:
                raise r.error(f"mismatched end tag </{close}> for <{tag}>")
            r.skip_ws()
            r.expect(">")
            return
        if r.startswith("<!--"):
            flush()
            end = r.s.find("-->", r.i + 4)
            if end < 0:
                raise r.error("unterminated comment")
            r.i = end + 3
            buf_at = r.i
        elif r.startswith("<![CDATA["):
            raise r.error("CDATA sections are not supported", UnsupportedConstruct)
        elif r.startswith("<?"):
            raise r.error("processing instructions are not supported", UnsupportedConstruct)
        elif r.startswith("<!"):
            raise r.error("declarations are not supported", UnsupportedConstruct)
        elif r.startswith("<"):
            flush()
            _element(r, tree, v)
            buf_at = r.i
        else:
            nxt = r.s.find("<", r.i)
            nxt = len(r.s) if nxt < 0 else nxt
            if not buf:
                buf_at = r.i
            buf.append(r.s[r.i:nxt])
            r.i = nxt


# ---------------------------------------------------------------------------
# XML writer


def _esc_text(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _esc_attr(s: str) -> str:
    return _esc_text(s).replace('"', "&quot;")


def serialize_tree(tree: XmlTree | ExtendedTree, indent: str = "  ") -> str:
    """Write ``tree`` with ``root`` as document element; attributes sorted by label."""
    if isinstance(tree, ExtendedTree):
        tree = tree.tree
    out: list[str] = []

    def leaf_value(c) -> str:
        return null_token(c.null_index) if c.is_null else c.text

    def emit(v: int, depth: int, inline: bool) -> str:
        node = tree.nodes[v]
        if node.kind is NodeKind.NULL_ELEMENT:
            tag = null_token(node.null_index)
            head = [f'{LABEL_ATTR}="{_esc_attr(node.label)}"']
        else:
            tag = node.label
            head = []
        kids = [tree.nodes[c] for c in node.children]
        atts = sorted((c for c in kids if c.kind.step_kind is StepKind.ATTRIBUTE), key=lambda c: c.label)
        head += [f'{c.label}="{_esc_attr(leaf_value(c))}"' for c in atts]
        open_tag = "<" + " ".join([tag] + head)
        content = [c for c in kids if c.kind.step_kind is not StepKind.ATTRIBUTE]
        if not content:
            return open_tag + "/>"
        if inline or any(c.kind.step_kind is StepKind.TEXT for c in content):
            parts = []
            prev_text = False
            for c in content:
                is_text = c.kind.step_kind is StepKind.TEXT
                if is_text and prev_text:
                    parts.append("<!---->")  # keeps adjacent text nodes apart
                parts.append(_esc_text(leaf_value(c)) if is_text else emit(c.id, 0, True))
                prev_text = is_text
            return open_tag + ">" + "".join(parts) + f"</{tag}>"
        pad = indent * (depth + 1)
        body = "\n".join(pad + emit(c.id, depth + 1, False) for c in content)
        return open_tag + ">\n" + body + "\n" + indent * depth + f"</{tag}>"

    out.append(emit(tree.root, 0, False))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# constraint files


@dataclass
class ConstraintFile:
    declared_paths: set[Path] = field(default_factory=set)
    xfds: list[Xfd] = field(default_factory=list)
    explicit_paths: set[Path] = field(default_factory=set)
    warnings: list[str] = field(default_factory=list)

    def __eq__(self, other) -> bool:
        return self.declared_paths == other.declared_paths and self.xfds == other.xfds


def check_kinds(paths: Iterable[Path]) -> None:
    """Raise KindConflict if a label is used both as an element and as an attribute."""
    elements: dict[str, Path] = {}
    attributes: dict[str, Path] = {}
    for p in paths:
        for i, step in enumerate(p.steps):
            if step.kind is StepKind.ELEMENT:
                elements.setdefault(step.label, p)
            elif step.kind is StepKind.ATTRIBUTE:
                attributes.setdefault(step.label, p)
    both = sorted(set(elements) & set(attributes))
    if both:
        lab = both[0]
        raise KindConflict(f"label {lab!r} is an element in {elements[lab]} and an attribute in {attributes[lab]}")


def _strip_comment(line: str) -> str:
    k = line.find("//")
    return line if k < 0 else line[:k]


def parse_constraints(text: str) -> ConstraintFile:
    cf = ConstraintFile()
    seen: set[Xfd] = set()
    for n, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        try:
            if line.startswith("path ") or line.startswith("path\t"):
                p = Path.parse(line[5:])
                cf.explicit_paths.add(p)
                cf.declared_paths.add(p)
                continue
            if "->" not in line:
                raise PathSyntaxError(f"expected 'p1, ..., pk -> q' or 'path p', got {line!r}")
            f = Xfd.parse(line)
        except PathSyntaxError as e:
            raise ParseError(str(e), n, 1) from None
        if f in seen:
            msg = f"line {n}: duplicate XFD {f} ignored"
            cf.warnings.append(msg)
            warnings.warn(msg, stacklevel=2)
            continue
        seen.add(f)
        cf.xfds.append(f)
        cf.declared_paths |= f.paths
    try:
        check_kinds(cf.declared_paths)
    except KindConflict as e:
        raise KindConflict(str(e)) from None
    return cf


def parse_paths(text: str) -> set[Path]:
    """A plain list of paths, one per line; XFD lines contribute their paths too."""
    return parse_constraints(
        "\n".join(l if "->" in l or l.strip().startswith("path") or not _strip_comment(l).strip()
                  else "path " + l.strip() for l in text.splitlines())).declared_paths


def render_constraints(cf: ConstraintFile) -> str:
    lines = [f"path {p}" for p in sorted(cf.declared_paths)]
    lines += [str(f) for f in cf.xfds]
    return "\n".join(lines) + "\n"

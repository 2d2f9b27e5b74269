"""Node-labelled XML trees with element, attribute and text nodes, plus marked nulls.

Element values are node identities, attribute/text values are strings, and a
marked null compares equal only to itself.
"""
from __future__ import annotations

import copy
import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .errors import UnknownNode

ROOT_LABEL = "root"
TEXT_LABEL = "S"


class StepKind(enum.Enum):
    ELEMENT = "E"
    ATTRIBUTE = "A"
    TEXT = "S"


class NodeKind(enum.Enum):
    ELEMENT = "element"
    ATTRIBUTE = "attribute"
    TEXT = "text"
    NULL_ELEMENT = "null-element"
    NULL_ATTRIBUTE = "null-attribute"
    NULL_TEXT = "null-text"

    @property
    def is_null(self) -> bool:
        return self in _NULL_KINDS

    @property
    def step_kind(self) -> StepKind:
        return _STEP_KIND[self]

    @property
    def is_leaf_kind(self) -> bool:
        return self.step_kind is not StepKind.ELEMENT

    @classmethod
    def for_step(cls, kind: StepKind, null: bool = False) -> "NodeKind":
        table = _NULL_FOR if null else _PLAIN_FOR
        return table[kind]


_NULL_KINDS = {NodeKind.NULL_ELEMENT, NodeKind.NULL_ATTRIBUTE, NodeKind.NULL_TEXT}
_STEP_KIND = {
    NodeKind.ELEMENT: StepKind.ELEMENT,
    NodeKind.NULL_ELEMENT: StepKind.ELEMENT,
    NodeKind.ATTRIBUTE: StepKind.ATTRIBUTE,
    NodeKind.NULL_ATTRIBUTE: StepKind.ATTRIBUTE,
    NodeKind.TEXT: StepKind.TEXT,
    NodeKind.NULL_TEXT: StepKind.TEXT,
}
_PLAIN_FOR = {
    StepKind.ELEMENT: NodeKind.ELEMENT,
    StepKind.ATTRIBUTE: NodeKind.ATTRIBUTE,
    StepKind.TEXT: NodeKind.TEXT,
}
_NULL_FOR = {
    StepKind.ELEMENT: NodeKind.NULL_ELEMENT,
    StepKind.ATTRIBUTE: NodeKind.NULL_ATTRIBUTE,
    StepKind.TEXT: NodeKind.NULL_TEXT,
}


@dataclass(frozen=True)
class NodeIdentity:
    node: int


@dataclass(frozen=True)
class Str:
    text: str


@dataclass(frozen=True)
class Null:
    index: int


Value = Union[NodeIdentity, Str, Null]


@dataclass
class XmlNode:
    id: int
    kind: NodeKind
    label: str
    text: Optional[str] = None
    children: list[int] = field(default_factory=list)
    parent: Optional[int] = None
    null_index: Optional[int] = None

    @property
    def is_null(self) -> bool:
        return self.kind.is_null


@dataclass
class Violation:
    node: int
    rule: str
    detail: str = ""


class XmlTree:
    """A mutable tree; callers treat instances as values and copy before rewriting.

    Node ids come from a monotone counter and are never reused, so a deleted id
    stays retired for the lifetime of the tree.
    """

    def __init__(self) -> None:
        self.nodes: dict[int, XmlNode] = {}
        self._next_id = 0
        self._next_null = 1
        self.root = self._new(NodeKind.ELEMENT, ROOT_LABEL, None, None)

    def _new(self, kind, label, text, null_index) -> int:
        nid = self._next_id
        self._next_id += 1
        self.nodes[nid] = XmlNode(nid, kind, label, text, null_index=null_index)
        return nid

    # construction -------------------------------------------------------

    def add_element(self, parent: int, label: str) -> int:
        return self._attach(parent, self._new(NodeKind.ELEMENT, label, None, None))

    def add_attribute(self, parent: int, label: str, value: str) -> int:
        return self._attach(parent, self._new(NodeKind.ATTRIBUTE, label, value, None))

    def add_text(self, parent: int, value: str) -> int:
        return self._attach(parent, self._new(NodeKind.TEXT, TEXT_LABEL, value, None))

    def add_null(self, parent: Optional[int], kind: StepKind, label: str,
                 index: Optional[int] = None) -> int:
        if index is None:
            index = self._next_null
        self._next_null = max(self._next_null, index + 1)
        nid = self._new(NodeKind.for_step(kind, null=True), label, None, index)
        if parent is not None:
            self._attach(parent, nid)
        return nid

    def add_node(self, parent: int, kind: NodeKind, label: str,
                 text: Optional[str] = None, null_index: Optional[int] = None) -> int:
        if kind.is_null:
            return self.add_null(parent, kind.step_kind, label, null_index)
        return self._attach(parent, self._new(kind, label, text, None))

    def _attach(self, parent: int, child: int) -> int:
        self.node(parent).children.append(child)
        self.nodes[child].parent = parent
        return child

    def move(self, child: int, new_parent: int) -> None:
        node = self.node(child)
        if node.parent is not None:
            self.nodes[node.parent].children.remove(child)
        self._attach(new_parent, child)

    def delete(self, nid: int) -> None:
        """Remove ``nid`` and its whole subtree."""
        node = self.node(nid)
        if nid == self.root:
            raise ValueError("cannot delete the root")
        if node.parent is not None:
            self.nodes[node.parent].children.remove(nid)
        stack = [nid]
        while stack:
            cur = stack.pop()
            stack.extend(self.nodes[cur].children)
            del self.nodes[cur]

    def copy(self) -> "XmlTree":
        return copy.deepcopy(self)

    # queries ------------------------------------------------------------

    def node(self, nid: int) -> XmlNode:
        try:
            return self.nodes[nid]
        except KeyError:
            raise UnknownNode(nid) from None

    def __contains__(self, nid: int) -> bool:
        return nid in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def parent(self, nid: int) -> Optional[int]:
        return self.node(nid).parent

    def children(self, nid: int) -> list[int]:
        return list(self.node(nid).children)

    def preorder(self, start: Optional[int] = None) -> Iterator[int]:
        stack = [self.root if start is None else start]
        while stack:
            nid = stack.pop()
            yield nid
            stack.extend(reversed(self.nodes[nid].children))

    def chain(self, nid: int) -> list[int]:
        """Nodes from the root down to ``nid`` inclusive."""
        out = []
        cur: Optional[int] = nid
        while cur is not None:
            out.append(cur)
            cur = self.node(cur).parent
        out.reverse()
        return out

    def nulls(self) -> list[int]:
        return [n for n in self.preorder() if self.nodes[n].is_null]


def node_val(tree: XmlTree, v: int) -> Value:
    node = tree.node(v)
    if node.is_null:
        return Null(node.null_index)
    if node.kind is NodeKind.ELEMENT:
        return NodeIdentity(v)
    return Str(node.text)


def ancestors(tree: XmlTree, v: int) -> set[int]:
    return set(tree.chain(v)[:-1])


def validate(tree: XmlTree) -> list[Violation]:
    """Report every broken structural invariant; never raises."""
    out: list[Violation] = []
    nodes = tree.nodes
    if tree.root not in nodes:
        return [Violation(tree.root, "MissingRoot")]
    root = nodes[tree.root]
    if root.label != ROOT_LABEL or root.kind is not NodeKind.ELEMENT:
        out.append(Violation(tree.root, "BadRoot", f"root is {root.kind.value} {root.label!r}"))
    if root.parent is not None:
        out.append(Violation(tree.root, "BadRoot", "root has a parent"))

    for nid, node in nodes.items():
        if node.id != nid:
            out.append(Violation(nid, "IdMismatch"))
        for c in node.children:
            if c not in nodes:
                out.append(Violation(nid, "DanglingChild", str(c)))
            elif nodes[c].parent != nid:
                out.append(Violation(c, "ParentMismatch", f"listed under {nid}"))
        if node.parent is not None:
            if node.parent not in nodes:
                out.append(Violation(nid, "DanglingParent"))
            elif nid not in nodes[node.parent].children:
                out.append(Violation(nid, "ParentMismatch", f"parent {node.parent} does not list it"))
        elif nid != tree.root:
            out.append(Violation(nid, "NotATree", "second parentless node"))
        if node.children and node.kind.is_leaf_kind:
            out.append(Violation(nid, "LeafWithChildren"))
        has_text = node.kind in (NodeKind.ATTRIBUTE, NodeKind.TEXT)
        if has_text and node.text is None:
            out.append(Violation(nid, "MissingValue"))
        if not has_text and node.text is not None:
            out.append(Violation(nid, "UnexpectedValue"))
        if node.is_null and node.null_index is None:
            out.append(Violation(nid, "NullWithoutIndex"))
        if node.kind is NodeKind.TEXT and node.label != TEXT_LABEL:
            out.append(Violation(nid, "BadTextLabel"))
        seen: dict[str, int] = {}
        for c in node.children:
            cn = nodes.get(c)
            if cn is not None and cn.kind.step_kind is StepKind.ATTRIBUTE:
                if cn.label in seen:
                    out.append(Violation(nid, "DuplicateAttribute", cn.label))
                seen[cn.label] = c

    # reachability: every node reached exactly once from the root
    seen_nodes: set[int] = set()
    stack = [tree.root]
    while stack:
        cur = stack.pop()
        if cur in seen_nodes:
            out.append(Violation(cur, "NotATree", "reached twice"))
            continue
        seen_nodes.add(cur)
        stack.extend(c for c in nodes[cur].children if c in nodes)
    for nid in nodes:
        if nid not in seen_nodes:
            out.append(Violation(nid, "NotATree", "unreachable from root"))
    # parent-chain cycles
    for nid in nodes:
        cur, hops = nid, 0
        while cur is not None and cur in nodes and hops <= len(nodes):
            cur = nodes[cur].parent
            hops += 1
        if hops > len(nodes):
            out.append(Violation(nid, "NotATree", "parent cycle"))
    return out

"""Small hand-built documents and constraint sets used by tests, scripts and the README.

Each builder returns the tree together with a ``names`` map from readable node
names (``v1``, ``v5``, ...) to node ids, so callers can assert on specific nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import XmlTree
from .paths import Path
from .semantics import Xfd


@dataclass
class Sample:
    tree: XmlTree
    paths: list[Path]
    sigma: list[Xfd] = field(default_factory=list)
    names: dict[str, int] = field(default_factory=dict)


def _paths(*ps: str) -> list[Path]:
    return [Path.parse(p) for p in ps]


def _xfds(*fs: str) -> list[Xfd]:
    return [Xfd.parse(f) for f in fs]


def division() -> Sample:
    """Two divisions; the second has an Employee with no Section above it."""
    t = XmlTree()
    n = {"vr": t.root}
    n["v1"] = t.add_element(t.root, "Division")
    n["v2"] = t.add_element(t.root, "Division")
    n["v3"] = t.add_attribute(n["v1"], "d#", "d1")
    n["v4"] = t.add_element(n["v1"], "Section")
    n["v5"] = t.add_element(n["v2"], "Employee")
    n["v6"] = t.add_attribute(n["v2"], "d#", "d2")
    n["v7"] = t.add_element(n["v4"], "Employee")
    return Sample(t, _paths("root.Division.Section.Employee", "root.Division.@d#"), [], n)


def department() -> Sample:
    """Departments, lecturers and subjects; every declared path is instantiated."""
    t = XmlTree()
    n = {"vr": t.root}
    n["v1"] = t.add_element(t.root, "Department")
    n["v2"] = t.add_element(t.root, "Department")
    n["v3"] = t.add_attribute(n["v1"], "Head", "h1")
    n["v4"] = t.add_attribute(n["v1"], "Dname", "d1")
    n["v5"] = t.add_element(n["v1"], "Lecturer")
    n["v6"] = t.add_element(n["v1"], "Lecturer")
    n["v8"] = t.add_attribute(n["v2"], "Head", "h2")
    n["v7"] = t.add_attribute(n["v2"], "Dname", "d2")
    n["v9"] = t.add_element(n["v2"], "Lecturer")
    n["v10"] = t.add_attribute(n["v5"], "Lname", "l1")
    n["v11"] = t.add_attribute(n["v6"], "Lname", "l2")
    n["v12"] = t.add_attribute(n["v9"], "Lname", "l1")
    n["v13"] = t.add_element(n["v5"], "Subject")
    n["v14"] = t.add_element(n["v6"], "Subject")
    n["v15"] = t.add_element(n["v9"], "Subject")
    n["v16"] = t.add_attribute(n["v13"], "Subject#", "s1")
    n["v17"] = t.add_element(n["v13"], "SubjName")
    n["v18"] = t.add_attribute(n["v14"], "Subject#", "s3")
    n["v19"] = t.add_element(n["v14"], "SubjName")
    n["v20"] = t.add_attribute(n["v15"], "Subject#", "s2")
    n["v21"] = t.add_element(n["v15"], "SubjName")
    n["v22"] = t.add_text(n["v17"], "n1")
    n["v23"] = t.add_text(n["v19"], "n3")
    n["v24"] = t.add_text(n["v21"], "n2")
    paths = _paths(
        "root.Department.@Head",
        "root.Department.@Dname",
        "root.Department.Lecturer.@Lname",
        "root.Department.Lecturer.Subject.@Subject#",
        "root.Department.Lecturer.Subject.SubjName.S",
    )
    sigma = _xfds(
        "root.Department.Lecturer.Subject.@Subject# -> root.Department.Lecturer.Subject.SubjName.S",
        "root.Department.@Head -> root.Department",
        "root.Department.Lecturer.@Lname, root.Department.@Dname -> root.Department.Lecturer.Subject.@Subject#",
    )
    return Sample(t, paths, sigma, n)


AXIOM_SIGMA = (
    "root.A.B.C.@C# -> root.A.D.E",
    "root.A.D.E -> root.A.D.E.F.@F#",
    "root.A -> root.G",
)

# (axiom, derived XFD) pairs that follow from AXIOM_SIGMA
AXIOM_DERIVATIONS = (
    ("A1", "root.A -> root.A"),
    ("A2", "root.A, root.A.B.C -> root.G"),
    ("A3", "root.A.B.C.@C# -> root.A.D.E.F.@F#"),
    ("A4", "root.A.D.E -> root.G"),
    ("A5", "root.A.B -> root.A.D.E"),
    ("A5", "root.A.D -> root.A.D.E"),
    ("A6", "root.A.D.E -> root.A"),
    ("A7", "root.A.D.E.F -> root.A.D.E.F.@F#"),
    ("A8", "root.A.D -> root"),
)


def axiom_demo() -> Sample:
    """Two A subtrees with distinct C# and F# values, and a single G."""
    t = XmlTree()
    n = {"vr": t.root}
    for i in (1, 2):
        a = n[f"A{i}"] = t.add_element(t.root, "A")
        b = t.add_element(a, "B")
        c = t.add_element(b, "C")
        t.add_attribute(c, "C#", f"c{i}")
        d = t.add_element(a, "D")
        e = n[f"E{i}"] = t.add_element(d, "E")
        f = t.add_element(e, "F")
        t.add_attribute(f, "F#", f"f{i}")
    n["G"] = t.add_element(t.root, "G")
    sigma = _xfds(*AXIOM_SIGMA)
    paths = sorted({p for f in sigma for p in f.paths})
    return Sample(t, paths, sigma, n)


def chase_demo() -> Sample:
    """Two A elements sharing @A#; their B, C values differ and the first B has two Ds."""
    t = XmlTree()
    n = {"vr": t.root}
    spec = [("a1", "b1", "c1", 2), ("a1", "b2", "c2", 1)]
    for i, (av, bv, cv, nd) in enumerate(spec, 1):
        a = n[f"A{i}"] = t.add_element(t.root, "A")
        t.add_attribute(a, "A#", av)
        b = n[f"B{i}"] = t.add_element(a, "B")
        n[f"B#{i}"] = t.add_attribute(b, "B#", bv)
        c = t.add_element(b, "C")
        n[f"C#{i}"] = t.add_attribute(c, "C#", cv)
        for k in range(nd):
            n[f"D{i}{k + 1}"] = t.add_element(b, "D")
    sigma = _xfds(
        "root.A.@A# -> root.A.B.@B#",
        "root.A.B.@B# -> root.A.B.C.@C#",
        "root.A.B -> root.A.B.D",
    )
    paths = sorted({p for f in sigma for p in f.paths})
    return Sample(t, paths, sigma, n)


T0_SIGMA = (
    "root.A.B.@B# -> root.A.@A#",
    "root.A.C.@C# -> root.A.B",
    "root.A.@A# -> root.D.@D#",
)
T0_START = "root.A.B.@B#"

T1_SIGMA = (
    "root.A.B.@B# -> root.A.B.C.@C#",
    "root.A.B.C.@C# -> root.A.@A#",
    "root.A.D.@D# -> root.E.@E#",
)
T1_START = "root.A.B"

BRANCH_SIGMA = (
    "root.A.B.C.@C# -> root.A.B.C.D.E.@E#",
    "root.A.B.C.D.@D# -> root.A.B.C.D.E.@E#",
    "root.X.@X# -> root.A",
)
BRANCH_TARGET = "root.X -> root.A.B.C.D.E.@E#"

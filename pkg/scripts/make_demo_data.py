#!/usr/bin/env python3
"""Write the sample documents and constraint files used in the README walkthrough.

    python3 scripts/make_demo_data.py [OUTDIR]      # default: demo/
"""
from __future__ import annotations

import sys
from pathlib import Path as FsPath

from xfd.formats import serialize_tree
from xfd.samples import AXIOM_SIGMA, axiom_demo, chase_demo, department, division


def _xfd_file(paths, sigma, comment):
    lines = [f"// {comment}"] + [f"path {p}" for p in sorted(paths)] + [str(f) for f in sigma]
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    out = FsPath(argv[0] if argv else "demo")
    out.mkdir(parents=True, exist_ok=True)

    dept = department()
    clash = dept.tree.copy()
    clash.nodes[dept.names["v18"]].text = "s1"  # two subjects s1 with different names
    chase = chase_demo()
    files = {
        "department.xml": serialize_tree(dept.tree),
        "department-clash.xml": serialize_tree(clash),
        "department.xfd": _xfd_file(dept.paths, dept.sigma, "departments, lecturers and subjects"),
        "division.xml": serialize_tree(division().tree),
        "division.paths": "\n".join(str(p) for p in division().paths) + "\n",
        "axioms.xfd": "// three unary XFDs used to illustrate every axiom\n" + "\n".join(AXIOM_SIGMA) + "\n",
        "axioms.xml": serialize_tree(axiom_demo().tree),
        "chase.xml": serialize_tree(chase.tree),
        "chase.xfd": _xfd_file(chase.paths, chase.sigma, "A# fixes B#, B# fixes C#, B fixes its D"),
    }
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")
        print(out / name)
    return 0


if __name__ == "__main__":
    sys.exit(main())

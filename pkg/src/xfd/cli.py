"""Command-line front end.

Exit status: 0 for a positive verdict (satisfied, implied, witness built), 1 for
a negative one, 2 for parse, I/O or contract errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .axioms import derivation
from .chase import run_chase
from .closure import closure, implies
from .counterexample import find_counterexample
from .errors import ActuallyImplied, NonUnaryInput, XfdError
from .formats import check_kinds, parse_constraints, parse_paths, parse_xml, serialize_tree
from .paths import Path, minimal_extension, null_count
from .semantics import Xfd, satisfies_all


class _Out:
    def __init__(self, stream, color: bool):
        self.stream = stream
        self.color = color

    def paint(self, text: str, code: str) -> str:
        return f"\x1b[{code}m{text}\x1b[0m" if self.color else text

    def line(self, text: str = "") -> None:
        self.stream.write(text + "\n")


def _use_color(stream) -> bool:
    env = os.environ.get("XFD_COLOR")
    if env is not None:
        return env != "0"
    return hasattr(stream, "isatty") and stream.isatty()


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise XfdError(f"cannot read {path}: {e.strerror}") from None


def _write(path: Optional[str], text: str, out: _Out) -> None:
    if path is None or path == "-":
        out.stream.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise XfdError(f"cannot write {path}: {e.strerror}") from None


def _xfd_arg(text: str) -> Xfd:
    f = Xfd.parse(text)
    if not f.is_unary:
        raise NonUnaryInput(f"only unary XFDs are supported here: {f}")
    return f


def _dump(out: _Out, obj) -> None:
    out.line(json.dumps(obj, indent=2, ensure_ascii=False))


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args, out: _Out) -> int:
    tree = parse_xml(_read(args.document))
    cf = parse_constraints(_read(args.constraints))
    report = satisfies_all(tree, cf.declared_paths, cf.xfds)
    if args.format == "json":
        results = []
        for v in report:
            entry = {"xfd": str(v.xfd), "status": "satisfied" if v.ok else "violated"}
            if not v.ok:
                w = v.witness
                entry["witness"] = {
                    "instance_a": list(w.instance_a),
                    "instance_b": list(w.instance_b),
                    "failed": [{"path": str(c.path), "x": c.x, "y": c.y,
                                "nodes_x": list(c.nodes_x), "nodes_y": list(c.nodes_y)}
                               for c in w.failed],
                }
            results.append(entry)
        _dump(out, {"satisfied": report.all_satisfied, "results": results})
    else:
        for v in report:
            if v.ok:
                out.line(out.paint("satisfied", "32") + f"  {v.xfd}")
            else:
                out.line(out.paint("violated ", "31") + f"  {v.xfd}")
                out.line(f"           {v.witness.describe()}")
    return 0 if report.all_satisfied else 1


def cmd_implies(args, out: _Out) -> int:
    cf = parse_constraints(_read(args.constraints))
    f = _xfd_arg(args.xfd)
    check_kinds(cf.declared_paths | f.paths)
    ok = implies(cf.xfds, f)
    trace = [str(s) for s in derivation(cf.xfds, f)] if (args.trace and ok) else []
    if args.format == "json":
        obj = {"xfd": str(f), "implied": ok}
        if args.trace:
            obj["trace"] = trace
        _dump(out, obj)
    else:
        out.line((out.paint("implied", "32") if ok else out.paint("not implied", "31")) + f"  {f}")
        for s in trace:
            out.line("  " + s)
    return 0 if ok else 1


def cmd_closure(args, out: _Out) -> int:
    cf = parse_constraints(_read(args.constraints))
    p = Path.parse(args.path)
    check_kinds(cf.declared_paths | {p})
    cs = closure(cf.xfds, p)
    if args.format == "json":
        _dump(out, cs.to_json())
    else:
        out.line(f"closure of {p}:")
        for q in sorted(cs.members):
            out.line(f"  {q}")
    return 0


def cmd_chase(args, out: _Out) -> int:
    tree = parse_xml(_read(args.document))
    cf = parse_constraints(_read(args.constraints))
    res = run_chase(tree, cf.xfds, cf.declared_paths, literal=args.literal)
    text = serialize_tree(res.tree)
    if args.output:
        _write(args.output, text, out)
    if args.format == "json":
        obj = {"steps": len(res.steps), "output": args.output}
        if args.log:
            obj["log"] = res.log
        if not args.output:
            obj["tree"] = text
        _dump(out, obj)
    else:
        if args.log:
            for line in res.log:
                out.line(line)
        if not args.output:
            out.stream.write(text)
        else:
            out.line(f"{len(res.steps)} rewrite(s); wrote {args.output}")
    return 0


def cmd_counterexample(args, out: _Out) -> int:
    cf = parse_constraints(_read(args.constraints))
    f = _xfd_arg(args.xfd)
    check_kinds(cf.declared_paths | f.paths)
    try:
        w = find_counterexample(cf.xfds, f)
    except ActuallyImplied:
        if args.format == "json":
            _dump(out, {"xfd": str(f), "implied": True})
        else:
            out.line(out.paint("implied", "33") + f"  {f}: no counterexample exists")
        return 1
    text = serialize_tree(w.tree)
    if args.output:
        _write(args.output, text, out)
    construction = f"{w.spec.case}/{w.spec.reading}" if w.spec else "chase"
    if args.format == "json":
        obj = {"xfd": str(f), "implied": False, "construction": construction, "output": args.output}
        if not args.output:
            obj["tree"] = text
        _dump(out, obj)
    else:
        if args.output:
            out.line(f"counterexample ({construction}) for {f}; wrote {args.output}")
        else:
            out.stream.write(text)
    return 0


def cmd_extend(args, out: _Out) -> int:
    tree = parse_xml(_read(args.document))
    paths = parse_paths(_read(args.paths))
    ext = minimal_extension(tree, paths)
    text = serialize_tree(ext)
    if args.output:
        _write(args.output, text, out)
    if args.format == "json":
        obj = {"nulls": null_count(ext), "output": args.output}
        if not args.output:
            obj["tree"] = text
        _dump(out, obj)
    elif args.output:
        out.line(f"added {null_count(ext)} null node(s); wrote {args.output}")
    else:
        out.stream.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="xfd", description="Reason about functional dependencies in XML.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[fmt], help="check a document against constraints")
    s.add_argument("document")
    s.add_argument("constraints")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("implies", parents=[fmt], help="decide whether Σ implies a unary XFD")
    s.add_argument("constraints")
    s.add_argument("xfd", help='e.g. "root.A -> root.B.@x"')
    s.add_argument("--trace", action="store_true", help="print an axiom derivation")
    s.set_defaults(run=cmd_implies)

    s = sub.add_parser("closure", parents=[fmt], help="closure of a path under Σ")
    s.add_argument("constraints")
    s.add_argument("--path", required=True)
    s.set_defaults(run=cmd_closure)

    s = sub.add_parser("chase", parents=[fmt], help="repair a complete document so it satisfies Σ")
    s.add_argument("document")
    s.add_argument("constraints")
    s.add_argument("-o", "--output")
    s.add_argument("--log", action="store_true", help="list each rewrite")
    s.add_argument("--literal", action="store_true", help="use the unguarded rewrite condition")
    s.set_defaults(run=cmd_chase)

    s = sub.add_parser("counterexample", parents=[fmt], help="build a tree satisfying Σ but not f")
    s.add_argument("constraints")
    s.add_argument("xfd")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_counterexample)

    s = sub.add_parser("extend", parents=[fmt], help="write the minimal extension with marked nulls")
    s.add_argument("document")
    s.add_argument("paths")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_extend)
    return ap


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    out = _Out(stdout, _use_color(stdout))
    try:
        return args.run(args, out)
    except XfdError as e:
        problems = getattr(e, "problems", [])
        stderr.write(f"xfd {args.command}: {type(e).__name__}: {e}\n")
        for p in problems:
            stderr.write(f"  {p}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

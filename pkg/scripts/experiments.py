#!/usr/bin/env python3
"""Randomised experiments behind the acceptance suite, with larger counts and reports.

    python3 scripts/experiments.py closure --n 2000
    python3 scripts/experiments.py soundness --n 1000
    python3 scripts/experiments.py chase --n 500 --literal
    python3 scripts/experiments.py counterexample --n 1000
    python3 scripts/experiments.py att-ancestors --n 500
    python3 scripts/experiments.py scaling --sizes 1000 3000 10000 30000

Each run prints a JSON summary; ``--out FILE`` also writes it to disk.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from collections import Counter, defaultdict, deque

from xfd.axioms import axiom_closure, derive_all, path_universe
from xfd.chase import run_chase
from xfd.closure import closure, implies, trigger_window
from xfd.counterexample import find_counterexample
from xfd.generators import chain_sigma, random_schema, random_sigma, random_tree, random_xfd, satisfied_sigma
from xfd.paths import ROOT, Path, completeness_violations, intersect
from xfd.semantics import context_for, satisfies, satisfies_all


def _case(seed, max_sigma=6):
    rng = random.Random(seed)
    schema = random_schema(rng)
    return rng, schema, random_sigma(rng, schema, rng.randint(0, max_sigma))


def exp_closure(args):
    mismatches, starts = [], 0
    t0 = time.perf_counter()
    for seed in range(args.seed, args.seed + args.n):
        _, schema, sigma = _case(seed)
        universe = path_universe(sigma, schema)
        for p in universe:
            starts += 1
            if closure(sigma, p, universe).members != axiom_closure(sigma, p, universe):
                mismatches.append([seed, str(p)])
    return {"sigmas": args.n, "start_paths": starts, "mismatches": mismatches[:20],
            "mismatch_count": len(mismatches), "seconds": round(time.perf_counter() - t0, 2)}


def exp_soundness(args):
    facts, nulls, bad = 0, 0, []
    for seed in range(args.seed, args.seed + args.n):
        rng = random.Random(seed)
        schema = random_schema(rng)
        tree = random_tree(rng, schema)
        ctx = context_for(tree, schema)
        nulls += bool(ctx.tree.nulls())
        sigma = satisfied_sigma(rng, tree, schema, rng.randint(1, 4), max_lhs=2, ctx=ctx)
        for f in derive_all(sigma, path_universe(sigma, schema), max_lhs=2):
            facts += 1
            if not ctx.holds(f):
                bad.append([seed, str(f)])
    return {"trees": args.n, "trees_with_nulls": nulls, "derived_checked": facts, "unsound": bad[:20]}


def exp_chase(args):
    steps, failures = Counter(), []
    for seed in range(args.seed, args.seed + args.n):
        rng = random.Random(seed)
        schema = random_schema(rng)
        tree = random_tree(rng, schema, complete=True)
        sigma = random_sigma(rng, schema, rng.randint(1, 5))
        try:
            res = run_chase(tree, sigma, schema, literal=args.literal)
        except AssertionError as e:
            failures.append([seed, str(e)])
            continue
        steps[len(res.steps)] += 1
        if not satisfies_all(res.tree, schema, sigma).all_satisfied or completeness_violations(res.tree, schema):
            failures.append([seed, "output contract"])
    return {"trees": args.n, "literal": args.literal, "rewrites_histogram": dict(sorted(steps.items())),
            "failures": failures[:20]}


def exp_counterexample(args):
    used, attempts, failures, cases = Counter(), Counter(), [], 0
    for seed in range(args.seed, args.seed + args.n):
        rng, schema, sigma = _case(seed)
        f = random_xfd(rng, schema)
        if implies(sigma, f):
            continue
        cases += 1
        try:
            w = find_counterexample(sigma, f)
        except Exception as e:
            failures.append([seed, f"{type(e).__name__}: {e}"])
            continue
        used[f"{w.spec.case}/{w.spec.reading}" if w.spec else "chase"] += 1
        attempts.update(w.attempts)
        if not satisfies_all(w.tree, w.paths, sigma).all_satisfied or satisfies(w.tree, w.paths, f).ok:
            failures.append([seed, "not a witness"])
    return {"sampled": args.n, "non_implied": cases, "construction_used": dict(used.most_common()),
            "rejected_candidates": dict(attempts.most_common()), "failures": failures[:20]}


def literal_closure(sigma, p, universe):
    """The worklist closure with the printed rule: a fired element rhs s adds Anc(s) and
    Att(s), but the attributes of the new ancestors are never added."""
    attrs = defaultdict(list)
    for u in universe:
        if u.is_attribute:
            attrs[u.parent()].append(u)
    watch = defaultdict(list)
    for i, f in enumerate(sigma):
        for w in trigger_window(f.lhs[0], f.rhs):
            watch[w].append(i)
    members, queued, queue = set(), set(), deque()

    def add(x):
        if x not in members:
            members.add(x)
            for i in watch.get(x, ()):
                if i not in queued:
                    queued.add(i)
                    queue.append(i)

    start = {p, ROOT} | (set(p.prefixes()) if p.is_element else set())
    for x in start:
        add(x)
        for a in attrs.get(x, ()):
            add(a)
    for i, f in enumerate(sigma):
        if intersect(f.lhs[0], f.rhs) == ROOT and i not in queued:
            queued.add(i)
            queue.append(i)
    while queue:
        s = sigma[queue.popleft()].rhs
        add(s)
        if s.is_element:
            for x in s.prefixes()[:-1] + attrs.get(s, []):
                add(x)
    return frozenset(members)


def exp_att_ancestors(args):
    """How often the element-only Att rule misses paths the axioms derive."""
    missed, starts, bad_starts = [], 0, 0
    for seed in range(args.seed, args.seed + args.n):
        _, schema, sigma = _case(seed)
        universe = path_universe(sigma, schema)
        first = None
        for p in sorted(universe):
            starts += 1
            want = axiom_closure(sigma, p, universe)
            got = literal_closure(sigma, p, universe)
            if got != want:
                bad_starts += 1
                first = first or {"seed": seed, "sigma": [str(f) for f in sigma], "start": str(p),
                                  "missing": sorted(map(str, want - got)), "extra": sorted(map(str, got - want))}
        if first:
            missed.append(first)
    return {"sigmas": args.n, "sigmas_with_a_miss": len(missed), "start_paths": starts,
            "start_paths_with_a_miss": bad_starts, "examples": missed[:3]}


def exp_scaling(args):
    rows = []
    p = Path.parse("root.A.@x0")
    for n in args.sizes:
        sigma = chain_sigma(n)
        best = float("inf")
        for _ in range(args.runs):
            t0 = time.perf_counter()
            cs = closure(sigma, p)
            best = min(best, time.perf_counter() - t0)
        rows.append({"xfds": n, "steps": cs.steps, "members": len(cs.members), "seconds": round(best, 4)})
    return {"family": "root.A.@x{i} -> root.A.@x{i+1}", "rows": rows}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("experiment", choices=["closure", "soundness", "chase", "counterexample",
                                           "att-ancestors", "scaling"])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--literal", action="store_true", help="chase: use the unguarded rewrite condition")
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 10000])
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    fn = {"closure": exp_closure, "soundness": exp_soundness, "chase": exp_chase,
          "counterexample": exp_counterexample, "att-ancestors": exp_att_ancestors,
          "scaling": exp_scaling}[args.experiment]
    result = {"experiment": args.experiment, **fn(args)}
    text = json.dumps(result, indent=2, ensure_ascii=False)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


if __name__ == "__main__":
    sys.exit(main())

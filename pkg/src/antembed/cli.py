"""Command-line front door.

Subcommands: embed, embed-cat, good-arcs, check-free, select, gen, oracle,
sweep.  Graph files use the arc-list format (``n m`` header then ``u v``
lines, ``#`` comments); ``--json`` switches machine-readable output on.

Exit codes for ``embed``: 0 success, 2 certified refusal, 3 inconclusive,
4 internal assertion encountered.  ``check-free`` exits 1 when a witness is
found.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import sweeps
from .antitree import validate_antitree
from .convex import ConvexDigraph, embed_caterpillar, embed_caterpillar_mindeg, good_arcs, reconstruct_witness
from .digraph import parse_arclist, to_arclist
from .errors import AntembedError, HypothesisViolated
from .freeness import is_k2s_free
from .oracle_gen import gen_burr, gen_incidence, gen_random_dense, oracle_embed
from .subdigraph import select_subdigraph
from .tree_embedder import embed_antitree


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_arclist(fh.read())


def _load_tree(path):
    d, _root = _load(path)
    return validate_antitree(d)


def _emit(obj, as_json):
    if as_json:
        print(json.dumps(obj, indent=1, default=str))
    else:
        for key, val in obj.items():
            print(f"{key}: {val}")


def _order_from_flag(flag, n):
    if flag is None or flag == "id":
        return None
    if flag.startswith("random:"):
        rng = random.Random(int(flag.split(":", 1)[1]))
        order = list(range(n))
        rng.shuffle(order)
        return order
    raise AntembedError(f"bad --order value {flag!r}")


def cmd_embed(args) -> int:
    host, _ = _load(args.host)
    tree = _load_tree(args.tree)
    out = embed_antitree(host, tree, force_oracle=args.force_oracle, budget=args.budget)
    payload = {
        "ok": out.ok,
        "branch": out.case.branch if out.case else None,
        "map": out.embedding.map if out.ok else None,
        "failure": out.failure,
        "assertions": [e.get("tag") for e in out.assertion_events()],
    }
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(out.trace, fh, indent=1, default=str)
    _emit(payload, args.json)
    if out.assertion_events():
        return 4
    if out.ok:
        return 0
    if out.failure and out.failure.get("kind") in ("budget-exhausted", "inconclusive"):
        return 3
    return 2


def cmd_embed_cat(args) -> int:
    host, _ = _load(args.host)
    tree = _load_tree(args.tree)
    order = _order_from_flag(args.order, host.n)
    try:
        if args.mode == "density":
            emb = embed_caterpillar(host, tree, order)
        else:
            emb = embed_caterpillar_mindeg(host, tree, order)
    except HypothesisViolated as exc:
        _emit({"ok": False, "refusal": exc.reason, "data": exc.data}, args.json)
        return 2
    _emit({"ok": True, "map": emb.map}, args.json)
    return 0


def cmd_good_arcs(args) -> int:
    host, _ = _load(args.host)
    tree = _load_tree(args.tree)
    c = ConvexDigraph(host, _order_from_flag(args.order, host.n))
    table = good_arcs(c, tree)
    final = sorted(table.stage_arcs[-1])
    payload = {"good": final, "count": len(final), "lemma8_bound": table.lemma8_bound}
    if args.witness:
        u, v = (int(x) for x in args.witness.split(","))
        mapping = reconstruct_witness(c, tree, table, (u, v))
        payload["witness"] = mapping
    _emit(payload, args.json)
    return 0


def cmd_check_free(args) -> int:
    host, _ = _load(args.host)
    res = is_k2s_free(host, args.s, prune=args.prune)
    if res is True:
        _emit({"free": True, "s": args.s}, args.json)
        return 0
    payload = {
        "free": False,
        "s": args.s,
        "witness": {
            "a": res.a,
            "b": res.b,
            "sign_a": res.sign_a,
            "sign_b": res.sign_b,
            "common": sorted(res.common),
        },
    }
    print(json.dumps(payload))
    return 1


def cmd_select(args) -> int:
    host, _ = _load(args.host)
    sel = select_subdigraph(host, args.k, args.r)
    _emit(
        {
            "case": sel.case_tag,
            "witness_vertex": sel.witness_vertex,
            "arcs": sel.sub.a(),
            "audit": sel.audit,
        },
        args.json,
    )
    return 0


def cmd_gen(args) -> int:
    if args.family == "burr":
        d = gen_burr(args.k)
    elif args.family == "incidence":
        d = gen_incidence(args.q)
    else:
        d = gen_random_dense(args.n, args.k, args.seed)
    sys.stdout.write(to_arclist(d))
    return 0


def cmd_oracle(args) -> int:
    host, _ = _load(args.host)
    tree = _load_tree(args.tree)
    st = oracle_embed(host, tree, args.budget)
    _emit(
        {
            "verdict": st.verdict,
            "witness": st.witness,
            "nodes": st.nodes_expanded,
            "elapsed": round(st.elapsed, 4),
        },
        args.json,
    )
    return 0 if st.verdict != "Inconclusive" else 3


def cmd_sweep(args) -> int:
    params = {}
    for kv in args.param or []:
        key, val = kv.split("=", 1)
        params[key] = val
    cfg = sweeps.SweepConfig(suite=args.suite, params=params, jobs=args.jobs, out=args.out)
    report = sweeps.run_sweep(cfg)
    print(
        f"suite={report['suite']} ok={report['ok']} "
        f"failures={len(report['failures'])} summary={report['summary']}"
    )
    return 0 if report["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="antembed")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("embed", help="run the full tree-embedding pipeline")
    s.add_argument("--tree", required=True)
    s.add_argument("--host", required=True)
    s.add_argument("--force-oracle", action="store_true")
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--trace", default=None)
    s.set_defaults(fn=cmd_embed)

    s = sub.add_parser("embed-cat", help="caterpillar embedding via good arcs")
    s.add_argument("--tree", required=True)
    s.add_argument("--host", required=True)
    s.add_argument("--mode", choices=["density", "mindeg"], default="density")
    s.add_argument("--order", default="id")
    s.set_defaults(fn=cmd_embed_cat)

    s = sub.add_parser("good-arcs", help="list good arcs, optionally a witness")
    s.add_argument("--tree", required=True)
    s.add_argument("--host", required=True)
    s.add_argument("--order", default="id")
    s.add_argument("--witness", default=None, help="arc 'u,v' to reconstruct")
    s.set_defaults(fn=cmd_good_arcs)

    s = sub.add_parser("check-free", help="forbidden K_{2,s} orientation scan")
    s.add_argument("--host", required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--prune", action="store_true")
    s.set_defaults(fn=cmd_check_free)

    s = sub.add_parser("select", help="two-regime subdigraph selection")
    s.add_argument("--host", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.set_defaults(fn=cmd_select)

    s = sub.add_parser("gen", help="instance generators")
    gsub = s.add_subparsers(dest="family", required=True)
    g = gsub.add_parser("burr")
    g.add_argument("--k", type=int, required=True)
    g = gsub.add_parser("incidence")
    g.add_argument("--q", type=int, required=True)
    g = gsub.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("oracle", help="exact backtracking embedding oracle")
    s.add_argument("--tree", required=True)
    s.add_argument("--host", required=True)
    s.add_argument("--budget", type=int, default=None)
    s.set_defaults(fn=cmd_oracle)

    s = sub.add_parser("sweep", help="run a registered acceptance suite")
    s.add_argument("--suite", required=True, choices=sorted(sweeps.SUITES))
    s.add_argument("--param", action="append", help="key=value, repeatable")
    s.add_argument("--out", default=None, help="write the JSON report here")
    s.set_defaults(fn=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except AntembedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

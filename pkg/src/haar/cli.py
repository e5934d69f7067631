"""Command-line front end: ``haar <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .auto import automorphism_group, find_isomorphism, is_edge_transitive
from .bicyclic import (
    bci_definitional_witness,
    bicyclic_base,
    bicyclic_subgroups,
    ci_definitional_witness,
    ci_subset_structural,
)
from .census import METHODS, parse_range, run_census
from .errors import HaarError, ResourceExceeded
from .graph import build_cayley, build_haar, to_json
from .perm import point_stabilizer
from .theorem import decide_iso_valency4
from .verify import run_all, summarize
from .zn import ZnSet, affinely_equivalent, canonical_affine_form

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # the same flags are accepted before and after the subcommand
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes for the census")
    p.add_argument("--max-group-order", type=int, default=d(None), help="cap on enumerated group elements")
    p.add_argument("--seed", type=int, default=d(None), help="seed for randomized checks")
    p.add_argument("--out", default=d(None), help="write output to FILE")
    p.add_argument("--strict", action="store_true", default=d(False), help="exit 1 on a negative verdict")
    p.add_argument("--emit-adjacency", action="store_true", default=d(False), help="include edge lists in graph output")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="haar", description="Isomorphism and BCI tools for cyclic Haar graphs.", parents=[_global_flags(False)])
    sub = parser.add_subparsers(dest="command", required=True)
    common = _global_flags(True)

    def cmd(name: str, help: str, other: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, parents=[common])
        p.add_argument("--n", type=int, default=None, help="modulus (optional if sets are written n:e1,...)")
        p.add_argument("--set", required=True, dest="set_", metavar="SET", help="elements, e.g. 0,1,2,5 or 8:0,1,2,5")
        if other:
            p.add_argument("--other", required=True, metavar="SET")
        return p

    cmd("canon", "canonical affine form of a set")
    cmd("aff-eq", "affine equivalence witness for two sets", other=True)
    p = cmd("iso", "decide isomorphism of two Haar graphs", other=True)
    p.add_argument("--oracle", action="store_true", help="use the search oracle instead of the decision procedure")
    p.add_argument("--check-oracle", action="store_true", help="cross-validate the decision against the oracle")
    cmd("aut", "automorphism group summary")
    cmd("bicyclic", "bicyclic subgroups and bicyclic base")
    p = cmd("bci", "BCI test")
    p.add_argument("--method", choices=METHODS, default="definitional")
    p = cmd("ci", "CI test for the Cayley digraph")
    p.add_argument("--method", choices=METHODS, default="definitional")

    p = sub.add_parser("census", help="BCI census over a range of moduli", parents=[common])
    p.add_argument("--n", required=True, help="range such as 8..16")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--method", choices=METHODS, default="definitional")
    p.add_argument("--resume", action="store_true", help="continue after the last finished modulus in --out")

    p = sub.add_parser("verify-lemmas", help="run every structural verifier", parents=[common])
    p.add_argument("--n-max", type=int, default=16)
    return parser


def _set(text: str, n: Optional[int]) -> ZnSet:
    return ZnSet.parse(text, n)


def _emit(args, payload: dict, text: str) -> None:
    body = json.dumps(payload, sort_keys=True) if args.json else text
    if args.out and args.command != "census":
        with open(args.out, "w") as fh:
            fh.write(body + "\n")
    else:
        print(body)


def _verdict(args, ok: bool) -> int:
    return EXIT_NEGATIVE if (args.strict and not ok) else EXIT_OK


def _cmd_canon(args) -> int:
    S = _set(args.set_, args.n)
    T, w = canonical_affine_form(S)
    _emit(args, {"set": S.to_json(), "canonical": T.to_json(), "witness": w.to_json()}, f"{T}  (a={w.a}, b={w.b})")
    return EXIT_OK


def _cmd_aff_eq(args) -> int:
    S, T = _set(args.set_, args.n), _set(args.other, args.n)
    w = affinely_equivalent(S, T)
    payload = {"equivalent": w is not None, "witness": w.to_json() if w else None}
    _emit(args, payload, f"{T} = {w.a}*S + {w.b}" if w else "not affinely equivalent")
    return _verdict(args, w is not None)


def _cmd_iso(args) -> int:
    S, T = _set(args.set_, args.n), _set(args.other, args.n)
    G1, G2 = build_haar(S), build_haar(T)
    if args.oracle or len(S) != 4 or len(T) != 4:
        f = find_isomorphism(G1, G2)
        payload = {"isomorphic": f is not None, "route": "oracle", "oracle_checked": True}
        if f is not None:
            payload["map"] = list(f)
        ok = f is not None
    else:
        d = decide_iso_valency4(S, T)
        payload = d.to_json()
        payload["oracle_checked"] = False
        if d.isomorphic:
            payload["map"] = list(d.isomorphism())
        if args.check_oracle:
            oracle = find_isomorphism(G1, G2) is not None
            payload["oracle_checked"] = True
            payload["oracle_agrees"] = oracle == d.isomorphic
            if oracle != d.isomorphic:
                print("decision procedure and oracle disagree", file=sys.stderr)
                _emit(args, payload, json.dumps(payload, sort_keys=True))
                return EXIT_NEGATIVE
        ok = d.isomorphic
    route = payload.get("route")
    _emit(args, payload, f"{'isomorphic' if ok else 'not isomorphic'} (route: {route})")
    return _verdict(args, ok)


def _cmd_aut(args) -> int:
    S = _set(args.set_, args.n)
    G = build_haar(S)
    A = automorphism_group(G)
    payload = {
        "order": A.order(),
        "vertex_stabilizer_order": point_stabilizer(A, 0).order(),
        "edge_transitive": is_edge_transitive(G, A),
        "generators": len(A.generators),
        "graph": to_json(G, args.emit_adjacency),
    }
    text = f"|Aut| = {payload['order']}, |Aut_0+| = {payload['vertex_stabilizer_order']}, edge-transitive: {payload['edge_transitive']}"
    _emit(args, payload, text)
    return EXIT_OK


def _cmd_bicyclic(args) -> int:
    S = _set(args.set_, args.n)
    G = build_haar(S)
    cat = bicyclic_subgroups(G)
    base = bicyclic_base(G, catalog=cat)
    payload = {
        "count": cat.count,
        "classes": cat.class_count,
        "class_sizes": [len(c) for c in cat.conjugacy_classes],
        "base": [T.to_json() for _, T in base],
    }
    lines = [f"{cat.count} bicyclic subgroups in {cat.class_count} conjugacy classes"]
    lines += [f"  {T}" for _, T in base]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _cmd_bci(args) -> int:
    S = _set(args.set_, args.n)
    payload = {"method": args.method}
    if args.method in ("structural", "both"):
        cat = bicyclic_subgroups(build_haar(S))
        payload["classes"] = cat.class_count
        payload["bci"] = cat.class_count == 1
    if args.method in ("definitional", "both"):
        w = bci_definitional_witness(S)
        if "bci" in payload and payload["bci"] != (w is None):
            print("structural and definitional tests disagree", file=sys.stderr)
            return EXIT_NEGATIVE
        payload["bci"] = w is None
        payload["partner"] = w.to_json() if w else None
    _emit(args, payload, "BCI" if payload["bci"] else "not BCI")
    return _verdict(args, payload["bci"])


def _cmd_ci(args) -> int:
    S = _set(args.set_, args.n)
    payload = {"method": args.method}
    if args.method in ("structural", "both"):
        payload["ci"] = ci_subset_structural(S)
    if args.method in ("definitional", "both"):
        w = ci_definitional_witness(S)
        if "ci" in payload and payload["ci"] != (w is None):
            print("structural and definitional tests disagree", file=sys.stderr)
            return EXIT_NEGATIVE
        payload["ci"] = w is None
        payload["partner"] = w.to_json() if w else None
    _emit(args, payload, "CI" if payload["ci"] else "not CI")
    return _verdict(args, payload["ci"])


def _cmd_census(args) -> int:
    ns = parse_range(args.n)
    summaries = run_census(ns, args.k, args.out, args.jobs, args.method, args.max_group_order, args.resume, stream=sys.stdout)
    if args.out:
        for s in summaries:
            if args.json:
                print(json.dumps(s, sort_keys=True))
            else:
                print(f"n={s['modulus']:3d}  classes={s['connected_classes']:4d}  non-BCI={s['non_bci']}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    checks = run_all(args.n_max)
    rows = summarize(checks)
    if args.json:
        payload = {"n_max": args.n_max, "rows": [{"check": n, "instances": t, "failures": f} for n, t, f in rows]}
        _emit(args, payload, "")
    else:
        width = max(len(n) for n, _, _ in rows)
        lines = [f"{'check':{width}s}  instances  result"]
        lines += [f"{n:{width}s}  {t:9d}  {'PASS' if f == 0 else f'FAIL ({f})'}" for n, t, f in rows]
        _emit(args, {}, "\n".join(lines))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NEGATIVE


COMMANDS = {
    "canon": _cmd_canon,
    "aff-eq": _cmd_aff_eq,
    "iso": _cmd_iso,
    "aut": _cmd_aut,
    "bicyclic": _cmd_bicyclic,
    "bci": _cmd_bci,
    "ci": _cmd_ci,
    "census": _cmd_census,
    "verify-lemmas": _cmd_verify,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    saved = os.environ.get("HAAR_MAX_GROUP_ORDER")
    if args.max_group_order is not None:
        # worker processes read the cap from the environment
        os.environ["HAAR_MAX_GROUP_ORDER"] = str(args.max_group_order)
    try:
        return _dispatch(args)
    finally:
        if saved is None:
            os.environ.pop("HAAR_MAX_GROUP_ORDER", None)
        else:
            os.environ["HAAR_MAX_GROUP_ORDER"] = saved


def _dispatch(args) -> int:
    try:
        return COMMANDS[args.command](args)
    except ResourceExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except HaarError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Exit codes: 0 success, 1 a verified claim failed, 2 not IDP,
3 undecided within the resource budget, 64 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import data
from .digraph import Digraph, arc_polytope
from .ehrhart import hstar_report
from .enumeration import BudgetExceeded, count_points, enumerate_points
from .equivalence import find_equivalence
from .idp import is_idp
from .polytope import Polytope
from .search import IDP_LEVELS, SearchConfig, local_search
from .triangulation import enumerate_triangulations, hstar_halfopen, point_config, triangulation_table
from .verify import TARGETS, exit_code

EX_OK, EX_FAIL, EX_NOT_IDP, EX_UNDECIDED, EX_USAGE = 0, 1, 2, 3, 64


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _read_json(source: str):
    if source == "-":
        text = sys.stdin.read()
    elif Path(source).exists():
        text = Path(source).read_text(encoding="utf-8")
    elif source in data.NAMES:
        return data.load_json(source)
    else:
        raise InputError(f"no such file or bundled dataset: {source}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {source}: {exc}") from exc


def _read_polytope(source: str) -> Polytope:
    obj = _read_json(source)
    try:
        return Polytope.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"not a polytope: {exc}") from exc


def _read_digraph(source: str) -> Digraph:
    obj = _read_json(source)
    try:
        return Digraph.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"not a digraph: {exc}") from exc


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _timing(t0: float) -> dict:
    return {"seconds": round(time.perf_counter() - t0, 3)}


def cmd_verify(args) -> int:
    targets = list(TARGETS) if args.target == "all" else [args.target]
    claims_out = {}
    codes = []
    for target in targets:
        fn = TARGETS[target]
        claims = fn(workers=args.threads)
        codes.append(exit_code(claims))
        claims_out[target] = claims
        if not args.json:
            print(f"== {target}")
            for c in claims:
                print(f"{c.status:<9} {c.name}: {c.detail}  ({c.seconds:.2f}s)")
    if args.json:
        _emit({
            "results": {t: [c.to_json() for c in cs] for t, cs in claims_out.items()},
            "timing": {t: {c.name: round(c.seconds, 3) for c in cs} for t, cs in claims_out.items()},
        })
    if EX_FAIL in codes:
        return EX_FAIL
    return EX_UNDECIDED if EX_UNDECIDED in codes else EX_OK


def cmd_hstar(args) -> int:
    t0 = time.perf_counter()
    p = _read_polytope(args.input)
    report = hstar_report(p, workers=args.threads)
    if args.method == "halfopen":
        report["hstar_halfopen"] = list(hstar_halfopen(p))
    report["timing"] = _timing(t0)
    _emit(report)
    return EX_OK


def cmd_idp(args) -> int:
    t0 = time.perf_counter()
    p = _read_polytope(args.input)
    verdict = is_idp(p, k_max=args.paranoid, max_points=args.max_points, workers=args.threads)
    out = verdict.to_json()
    out["dim"] = p.dim
    out["bound_source"] = "paranoid" if args.paranoid is not None else "default d-2 (Bruns-Gubeladze Thm 2.52)"
    out["timing"] = _timing(t0)
    _emit(out)
    print(f"IDP levels checked up to k = {verdict.bound}", file=sys.stderr)
    if verdict.holds is None:
        return EX_UNDECIDED
    return EX_OK if verdict.holds else EX_NOT_IDP


def cmd_points(args) -> int:
    t0 = time.perf_counter()
    p = _read_polytope(args.input)
    q, emb = p.normalized
    k = args.k
    pts = []
    for y in enumerate_points(q, k, workers=args.threads):
        x = emb.to_ambient(y)
        # the embedding is affine; dilation scales its origin too
        pts.append([xi + (k - 1) * oi for xi, oi in zip(x, emb.origin)])
    _emit({"k": k, "ambient_dim": p.ambient_dim, "count": len(pts), "points": sorted(pts), "timing": _timing(t0)})
    return EX_OK


def cmd_count(args) -> int:
    t0 = time.perf_counter()
    p = _read_polytope(args.input)
    q, _ = p.normalized
    ks = range(1, args.upto + 1) if args.upto else [args.k]
    counts = {str(k): count_points(q, k, workers=args.threads) for k in ks}
    _emit({"dim": q.dim, "counts": counts, "timing": _timing(t0)})
    return EX_OK


def cmd_arc_polytope(args) -> int:
    g = _read_digraph(args.input)
    _emit(arc_polytope(g).to_json())
    return EX_OK


def cmd_triangulations(args) -> int:
    p = _read_polytope(args.input)
    q, pts = point_config(p)
    if len(pts) > q.ambient_dim + 3:
        raise InputError(f"{len(pts)} lattice points exceed d + 3 = {q.ambient_dim + 3}")
    ts = enumerate_triangulations(pts, time_budget=args.time_budget)
    _emit(triangulation_table(ts))
    return EX_OK


def cmd_equiv(args) -> int:
    t0 = time.perf_counter()
    a, b = _read_polytope(args.a), _read_polytope(args.b)
    (qa, ea), (qb, eb) = a.normalized, b.normalized
    m, reason = find_equivalence(qa, qb)
    out = {"equivalent": m is not None, "reason": reason}
    if m is not None:
        out["map"] = m.to_json()
        out["coordinates"] = "lattice-normalized"
        out["normalization"] = {
            "a": {"origin": list(ea.origin), "basis": [list(r) for r in ea.basis]},
            "b": {"origin": list(eb.origin), "basis": [list(r) for r in eb.basis]},
        }
    out["timing"] = _timing(t0)
    _emit(out)
    return EX_OK


def cmd_search(args) -> int:
    t0 = time.perf_counter()
    start = None
    if args.start:
        start = [list(v) for v in _read_polytope(args.start).vertices]
    cfg = SearchConfig(
        seed=args.seed, dim=args.dim, vertex_budget=args.vertex_budget, coord_range=args.coord_range,
        steps=args.steps, idp_level=args.idp_level, start=start,
    )
    result = local_search(cfg, Path(args.out))
    best = result.best
    _emit({
        "candidates": len(result.candidates),
        "verified": sum(c.idp == "verified" for c in result.candidates),
        "best": best.to_json() if best else None,
        "out": str(args.out),
        "timing": _timing(t0),
    })
    return EX_OK


def build_parser() -> argparse.ArgumentParser:
    threads_default = int(os.environ.get("EHRHART_THREADS", "1"))
    parser = _Parser(prog="ehrhartkit", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=threads_default,
                        help="worker threads (default: $EHRHART_THREADS or 1); never changes results")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify", help="check the claims about a bundled example")
    s.add_argument("target", choices=list(TARGETS) + ["all"])
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("hstar", help="h*-vector and Ehrhart polynomial")
    s.add_argument("input", help="polytope JSON file, '-' for stdin, or a bundled name")
    s.add_argument("--method", choices=["counting", "halfopen"], default="counting")
    s.set_defaults(func=cmd_hstar)

    s = sub.add_parser("idp", help="integer decomposition property")
    s.add_argument("input")
    s.add_argument("--paranoid", type=int, metavar="K_MAX", help="check levels up to K_MAX instead of d-2")
    s.add_argument("--max-points", type=int, help="give up (exit 3) beyond this many points per level")
    s.set_defaults(func=cmd_idp)

    s = sub.add_parser("points", help="lattice points of kP")
    s.add_argument("input")
    s.add_argument("-k", type=int, default=1)
    s.set_defaults(func=cmd_points)

    s = sub.add_parser("count", help="number of lattice points of kP")
    s.add_argument("input")
    s.add_argument("-k", type=int, default=1)
    s.add_argument("--upto", type=int, help="count for k = 1..UPTO")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("arc-polytope", help="arc polytope of a digraph")
    s.add_argument("input", help="digraph JSON {'n': ..., 'arcs': [[tail, head], ...]}")
    s.set_defaults(func=cmd_arc_polytope)

    s = sub.add_parser("triangulations", help="all triangulations (at most d+3 lattice points)")
    s.add_argument("input")
    s.add_argument("--time-budget", type=float, default=3600.0)
    s.set_defaults(func=cmd_triangulations)

    s = sub.add_parser("equiv", help="unimodular equivalence of two polytopes")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("search", help="simulated-annealing search for non-log-concave IDP polytopes")
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--steps", type=int, default=500)
    s.add_argument("--vertex-budget", type=int, default=3)
    s.add_argument("--coord-range", type=int, default=2)
    s.add_argument("--idp-level", choices=IDP_LEVELS, default="full")
    s.add_argument("--start", help="initial polytope (JSON file or bundled name)")
    s.add_argument("--out", default="search-results")
    s.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except BudgetExceeded as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EX_UNDECIDED


if __name__ == "__main__":
    sys.exit(main())

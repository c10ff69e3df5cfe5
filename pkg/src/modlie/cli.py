"""Command-line entry point: ``modlie <command> ...``.

Exit codes: 0 success, 1 a verified mathematical negative (for example a
residual verdict or a failed identity check), 2 an operational error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog, monogamy, orbits, sl2
from .chevalley import antisymmetry_violations, build_algebra, jacobi_scan
from .rootsys import parse_group

OK, NEGATIVE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(payload, fmt: str, text: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.lstrip("-").replace("-", "_"), None) is None]
    if missing:
        raise UsageError(f"{args.command}: missing {', '.join('--' + m if len(m) > 1 else '-' + m for m in missing)}")


# --- orbits ------------------------------------------------------------------


def cmd_orbits(args) -> int:
    if args.family:
        _need(args, "m", "p")
        fam = args.family.upper()
        try:
            top = orbits.v_top_partition(fam, args.m, args.p)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rows = [
            {
                "orbit": o.label,
                "restricted": orbits.is_restricted(o.parts, args.p),
                "in_V": orbits.is_in_V(o.parts, fam, args.p),
            }
            for o in orbits.valid_partitions(fam, args.m)
        ]
        payload = {"family": fam, "m": args.m, "p": args.p, "v_top": top.label, "orbits": rows}
    elif args.group:
        _need(args, "p")
        group = args.group.upper()
        try:
            top = catalog.v_top_orbit(group, args.p)
        except catalog.CatalogError:
            top = None
        rows = []
        if (group, args.p) in catalog.bundled_pairs():
            cat = catalog.bundled(group, args.p)
            alg = cat.algebra()
            for o in cat.entries:
                e = o.e(alg)
                rows.append({
                    "orbit": o.orbit_name,
                    "restricted": sl2.is_restricted(alg, e),
                    "in_V": o.expected_in_V,
                    "rank_ad_p_minus_1": sl2.rank_p_minus_one(alg, e),
                })
        elif top is None:
            raise UsageError(f"nothing known about {group} at p={args.p}")
        payload = {"group": group, "p": args.p, "v_top": top, "orbits": rows}
    else:
        raise UsageError("orbits: give --family with -m, or --group")
    lines = [f"V-top: {payload['v_top']}"]
    for r in payload["orbits"]:
        flags = ("restricted" if r["restricted"] else "-") + ("  in V" if r["in_V"] else "")
        extra = f"  rk ad^(p-1) = {r['rank_ad_p_minus_1']}" if "rank_ad_p_minus_1" in r else ""
        lines.append(f"{r['orbit']:<16} {flags}{extra}")
    _emit(payload, args.format, "\n".join(lines))
    return OK


# --- hasse -------------------------------------------------------------------


def cmd_hasse(args) -> int:
    if args.group:
        _need(args, "p")
        if (args.group.upper(), args.p) != ("G2", 3):
            raise UsageError("exceptional Hasse diagrams are bundled only for G2, p = 3")
        nodes, edges = catalog.g2_p3_hasse()
        name = "G2_p3"
    elif args.family:
        _need(args, "m")
        d = orbits.hasse_diagram(args.family, args.m, split_d=not args.no_split_d)
        nodes = [n.label for n in d.nodes]
        edges = [(a.label, b.label) for a, b in d.edges]
        name = f"{args.family.upper()}{args.m}"
    else:
        raise UsageError("hasse: give --family with -m, or --group with -p")
    if args.format == "json":
        _emit({"nodes": nodes, "edges": [list(e) for e in edges]}, "json", "")
    elif args.format == "text":
        _emit(None, "text", "\n".join(f"{a} > {b}" for a, b in edges))
    else:
        _emit(None, "text", orbits.dot_graph(name, nodes, edges))
    return OK


# --- monogamy ----------------------------------------------------------------


def _certificate_text(c: monogamy.MonogamyCertificate) -> str:
    lines = [f"{c.group} p={c.p} orbit {c.orbit} ({c.regime} characteristic, step 2 {c.mode})"]
    lines.append(f"initial family: {len(c.initial_family['labels'])} variables")
    for s in monogamy._walk_steps(c.steps):
        k = s.get("step")
        if k == 1:
            lines.append(f"step 1: live {s.get('live')}")
        elif k == 2:
            lines.append(f"step 2: {len(s['moves'])} moves, live {s['live']}")
        elif k == 3:
            lines.append(f"step 3: R = {s['R']}, {len(s['rounds'])} rounds, verdict {s['verdict']}")
        elif k == "nilpotency":
            lines.append(f"ad(f)^p = 0: {s['equations']} equations, satisfied at final point: {s['satisfied_at_final']}")
    lines.append(f"verdict: {c.verdict}")
    return "\n".join(lines)


def _run_one(entry: catalog.OrbitEntry, alg, step2):
    return monogamy.run_pipeline(entry.pipeline_input(alg, step2))


def cmd_monogamy(args) -> int:
    _need(args, "group", "p")
    try:
        cat = catalog.bundled(args.group.upper(), args.p)
    except catalog.CatalogError as exc:
        raise UsageError(str(exc)) from None
    alg = cat.algebra()
    step2 = None
    if args.auto:
        step2 = "auto"
    elif args.script:
        with open(args.script, encoding="utf-8") as fh:
            step2 = json.load(fh)
    if args.all_orbits:
        entries = [o for o in cat.entries if o.runnable]
    else:
        _need(args, "orbit")
        try:
            entries = [cat.get(args.orbit)]
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        if not entries[0].runnable:
            raise UsageError(f"{args.orbit}: no pipeline data (no sl2-triple data in the catalog)")
    certs = [_run_one(o, alg, step2) for o in entries]
    if args.format == "json":
        docs = [c.to_dict() for c in certs]
        _emit(docs if args.all_orbits else docs[0], "json", "")
    else:
        _emit(None, "text", "\n\n".join(_certificate_text(c) for c in certs))
    return OK if all(c.verdict == monogamy.UNIQUE for c in certs) else NEGATIVE


# --- rank-order --------------------------------------------------------------


def cmd_rank_order(args) -> int:
    _need(args, "group", "p")
    if not args.orbit or len(args.orbit) != 2:
        raise UsageError("rank-order: give --orbit exactly twice")
    try:
        cat = catalog.bundled(args.group.upper(), args.p)
        x, y = (cat.get(n) for n in args.orbit)
    except (catalog.CatalogError, KeyError) as exc:
        raise UsageError(str(exc.args[0])) from None
    alg = cat.algebra()
    sym, rx, ry = sl2.compare_rank_order(alg, x.e(alg), y.e(alg))
    rel = "<" if rx < ry else ">" if rx > ry else "="
    payload = {"x": x.orbit_name, "y": y.orbit_name, "relation": sym, "rank_x": rx, "rank_y": ry,
               "rank_ad_x": alg.dim - alg.centralizer_dimension(x.e(alg)),
               "rank_ad_y": alg.dim - alg.centralizer_dimension(y.e(alg))}
    _emit(payload, args.format, f"{x.orbit_name} {sym} {y.orbit_name} ({rx} {rel} {ry})")
    return OK


# --- check-algebra -----------------------------------------------------------


def cmd_check_algebra(args) -> int:
    _need(args, "group", "p")
    try:
        alg = build_algebra(parse_group(args.group.upper()), args.p)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    anti = antisymmetry_violations(alg)
    if args.exhaustive:
        checked = alg.dim * (alg.dim - 1) * (alg.dim - 2) // 6
        bad = jacobi_scan(alg)
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(args.seed)
        triples = rng.integers(0, alg.dim, size=(args.samples, 3))
        checked = args.samples
        bad = jacobi_scan(alg, map(tuple, triples.tolist()))
        mode = f"sampled (seed {args.seed})"
    payload = {"group": alg.rs.name, "p": alg.p, "dim": alg.dim, "mode": mode, "triples": checked,
               "jacobi_violations": len(bad), "antisymmetry_violations": len(anti)}
    text = (f"{alg.rs.name} over F_{alg.p}: dim {alg.dim}; Jacobi {mode} on {checked} triples: "
            f"{len(bad)} violations; antisymmetry: {len(anti)} violations")
    _emit(payload, args.format, text)
    return OK if not bad and not anti else NEGATIVE


# --- replay ------------------------------------------------------------------


def cmd_replay(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        doc = json.load(fh)
    docs = doc if isinstance(doc, list) else [doc]
    results = []
    for d in docs:
        ok, problems = monogamy.replay(d)
        results.append({"group": d.get("group"), "p": d.get("p"), "orbit": d.get("orbit"), "ok": ok, "problems": problems})
    text = "\n".join(
        f"{r['group']} p={r['p']} {r['orbit']}: " + ("replay OK" if r["ok"] else "FAILED: " + "; ".join(r["problems"]))
        for r in results
    )
    _emit(results, args.format, text)
    return OK if all(r["ok"] for r in results) else NEGATIVE


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modlie", description="Nilpotent orbits and sl2-triples in modular Lie algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, default_format="text"):
        sp.add_argument("--group", help="exceptional or classical group label, e.g. G2, E7")
        sp.add_argument("-p", type=int, help="the characteristic")
        sp.add_argument("--format", choices=("text", "json", "dot"), default=default_format)
        return sp

    sp = common(sub.add_parser("orbits", help="list orbits with restricted / V flags"))
    sp.add_argument("--family", choices=list("ABCDabcd"))
    sp.add_argument("-m", type=int, help="dimension of the natural module")
    sp.set_defaults(func=cmd_orbits)

    sp = common(sub.add_parser("hasse", help="Hasse diagram as DOT"), "dot")
    sp.add_argument("--family", choices=list("ABCDabcd"))
    sp.add_argument("-m", type=int)
    sp.add_argument("--no-split-d", action="store_true", help="keep one node per very even D-partition")
    sp.set_defaults(func=cmd_hasse)

    sp = common(sub.add_parser("monogamy", help="run the monogamy pipeline on catalog orbits"))
    sp.add_argument("--orbit")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--script", metavar="FILE", help="JSON list of step 2 generators")
    g.add_argument("--auto", action="store_true", help="greedy step 2")
    sp.add_argument("--all-orbits", action="store_true")
    sp.set_defaults(func=cmd_monogamy)

    sp = common(sub.add_parser("rank-order", help="compare rk ad(x)^(p-1) for two catalog orbits"))
    sp.add_argument("--orbit", action="append")
    sp.set_defaults(func=cmd_rank_order)

    sp = common(sub.add_parser("check-algebra", help="Jacobi and antisymmetry checks"))
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--samples", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_check_algebra)

    sp = sub.add_parser("replay", help="re-verify a certificate document")
    sp.add_argument("file")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_replay)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except (catalog.CatalogError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Exit codes: 0 for YES / verified / success, 1 for NO / verification failure,
2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .chordal import ParameterTooLarge, dual_minhlt_chordal
from .fpt import solve_minhlt
from .formats import FormatError, read_gr, read_td, read_tree, read_wt, write_gr, write_tree, write_wt
from .gen import (
    blowup,
    random_chordal,
    random_subcubic_tree_plus_chords,
    random_weighted_tree,
    traceable_graph,
)
from .graph import GraphError, tree_height, verify_dfs_tree

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def _report(args, verdict: str, height: Optional[int], started: float, text: str) -> None:
    if args.json:
        record = {
            "command": args.command if not getattr(args, "problem", None) else f"{args.command} {args.problem}",
            "verdict": verdict,
            "height": height,
            "time_ms": round((time.perf_counter() - started) * 1000, 3),
            "seed": args.seed,
        }
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


def run_solve(args) -> int:
    started = time.perf_counter()
    if args.k < 1:
        raise CliError("--k must be at least 1")
    g = read_gr(_read(args.graph))
    if args.problem == "minhlt":
        td = read_td(_read(args.td)) if args.td else None
        res = solve_minhlt(g, args.k, td)
        bound = args.k
    else:
        if args.td:
            raise CliError("--td only applies to 'solve minhlt'")
        if args.k > g.n:
            raise CliError("dual-chordal needs k <= n")
        res = dual_minhlt_chordal(g, args.k)
        bound = g.n - args.k
    if not res.yes:
        _report(args, "NO", None, started, "NO")
        return EXIT_NO
    # never print YES without re-checking the certificate here
    cert = res.certificate
    h = tree_height(cert)
    if not verify_dfs_tree(g, cert) or h > bound:
        raise CliError("internal error: certificate failed self-verification")
    if args.out:
        _write(args.out, write_tree(cert))
    _report(args, "YES", h, started, f"YES height={h}")
    return EXIT_YES


def run_verify(args) -> int:
    started = time.perf_counter()
    g = read_gr(_read(args.graph))
    t = read_tree(_read(args.tree))
    res = verify_dfs_tree(g, t)
    if not res:
        shown = " ".join(str(x + 1) for x in _flat(res.witness))
        _report(args, "INVALID", None, started, f"INVALID {res.reason} {shown}".rstrip())
        return EXIT_NO
    h = tree_height(t)
    if args.max_height is not None and h > args.max_height:
        _report(args, "TOO-HIGH", h, started, f"TOO-HIGH height={h} max={args.max_height}")
        return EXIT_NO
    _report(args, "VALID", h, started, f"VALID height={h}")
    return EXIT_YES


def _flat(witness) -> list:
    out = []
    for x in witness:
        if isinstance(x, tuple):
            out.extend(x)
        else:
            out.append(x)
    return out


def run_generate(args) -> int:
    kind = args.kind
    params = {k: v for k, v in vars(args).items() if k in GEN_PARAMS.get(kind, ()) and v is not None}
    header = f"generator {kind} " + " ".join(f"{k}={params[k]}" for k in sorted(params))
    header += f" seed={args.seed}"
    if kind == "blowup":
        t = read_wt(_read(args.wtree))
        g, _ = blowup(t, args.m)
        _write(args.out, write_gr(g, header))
    elif kind == "chordal":
        g = random_chordal(args.n, args.density, args.seed)
        _write(args.out, write_gr(g, header))
    elif kind == "wtree":
        t = random_weighted_tree(args.n, args.wmax, args.seed)
        if args.out:
            _write(args.out, write_gr(t.tree, header))
            _write(str(Path(args.out).with_suffix(".wt")), write_wt(t))
        else:
            _write(None, write_wt(t))
    elif kind == "traceable":
        g = traceable_graph(args.family, args.m)
        _write(args.out, write_gr(g, header))
    elif kind == "subcubic":
        g = random_subcubic_tree_plus_chords(args.n, args.chords, args.seed)
        _write(args.out, write_gr(g, header))
    return EXIT_YES


GEN_PARAMS = {
    "blowup": ("wtree", "m"),
    "chordal": ("n", "density"),
    "wtree": ("n", "wmax"),
    "traceable": ("family", "m"),
    "subcubic": ("n", "chords"),
}


def bench_rows(suite: str, sizes: Sequence[int], k: int, seed: int, density: float = 0.6) -> list[dict]:
    rows = []
    for i, n in enumerate(sizes):
        inst_seed = seed + i
        if suite == "minhlt":
            g = random_subcubic_tree_plus_chords(n, None, inst_seed)
            started = time.perf_counter()
            res = solve_minhlt(g, k, certify=True)
            elapsed = (time.perf_counter() - started) * 1000
            rows.append({
                "suite": suite, "n": n, "m": g.edge_count, "k": k, "seed": inst_seed,
                "verdict": res.verdict.value, "time_ms": round(elapsed, 3),
                "peak_table": res.stats.get("peak_table"), "width": res.stats.get("width"),
            })
        else:
            g = random_chordal(n, density, inst_seed)
            started = time.perf_counter()
            row = {"suite": suite, "n": n, "m": g.edge_count, "k": k, "seed": inst_seed}
            try:
                res = dual_minhlt_chordal(g, min(k, n))
                row.update(verdict=res.verdict.value, case=res.stats.get("case"),
                           search_steps=res.stats.get("search_steps"))
            except ParameterTooLarge as exc:
                row.update(verdict="REFUSED", case="moderate", note=str(exc))
            row["time_ms"] = round((time.perf_counter() - started) * 1000, 3)
            rows.append(row)
    return rows


def run_bench(args) -> int:
    rows = bench_rows(args.suite, args.sizes, args.k, args.seed, args.density)
    for row in rows:
        if row.get("verdict") == "REFUSED":
            print(f"minhlt bench: {row['note']}", file=sys.stderr)
    if args.json:
        print(json.dumps({"command": "bench", "suite": args.suite, "seed": args.seed, "rows": rows}, sort_keys=True))
        return EXIT_YES
    cols = ["suite", "n", "m", "k", "seed", "verdict", "time_ms"]
    cols += ["peak_table", "width"] if args.suite == "minhlt" else ["case", "search_steps"]
    print("\t".join(cols))
    for row in rows:
        print("\t".join("" if row.get(c) is None else str(row.get(c)) for c in cols))
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="single-line JSON report")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--threads", type=int, default=1, help="accepted; execution is single-threaded")

    p = argparse.ArgumentParser(prog="minhlt", description="Low-height DFS trees: solvers, verifier, generators.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide a height bound")
    solve_sub = solve.add_subparsers(dest="problem", required=True)
    s1 = solve_sub.add_parser("minhlt", parents=[common], help="DFS tree of height <= k")
    s1.add_argument("--k", type=int, required=True)
    s1.add_argument("--td", help="tree decomposition (.td) to use")
    s1.add_argument("--out", help="write the certificate (.tree) here")
    s1.add_argument("graph")
    s2 = solve_sub.add_parser("dual-chordal", parents=[common], help="chordal: DFS tree of height <= n-k")
    s2.add_argument("--k", type=int, required=True)
    s2.add_argument("--td", help=argparse.SUPPRESS)
    s2.add_argument("--out", help="write the certificate (.tree) here")
    s2.add_argument("graph")

    v = sub.add_parser("verify", parents=[common], help="check a DFS tree certificate")
    v.add_argument("graph")
    v.add_argument("tree")
    v.add_argument("--max-height", type=int)

    gen = sub.add_parser("gen", help="generate instances")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    g1 = gen_sub.add_parser("blowup", parents=[common], help="blow up a weighted tree")
    g1.add_argument("--wtree", required=True, help="weighted tree (.wt)")
    g1.add_argument("--m", type=int, required=True)
    g2 = gen_sub.add_parser("chordal", parents=[common], help="random connected chordal graph")
    g2.add_argument("--n", type=int, required=True)
    g2.add_argument("--density", type=float, default=0.5)
    g3 = gen_sub.add_parser("wtree", parents=[common], help="random weighted tree (.gr plus .wt sidecar)")
    g3.add_argument("--n", type=int, required=True)
    g3.add_argument("--wmax", type=int, default=3)
    g4 = gen_sub.add_parser("traceable", parents=[common], help="K_m, C_m or K_{m,m}")
    g4.add_argument("--kind", dest="family", choices=["km", "cm", "kmm"], required=True)
    g4.add_argument("--m", type=int, required=True)
    g5 = gen_sub.add_parser("subcubic", parents=[common], help="random subcubic tree plus short chords")
    g5.add_argument("--n", type=int, required=True)
    g5.add_argument("--chords", type=int)
    for g in (g1, g2, g3, g4, g5):
        g.add_argument("--out", help="output file (default stdout)")

    b = sub.add_parser("bench", parents=[common], help="timing table on seeded instances")
    b.add_argument("--suite", choices=["minhlt", "dual-chordal"], required=True)
    b.add_argument("--sizes", type=int, nargs="*", default=[])
    b.add_argument("--k", type=int, default=3)
    b.add_argument("--density", type=float, default=0.6, help="dual-chordal suite only")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"solve": run_solve, "verify": run_verify, "gen": run_generate, "bench": run_bench}
    try:
        return handlers[args.command](args)
    except (CliError, FormatError, GraphError) as exc:
        print(f"minhlt: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

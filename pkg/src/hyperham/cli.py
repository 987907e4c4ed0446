"""Command-line surface.

Subcommands: gen, solve, verify, classify, pipeline, turan, sweep,
census, report.  Shared exit-code contract: 0 success / found,
1 definite negative, 2 budget exceeded or inconclusive, 3 usage errors.
All randomness flows from the single --seed flag; reports and sweeps
write figures next to their delimited output.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .extremal import GoodnessParams, classify, is_delta_extremal
from .experiments import (
    census_csv,
    generic_record,
    report_figure,
    run_census,
    run_sweep,
    solve_record,
    summarize_records,
    sweep_csv,
    sweep_figure,
)
from .generators import FAMILIES, GeneratorSpec, build, manifest
from .hypergraph import Hypergraph
from .paths import (
    OrderedCycle,
    OrderedPath,
    certificate_from_json_obj,
    check_ell_path,
    check_hamilton_ell_cycle,
)
from .pipeline import assemble_hamilton_cycle
from .records import append_record, instance_hash, load_records
from .search import SearchBudget, find_hamilton_ell_cycle, turan_bound, turan_bruteforce

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3


def _budget(args) -> SearchBudget | None:
    if args.budget_nodes is None and args.budget_secs is None:
        return None
    return SearchBudget(node_limit=args.budget_nodes, time_limit=args.budget_secs)


def _params(args, k: int, ell: int) -> GoodnessParams:
    if not args.params:
        return GoodnessParams.desk_default(k, ell)
    raw = args.params
    if raw.startswith("@"):
        raw = Path(raw[1:]).read_text()
    obj = json.loads(raw)
    if "eps0" in obj:
        return GoodnessParams.from_json_obj({"k": k, "ell": ell, **obj})
    return GoodnessParams.from_eps1(k, ell, Fraction(obj.get("eps1", "3/10")),
                                    paper_mode=bool(obj.get("paper_mode", False)))


def _print(obj, fmt: str = "json") -> None:
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True))
    elif fmt == "text":
        for key, val in sorted(obj.items()) if isinstance(obj, dict) else enumerate(obj):
            print(f"{key}: {val}")
    else:
        print(json.dumps(obj, sort_keys=True))


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.family, n=args.n, k=args.k, ell=args.ell,
                         p=args.p, slack=args.slack, m=args.m, seed=args.seed)
    H = build(spec)
    man = manifest(spec, H)
    out = Path(args.out) if args.out else None
    if out:
        H.save(out)
        man["path"] = str(out)
        manifest_path = out.with_suffix(out.suffix + ".manifest.json")
        manifest_path.write_text(json.dumps(man, sort_keys=True, indent=1) + "\n")
    _print(man, args.format)
    if args.records:
        append_record(args.records, generic_record(
            "gen", instance_hash(H), args.seed, spec.to_json_obj(),
            {"delta_codegree": man.get("delta_codegree"), "edges": man["edges"]}, {}, 0.0))
    return EXIT_OK


def cmd_solve(args) -> int:
    H = Hypergraph.load(args.instance)
    t0 = time.monotonic()
    out = find_hamilton_ell_cycle(H, args.ell, budget=_budget(args), workers=args.workers)
    wall = time.monotonic() - t0
    payload = {
        "verdict": out.verdict,
        "certificate": None if out.certificate is None else out.certificate.to_json_obj(),
        "stats": {"nodes": out.stats.nodes, "depth": out.stats.depth},
        "timing": {"seconds": round(wall, 6)},
    }
    _print(payload, args.format)
    if args.records:
        append_record(args.records, solve_record(H, args.ell, out, args.seed, wall,
                                                 {"workers": args.workers}))
    if out.verdict == "found":
        return EXIT_OK
    if out.verdict == "exhausted-no":
        return EXIT_NEGATIVE
    return EXIT_BUDGET


def cmd_verify(args) -> int:
    H = Hypergraph.load(args.instance)
    cert_obj = json.loads(Path(args.certificate).read_text())
    cert = certificate_from_json_obj(cert_obj)
    kind = args.kind
    if kind == "auto":
        kind = "cycle" if isinstance(cert, OrderedCycle) else "path"
    if kind == "cycle":
        if isinstance(cert, OrderedPath):
            cert = OrderedCycle(cert.k, cert.ell, cert.vertices)
        verdict = check_hamilton_ell_cycle(H, cert)
    else:
        if isinstance(cert, OrderedCycle):
            cert = OrderedPath(cert.k, cert.ell, cert.vertices)
        verdict = check_ell_path(H, cert)
    _print(verdict.to_json_obj(), args.format)
    return EXIT_OK if verdict.ok else EXIT_NEGATIVE


def cmd_classify(args) -> int:
    H = Hypergraph.load(args.instance)
    params = _params(args, H.k, args.ell)
    t0 = time.monotonic()
    ok, part, report = is_delta_extremal(H, params, seed=args.seed)
    cls = classify(H, part, params)
    wall = time.monotonic() - t0
    payload = {"extremal": ok, "partition": part.to_json_obj(),
               "extremal_report": report, "classification": cls.to_json_obj()}
    _print(payload, args.format)
    if args.records:
        append_record(args.records, generic_record(
            "classify", instance_hash(H), args.seed,
            {"ell": args.ell, **params.to_json_obj()},
            {"extremal": ok, "q": cls.q, "V0": len(cls.v0)},
            {"classification": cls.to_json_obj()}, wall))
    return EXIT_OK


def cmd_pipeline(args) -> int:
    H = Hypergraph.load(args.instance)
    params = _params(args, H.k, args.ell)
    h = instance_hash(H)
    t0 = time.monotonic()
    result = assemble_hamilton_cycle(H, args.ell, params=params, budget=_budget(args),
                                     seed=args.seed, workers=args.workers)
    wall = time.monotonic() - t0
    for st in result.stages:
        _print({"inputs": h, **st.to_json_obj()}, args.format)
    payload = {"verdict": result.verdict,
               "cycle": None if result.cycle is None else result.cycle.to_json_obj()}
    _print(payload, args.format)
    if args.records:
        append_record(args.records, generic_record(
            "pipeline", h, args.seed, {"ell": args.ell, **params.to_json_obj()},
            {"verdict": result.verdict,
             "stages": [(st.stage, st.verdict) for st in result.stages]},
            {} if result.cycle is None else {"cycle": result.cycle.to_json_obj()}, wall))
    if result.verdict == "found":
        return EXIT_OK
    if result.verdict == "no-cycle":
        return EXIT_NEGATIVE
    return EXIT_BUDGET


def cmd_turan(args) -> int:
    bound = turan_bound(args.n, args.k, args.r)
    t0 = time.monotonic()
    brute = turan_bruteforce(args.n, args.k, args.r, budget=_budget(args))
    wall = time.monotonic() - t0
    payload = {"n": args.n, "k": args.k, "r": args.r, "bound": str(bound),
               "bruteforce": brute.to_json_obj(),
               "conforms": Fraction(brute.value) <= bound}
    _print(payload, args.format)
    if args.records:
        append_record(args.records, generic_record(
            "turan", f"turan-{args.n}-{args.k}-{args.r}", args.seed,
            {"n": args.n, "k": args.k, "r": args.r},
            {"value": brute.value, "exact": brute.exact, "bound": str(bound)}, {}, wall))
    return EXIT_OK if brute.exact else EXIT_BUDGET


def _parse_grid(text: str) -> list[tuple[int, int, int]]:
    cells = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        n, k, ell = (int(x) for x in chunk.split(","))
        cells.append((n, k, ell))
    return cells


def cmd_sweep(args) -> int:
    grid = _parse_grid(args.grid)
    t0 = time.monotonic()
    rows = run_sweep(grid, budget=_budget(args), workers=args.workers)
    wall = time.monotonic() - t0
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "sweep.csv").write_text(sweep_csv(rows))
    (out_dir / "sweep.json").write_text(json.dumps(
        [r.to_json_obj() for r in rows], sort_keys=True, indent=1) + "\n")
    sweep_figure(rows, out_dir / "sweep.png")
    if args.format == "csv":
        sys.stdout.write(sweep_csv(rows))
    else:
        _print({"rows": [r.to_json_obj() for r in rows], "out": str(out_dir)}, args.format)
    if args.records:
        append_record(args.records, generic_record(
            "sweep", f"grid-{args.grid}", args.seed, {"grid": args.grid},
            {"rows": [r.to_json_obj() for r in rows]}, {}, wall))
    if any(r.verdict == "budget-exceeded" for r in rows):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_census(args) -> int:
    H = Hypergraph.load(args.instance)
    params = _params(args, H.k, args.ell)
    if args.b_set:
        B = frozenset(int(x) for x in args.b_set.split(","))
    else:
        from .extremal import minimize_eb
        B = minimize_eb(H, params, seed=args.seed).B
    betas = None
    if args.betas:
        betas = [Fraction(x) for x in args.betas.split(",")]
    t0 = time.monotonic()
    rows, meta = run_census(H, B, params, betas)
    wall = time.monotonic() - t0
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "census.csv").write_text(census_csv(rows))
        (out_dir / "census.json").write_text(json.dumps(
            {"meta": meta, "rows": [r.to_json_obj() for r in rows]},
            sort_keys=True, indent=1) + "\n")
    if args.format == "csv":
        sys.stdout.write(census_csv(rows))
    else:
        _print({"meta": meta, "rows": [r.to_json_obj() for r in rows]}, args.format)
    if args.records:
        append_record(args.records, generic_record(
            "census", instance_hash(H), args.seed,
            {"ell": args.ell, **params.to_json_obj(), "B": sorted(B)},
            {"violations": meta["violations"], "hypothesis_ok": meta["hypothesis_ok"]},
            {}, wall))
    return EXIT_OK if meta["violations"] == 0 else EXIT_NEGATIVE


def cmd_report(args) -> int:
    if not args.records:
        print("error: report needs --records STORE", file=sys.stderr)
        return EXIT_USAGE
    records, corrupt = load_records(args.records)
    summary = summarize_records(records)
    summary["corrupt_lines"] = corrupt
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(json.dumps(summary, sort_keys=True, indent=1) + "\n")
    lines = [f"records: {summary['total']}", f"corrupt lines skipped: {corrupt}"]
    for cmd, agg in summary["commands"].items():
        lines.append(f"  {cmd}: {agg['count']} runs, {agg['wall_time']:.3f}s")
        for verdict, count in sorted(agg["verdicts"].items()):
            lines.append(f"    {verdict}: {count}")
    (out_dir / "report.txt").write_text("\n".join(lines) + "\n")
    if records:
        report_figure(records, out_dir / "report.png")
    if args.format == "text":
        print("\n".join(lines))
    else:
        _print(summary, args.format)
    if corrupt:
        print(f"warning: skipped {corrupt} corrupt record line(s)", file=sys.stderr)
        return EXIT_NEGATIVE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperham",
                                 description="Hamilton ell-cycle toolkit for k-uniform hypergraphs")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="64-bit seed for all randomness")
        p.add_argument("--budget-nodes", type=int, default=None)
        p.add_argument("--budget-secs", type=float, default=None)
        p.add_argument("--params", type=str, default=None,
                       help='goodness params as JSON or @file, e.g. {"eps1":"3/10"}')
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--records", type=str, default=None,
                       help="append an experiment record to this JSONL store")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--slack", type=int, default=0)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--out", type=str, default=None)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="exact Hamilton ell-cycle decision")
    p.add_argument("instance")
    p.add_argument("--ell", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a path/cycle certificate")
    p.add_argument("instance")
    p.add_argument("certificate")
    p.add_argument("--kind", choices=("auto", "path", "cycle"), default="auto")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="extremal partition and three-way classification")
    p.add_argument("instance")
    p.add_argument("--ell", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("pipeline", help="full extremal pipeline with staged trace")
    p.add_argument("instance")
    p.add_argument("--ell", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("turan", help="tight-path Turan bound and brute force")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_turan)

    p = sub.add_parser("sweep", help="threshold bracket sweep over a grid")
    p.add_argument("--grid", type=str, required=True, help='cells "n,k,ell;n,k,ell;..."')
    p.add_argument("--out", type=str, default="sweep_out")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("census", help="bad-set counting bounds, exhaustively")
    p.add_argument("instance")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--b-set", type=str, default=None, help="comma-separated B (default: minimized)")
    p.add_argument("--betas", type=str, default=None, help="comma-separated fractions")
    p.add_argument("--out", type=str, default=None)
    common(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("report", help="aggregate a record store")
    p.add_argument("--out", type=str, default="report_out")
    common(p)
    p.set_defaults(func=cmd_report)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: generate, analyze, nibble, pack, oracle, verify, bench.
Exit codes: 0 target met, 2 target unmet, 1 usage or invariant error.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import engine, oracle
from .generators import FAMILIES, InstanceSpec, generate
from .graph import GraphError, OrientedGraph, is_tournament, read_og, semidegree_profile, write_og
from .nibble import run_nibble, triangle_hypergraph, greedy_complete
from .report import load_report, verify_report, write_report
from .rng import substream
from .triangles import classify_edges, count_tri_band, lemma_bad_bounds, total_cyclic_triangles, triangles_per_vertex

EXIT_OK, EXIT_ERROR, EXIT_UNMET = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_instance(p, with_k=True):
    g = p.add_argument_group("instance (give --graph or --family)")
    g.add_argument("--graph", help="path to an .og file")
    g.add_argument("--family", choices=FAMILIES)
    g.add_argument("--n", type=int)
    if with_k:
        g.add_argument("--k", dest="inst_k", type=int, help="extremal_thm1 parameter (n = 18k + 3)")
    g.add_argument("--sizes", type=_int_list, help="layered_circulant class sizes a,b,c")
    g.add_argument("--epsilon", type=float, default=0.0, help="layered_circulant imbalance")
    g.add_argument("--gen-seed", type=int, default=0, help="seed for random families")


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="run seed (u64)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "tsv"), default="json")


def _add_knobs(p):
    p.add_argument("--c", type=float, default=0.05)
    p.add_argument("--c2", type=float, default=0.5)
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--max-bites", type=int, default=200)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--slack-c", type=int, default=10)
    p.add_argument("--M", type=int, default=12)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--absorb-budget", type=int, default=10_000)
    p.add_argument("--fallback-budget", type=int, default=2000)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cyclepack", description="Cycle packings in oriented graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="write an instance as .og")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--n", type=int)
    gen.add_argument("--k", type=int, help="extremal_thm1 parameter (n = 18k + 3)")
    gen.add_argument("--sizes", type=_int_list)
    gen.add_argument("--epsilon", type=float, default=0.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="output .og path (default: stdout)")

    an = sub.add_parser("analyze", help="degree profile, triangle counts, goodness")
    _add_instance(an)
    _add_common(an)
    an.add_argument("--a", type=Fraction, default=Fraction(1, 32), help="goodness threshold")

    nb = sub.add_parser("nibble", help="run the nibble on the triangle hypergraph")
    _add_instance(nb)
    _add_common(nb)
    nb.add_argument("--eps", type=float, default=0.05)
    nb.add_argument("--c2", type=float, default=0.5)
    nb.add_argument("--gamma", type=float, default=0.9)
    nb.add_argument("--max-bites", type=int, default=200)
    nb.add_argument("--greedy", action="store_true", help="finish with greedy completion")

    pk = sub.add_parser("pack", help="run a packing pipeline")
    _add_instance(pk, with_k=False)
    _add_common(pk)
    _add_knobs(pk)
    pk.add_argument("--mode", choices=tuple(engine.PIPELINES), default="triangles")
    pk.add_argument("--lengths", type=_int_list)
    pk.add_argument("--k", dest="cycle_k", type=int, help="cycle length for k-cycles mode")
    pk.add_argument("--report", help="write the JSON report here")

    orc = sub.add_parser("oracle", help="exact answers for small instances")
    _add_instance(orc)
    _add_common(orc)
    orc.add_argument("--mode", choices=("max-triangles", "feasible", "count"), default="max-triangles")
    orc.add_argument("--lengths", type=_int_list)
    orc.add_argument("--report", help="write a JSON result here")

    vf = sub.add_parser("verify", help="re-check a report against its graph")
    vf.add_argument("report")
    vf.add_argument("graph")

    bn = sub.add_parser("bench", help="repeat a pipeline over many seeds")
    _add_instance(bn, with_k=False)
    _add_common(bn)
    _add_knobs(bn)
    bn.add_argument("--mode", choices=tuple(engine.PIPELINES), default="triangles")
    bn.add_argument("--lengths", type=_int_list)
    bn.add_argument("--k", dest="cycle_k", type=int)
    bn.add_argument("--trials", type=int, default=10)
    bn.add_argument("--jobs", type=int, default=1)
    return p


def _load_instance(args) -> OrientedGraph:
    if (args.graph is None) == (args.family is None):
        raise UsageError("give exactly one instance source: --graph or --family")
    if args.graph is not None:
        return read_og(args.graph)
    return _generate(args.family, args.n, getattr(args, "inst_k", None), args.sizes, args.epsilon, args.gen_seed)


def _generate(family, n, k, sizes, epsilon, seed) -> OrientedGraph:
    if family == "extremal_thm1" and k is not None:
        if n is not None and n != 18 * k + 3:
            raise UsageError(f"--n {n} disagrees with --k {k} (n = 18k + 3)")
        n = 18 * k + 3
    if n is None:
        raise UsageError("--n is required for this family")
    params = {}
    if sizes is not None:
        params["sizes"] = tuple(sizes)
    if epsilon:
        params["epsilon"] = epsilon
    return generate(InstanceSpec(family, n, seed, params))


def _emit(args, data: dict, rows=None) -> None:
    if args.format == "json":
        text = json.dumps(data, indent=2, default=str) + "\n"
    else:
        rows = rows if rows is not None else [(k, v) for k, v in data.items() if not isinstance(v, (list, dict))]
        text = "".join(f"{k}\t{v}\n" for k, v in rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> engine.PackingConfig:
    return engine.PackingConfig(c=args.c, c2=args.c2, gamma=args.gamma, max_bites=args.max_bites, eps=args.eps,
                                slack_C=args.slack_c, M=args.M, T=args.T, absorb_budget=args.absorb_budget,
                                fallback_budget=args.fallback_budget)


def _run_pipeline(g, mode, lengths, k, seed, cfg) -> engine.PackingReport:
    if mode == "triangles":
        return engine.pack_triangles(g, seed, cfg)
    if mode == "k-cycles":
        if k is None:
            raise UsageError("--mode k-cycles needs --k")
        return engine.pack_k_cycles(g, k, seed, cfg)
    if lengths is None:
        raise UsageError(f"--mode {mode} needs --lengths")
    return engine.PIPELINES[mode](g, lengths, seed, cfg)


def cmd_generate(args) -> int:
    g = _generate(args.family, args.n, args.k, args.sizes, args.epsilon, args.seed)
    if args.out:
        write_og(g, args.out)
    else:
        sys.stdout.write(g.to_og())
    return EXIT_OK


def cmd_analyze(args) -> int:
    g = _load_instance(args)
    prof = semidegree_profile(g)
    per_vertex = triangles_per_vertex(g)
    lo, hi = count_tri_band(g.n, prof.slack_c)
    good = classify_edges(g, args.a)
    bad_counts = [len(s) for s in good.bad_for]
    _, bound = lemma_bad_bounds(g.n, args.a, prof.slack_c)
    hist = np.bincount(good.edge_counts[good.adjacency]) if g.num_edges else np.zeros(0, dtype=int)
    data = {
        "instance_sha256": g.sha256,
        "n": g.n,
        "m": g.num_edges,
        "tournament": is_tournament(g),
        "min_out": prof.min_out,
        "min_in": prof.min_in,
        "min_semidegree": prof.min_semi,
        "slack_c": str(prof.slack_c),
        "cyclic_triangles": total_cyclic_triangles(g),
        "per_vertex_min": min(per_vertex, default=0),
        "per_vertex_max": max(per_vertex, default=0),
        "band": [str(lo), str(hi)],
        "band_ok": all(lo <= t <= hi for t in per_vertex),
        "a": str(args.a),
        "max_bad_per_vertex": max(bad_counts, default=0),
        "bad_bound": str(bound),
        "bad_bound_ok": all(b <= bound for b in bad_counts),
        "edge_triangle_histogram": {str(i): int(c) for i, c in enumerate(hist) if c},
    }
    _emit(args, data)
    return EXIT_OK


def cmd_nibble(args) -> int:
    g = _load_instance(args)
    h = triangle_hypergraph(g)
    trace = run_nibble(h, args.eps, seed=substream(args.seed, "nibble"), c2=args.c2, gamma=args.gamma,
                       max_bites=args.max_bites)
    data = trace.to_dict()
    data["instance_sha256"] = g.sha256
    if args.greedy:
        matching = greedy_complete(h, trace.final_matching, seed=substream(args.seed, "greedy"))
        data["greedy_matching_size"] = len(matching)
        data["greedy_uncovered"] = g.n - 3 * len(matching)
    _emit(args, data, rows=list(trace.summary().items()) if args.format == "tsv" else None)
    return EXIT_OK


def cmd_pack(args) -> int:
    g = _load_instance(args)
    rep = _run_pipeline(g, args.mode, args.lengths, args.cycle_k, args.seed, _config(args))
    if args.report:
        write_report(rep, args.report)
    summary = [("status", rep.status), ("mode", rep.command), ("n", rep.n), ("cycles", len(rep.cycles)),
               ("uncovered", len(rep.uncovered)), ("wall_ms", round(rep.wall_ms, 1))]
    _emit(args, rep.to_dict() if args.format == "json" else dict(summary), rows=summary)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return rep.exit_code


def cmd_oracle(args) -> int:
    g = _load_instance(args)
    t0 = time.perf_counter()
    code = EXIT_OK
    if args.mode == "max-triangles":
        size, witness = oracle.oracle_max_triangle_packing(g)
        data = {"mode": args.mode, "value": size, "witness": [list(c) for c in witness]}
    elif args.mode == "feasible":
        if args.lengths is None:
            raise UsageError("--mode feasible needs --lengths")
        ok, witness = oracle.oracle_prescribed_feasible(g, args.lengths)
        data = {"mode": args.mode, "value": ok, "witness": [list(c) for c in witness] if witness else None}
        code = EXIT_OK if ok else EXIT_UNMET
    else:
        data = {"mode": args.mode, "value": oracle.count_perfect_packings(g)}
    data["instance_sha256"] = g.sha256
    data["wall_ms"] = (time.perf_counter() - t0) * 1000.0
    if args.report:
        Path(args.report).write_text(json.dumps(data, indent=2) + "\n")
    if args.format == "tsv" or args.out:
        _emit(args, data)
    else:
        print(data["value"])
    return code


def cmd_verify(args) -> int:
    g = read_og(args.graph)
    problems = verify_report(load_report(args.report), g)
    for p in problems:
        print(p, file=sys.stderr)
    if problems:
        return EXIT_ERROR
    print("ok")
    return EXIT_OK


def _bench_one(job):
    g, mode, lengths, k, seed, cfg = job
    rep = _run_pipeline(g, mode, lengths, k, seed, cfg)
    return seed, rep.target_met, len(rep.uncovered), rep.wall_ms


def cmd_bench(args) -> int:
    g = _load_instance(args)
    cfg = _config(args)
    jobs = [(g, args.mode, args.lengths, args.cycle_k, args.seed + i, cfg) for i in range(args.trials)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_one, jobs))
    else:
        results = [_bench_one(j) for j in jobs]
    met = sum(r[1] for r in results)
    data = {
        "instance_sha256": g.sha256,
        "mode": args.mode,
        "trials": len(results),
        "target_met": met,
        "success_rate": met / max(len(results), 1),
        "median_uncovered": statistics.median(r[2] for r in results) if results else 0,
        "max_wall_ms": max((r[3] for r in results), default=0.0),
        "runs": [{"seed": s, "target_met": ok, "uncovered": u, "wall_ms": w} for s, ok, u, w in results],
    }
    rows = [(k, v) for k, v in data.items() if k != "runs"] if args.format == "tsv" else None
    _emit(args, data, rows=rows)
    return EXIT_OK if met == len(results) else EXIT_UNMET


COMMANDS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "nibble": cmd_nibble,
    "pack": cmd_pack,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"cyclepack: error: {err}", file=sys.stderr)
        return EXIT_ERROR
    except (GraphError, ValueError, OSError) as err:
        print(f"cyclepack: error: {err}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line interface.

Subcommands: hopcount, route, bench {time,length,scalability}, validate,
scan-extrema.  Benchmark CSV goes to --output (or stdout); summaries and
reports are JSON.  Exit codes: 0 success, 2 spec/usage error, 3 internal
invariant violation.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from . import bench, exact, geometry, heuristic, hopcount
from .backend import backend_name
from .errors import InvariantError, SpecParseError
from .router import ALGORITHMS
from .walker import SatId, parse_spec


def _parse_sat(text: str) -> SatId:
    try:
        o, i = text.split(",")
        return SatId(int(o), int(i))
    except ValueError:
        raise ValueError(f"expected satellite as 'plane,index', got {text!r}") from None


def _sampler_args(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--sample", type=int, metavar="N",
                       help="number of random distinct pairs (default 1000)")
    group.add_argument("--all-pairs", action="store_true",
                       help="enumerate every unordered satellite pair")


def _common_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="sampler / coin-flip seed")
    sub.add_argument("--output", metavar="PATH", help="write CSV/JSON to this file")
    sub.add_argument("--json", action="store_true", help="machine-readable summary")
    sub.add_argument("--no-parallel", action="store_true",
                     help="run single-process (less timing jitter)")


def _make_sampler(args) -> bench.PairSampler:
    if args.all_pairs:
        return bench.PairSampler("all-pairs")
    return bench.PairSampler("random", count=args.sample or 1000, seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satroute",
        description="Walker Delta constellation minimum-hop routing toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hopcount", help="closed-form hop counts for one pair")
    p.add_argument("spec")
    p.add_argument("src")
    p.add_argument("dst")

    p = sub.add_parser("route", help="compute one route")
    p.add_argument("spec")
    p.add_argument("src")
    p.add_argument("dst")
    p.add_argument("--alg", choices=ALGORITHMS, default="discoroute")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bench", help="benchmark suites (CSV output)")
    bench_sub = p.add_subparsers(dest="suite", required=True)
    for suite in ("time", "length", "scalability"):
        sp = bench_sub.add_parser(suite)
        if suite != "scalability":
            sp.add_argument("--spec", required=True)
            _sampler_args(sp)
        else:
            sp.add_argument("--sample", type=int, metavar="N",
                            help="random pairs per constellation (default 1000)")
        sp.add_argument("--algorithms", metavar="A,B,...",
                        help=f"comma-separated subset of {','.join(ALGORITHMS)}")
        if suite == "time":
            sp.add_argument("--repetitions", type=int, default=10)
        _common_args(sp)

    p = sub.add_parser("validate", help="formula-vs-oracle and hop statistics report")
    p.add_argument("--spec", required=True)
    _sampler_args(p)
    _common_args(p)

    p = sub.add_parser("scan-extrema", help="numeric scan of inter-plane hop extrema")
    p.add_argument("spec")
    p.add_argument("--resolution", type=int, default=1_000_000)

    return parser


def _algorithms(args) -> tuple[str, ...]:
    if not getattr(args, "algorithms", None):
        return ALGORITHMS
    algs = tuple(a.strip() for a in args.algorithms.split(",") if a.strip())
    for a in algs:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}; expected one of {ALGORITHMS}")
    return algs


def _emit_csv_and_summary(args, records, summary: dict) -> None:
    if args.output:
        bench.write_csv(args.output, records)
        out = json.dumps(summary, indent=2) if args.json else _summary_text(summary)
        print(out)
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(bench.CSV_HEADER.split(","))
        for rec in records:
            writer.writerow(rec.csv_row())
        print(_summary_text(summary), file=sys.stderr)


def _summary_text(summary: dict) -> str:
    return json.dumps(summary, indent=2)


def _cmd_hopcount(args) -> int:
    params = parse_spec(args.spec)
    src, dst = _parse_sat(args.src), _parse_sat(args.dst)
    res = hopcount.min_hop_count(params, src, dst)
    payload = {
        "constellation": params.to_spec(),
        "src": list(src),
        "dst": list(dst),
        "h_east": res.h_east,
        "h_west": res.h_west,
        "v_succ_east": res.v_succ_east,
        "v_pred_east": res.v_pred_east,
        "v_succ_west": res.v_succ_west,
        "v_pred_west": res.v_pred_west,
        "combos": [
            {"horizontal": c.horizontal, "vertical": c.vertical,
             "h_count": c.h_count, "v_count": c.v_count, "total": c.total}
            for c in res.combos
        ],
        "min_total": res.min_total,
        "minimizing_combos": [
            {"horizontal": c.horizontal, "vertical": c.vertical,
             "h_count": c.h_count, "v_count": c.v_count, "total": c.total}
            for c in res.minimizing_combos
        ],
        "restricted_min_total": hopcount.min_hop_count_restricted(params, src, dst),
    }
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_route(args) -> int:
    params = parse_spec(args.spec)
    src, dst = _parse_sat(args.src), _parse_sat(args.dst)
    fn = {
        "dijkstra": exact.dijkstra,
        "dijkstra-hops": exact.dijkstra_hops,
        "dag-short": exact.dag_shortest,
        "dag-long": exact.dag_longest,
        "coinflip": lambda p, s, d: heuristic.coin_flip_route(p, s, d, args.seed),
        "discoroute": heuristic.disco_route,
    }[args.alg]
    t0 = time.perf_counter_ns()
    route = fn(params, src, dst)
    wall = time.perf_counter_ns() - t0
    exact.validate_route(params, route)
    payload = {
        "constellation": params.to_spec(),
        "algorithm": args.alg,
        "src": list(src),
        "dst": list(dst),
        "hops": [list(s) for s in route.hops],
        "per_hop_km": list(route.per_hop_lengths),
        "total_km": route.total_length,
        "hop_count": route.hop_count,
        "wall_time_ns": wall,
        "backend": backend_name(),
    }
    if args.alg == "coinflip":
        payload["seed"] = args.seed
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_bench(args) -> int:
    algorithms = _algorithms(args)
    parallel = not args.no_parallel
    if args.suite == "time":
        params = parse_spec(args.spec)
        records = bench.bench_time(
            params, _make_sampler(args), algorithms,
            repetitions=args.repetitions, seed=args.seed, parallel=parallel,
        )
        summary = _time_summary(records, algorithms)
    elif args.suite == "length":
        params = parse_spec(args.spec)
        records = bench.bench_length(
            params, _make_sampler(args), algorithms, seed=args.seed, parallel=parallel,
        )
        summary = _length_summary(records)
    else:
        records, summary = bench.bench_scalability(
            algorithms, sample_size=args.sample or 1000, seed=args.seed,
            parallel=parallel,
        )
    _emit_csv_and_summary(args, records, summary)
    return 0


def _time_summary(records, algorithms) -> dict:
    by_alg: dict[str, list[int]] = {a: [] for a in algorithms}
    for rec in records:
        by_alg[rec.algorithm].append(rec.elapsed_ns)
    means = {a: (sum(v) / len(v) if v else None) for a, v in by_alg.items()}
    summary = {
        "backend": backend_name(),
        "pairs": len(records) // max(len(algorithms), 1),
        "mean_elapsed_ns": means,
    }
    if "dijkstra" in by_alg and by_alg["dijkstra"]:
        base = by_alg["dijkstra"]
        speedups = {}
        for a, v in by_alg.items():
            if a != "dijkstra" and v:
                speedups[a] = sum(b / x for b, x in zip(base, v)) / len(v)
        summary["mean_speedup_vs_dijkstra"] = speedups
    return summary


def _length_summary(records) -> dict:
    by_alg: dict[str, list[float]] = {}
    for rec in records:
        by_alg.setdefault(rec.algorithm, []).append(rec.relative_diff)
    return {
        "backend": backend_name(),
        "mean_relative_diff": {a: sum(v) / len(v) for a, v in by_alg.items()},
        "max_relative_diff": {a: max(v) for a, v in by_alg.items()},
        "min_relative_diff": {a: min(v) for a, v in by_alg.items()},
    }


def _cmd_validate(args) -> int:
    params = parse_spec(args.spec)
    report = bench.validate(params, _make_sampler(args), parallel=not args.no_parallel)
    text = json.dumps(report, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def _cmd_scan(args) -> int:
    params = parse_spec(args.spec)
    scan = geometry.scan_horizontal_extrema(params, args.resolution)
    payload = {
        "constellation": params.to_spec(),
        "resolution": scan.resolution,
        "grid_step_rad": scan.grid_step_rad,
        "max": {"u1": scan.maximum.u1, "u2": scan.maximum.u2,
                "distance_km": scan.maximum.distance_km,
                "deviation_from_conjecture_rad": scan.max_deviation_rad},
        "min": {"u1": scan.minimum.u1, "u2": scan.minimum.u2,
                "distance_km": scan.minimum.distance_km,
                "deviation_from_conjecture_rad": scan.min_deviation_rad},
    }
    print(json.dumps(payload, indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "hopcount": _cmd_hopcount,
        "route": _cmd_route,
        "bench": _cmd_bench,
        "validate": _cmd_validate,
        "scan-extrema": _cmd_scan,
    }[args.command]
    try:
        return handler(args)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

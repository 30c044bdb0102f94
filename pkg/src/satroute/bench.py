"""Benchmark and validation harness.

Produces the measurement data behind the evaluation figures: per-pair run
times, route-length comparisons against the minimum-hop shortest baseline,
scalability across growing constellations, and the closed-form-vs-oracle
validation report.  Records are emitted as CSV rows with a fixed schema; all
columns except the elapsed times are deterministic given the seeds.
"""
from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import hopcount
from .backend import backend_name, kernels
from .errors import InvariantError
from .router import ALGORITHMS, route_ids
from .walker import ConstellationParams, ConstellationModel, SatId, compile_model, parse_spec

CSV_HEADER = (
    "constellation,src_o,src_i,dst_o,dst_i,algorithm,hop_count,"
    "total_length_km,relative_diff,elapsed_ns,seed,repetitions"
)

#: The four growing test constellations of the scalability suite.
SCALABILITY_PRESETS = (
    "60:500/25/5@550",
    "60:2000/50/10@550",
    "60:8000/100/20@550",
    "60:32000/200/40@550",
)


@dataclass(frozen=True)
class BenchRecord:
    """One measurement row; None fields become empty CSV cells."""

    constellation: str
    src: SatId | None
    dst: SatId | None
    algorithm: str
    hop_count: int | None
    total_length_km: float | None
    relative_diff: float | None
    elapsed_ns: int | None
    seed: int | None
    repetitions: int | None

    def csv_row(self) -> list[str]:
        def cell(v) -> str:
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(v)
            return str(v)

        src = self.src if self.src is not None else (None, None)
        dst = self.dst if self.dst is not None else (None, None)
        return [
            self.constellation,
            cell(src[0]), cell(src[1]), cell(dst[0]), cell(dst[1]),
            self.algorithm,
            cell(self.hop_count),
            cell(self.total_length_km),
            cell(self.relative_diff),
            cell(self.elapsed_ns),
            cell(self.seed),
            cell(self.repetitions),
        ]


def write_csv(path: str, records: Iterable[BenchRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER.split(","))
        for rec in records:
            writer.writerow(rec.csv_row())


@dataclass(frozen=True)
class PairSampler:
    """Unordered distinct satellite pairs: everything, or a seeded sample."""

    mode: str = "all-pairs"  # "all-pairs" | "random"
    count: int = 0
    seed: int = 0

    def describe(self) -> str:
        if self.mode == "all-pairs":
            return "all-pairs"
        return f"random({self.count}, seed={self.seed})"

    def pairs(self, n: int) -> np.ndarray:
        """(m, 2) array of flat indices with src < dst."""
        total = n * (n - 1) // 2
        if self.mode == "all-pairs":
            src, dst = np.triu_indices(n, k=1)
            return np.column_stack([src, dst]).astype(np.int64)
        if self.mode != "random":
            raise ValueError(f"unknown sampler mode {self.mode!r}")
        if not 1 <= self.count <= total:
            raise ValueError(f"sample size must be in [1, {total}], got {self.count}")
        rng = np.random.default_rng(self.seed)
        seen: set[tuple[int, int]] = set()
        out: list[tuple[int, int]] = []
        while len(out) < self.count:
            draw = rng.integers(0, n, size=(2 * (self.count - len(out)) + 16, 2))
            for a, b in draw:
                if a == b:
                    continue
                pair = (int(a), int(b)) if a < b else (int(b), int(a))
                if pair not in seen:
                    seen.add(pair)
                    out.append(pair)
                    if len(out) == self.count:
                        break
        return np.array(out, dtype=np.int64)


def _check_route(model: ConstellationModel, ids: list[int], total: float) -> int:
    """Cheap route re-validation on emission; returns the hop count."""
    if len(set(ids)) != len(ids):
        raise InvariantError("route visits a satellite twice")
    nbrs = model.nbrs_rows
    acc = 0.0
    for a, b in zip(ids, ids[1:]):
        if b not in nbrs[a]:
            raise InvariantError(f"benchmark route contains non-ISL hop {a}->{b}")
        acc += model.edge_length(a, b)
    if abs(acc - total) > 1e-9 * max(acc, 1.0):
        raise InvariantError("route length bookkeeping is inconsistent")
    return len(ids) - 1


def _chunks(pairs: np.ndarray, parallel: bool) -> list[np.ndarray]:
    if not parallel or len(pairs) < 256:
        return [pairs]
    workers = os.cpu_count() or 1
    return np.array_split(pairs, workers * 4)


def _pool_map(worker, args_list: list, parallel: bool) -> list:
    if not parallel or len(args_list) <= 1:
        return [worker(args) for args in args_list]
    with ProcessPoolExecutor() as pool:
        return list(pool.map(worker, args_list))


# --- timing suite ---------------------------------------------------------


def _time_chunk(args) -> list[BenchRecord]:
    params, pairs, algorithms, repetitions, seed = args
    model = compile_model(params)
    spec = params.to_spec()
    clock = time.perf_counter_ns
    records = []
    for s, d in pairs:
        s, d = int(s), int(d)
        for alg in algorithms:
            route_ids(model, alg, s, d, seed)  # warm-up, untimed
            elapsed = 0
            for _ in range(repetitions):
                t0 = clock()
                ids, total = route_ids(model, alg, s, d, seed)
                elapsed += clock() - t0
            hops = _check_route(model, ids, total)
            records.append(BenchRecord(
                constellation=spec,
                src=model.sat_id(s), dst=model.sat_id(d),
                algorithm=alg,
                hop_count=hops,
                total_length_km=total,
                relative_diff=None,
                elapsed_ns=elapsed // repetitions,
                seed=seed if alg == "coinflip" else None,
                repetitions=repetitions,
            ))
    return records


def bench_time(
    params: ConstellationParams,
    sampler: PairSampler,
    algorithms: Sequence[str] = ALGORITHMS,
    repetitions: int = 10,
    seed: int = 0,
    parallel: bool = True,
) -> list[BenchRecord]:
    """Per-(pair, algorithm) run times: mean of `repetitions` after a warm-up."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    pairs = sampler.pairs(params.total_sats)
    args = [(params, chunk, tuple(algorithms), repetitions, seed)
            for chunk in _chunks(pairs, parallel)]
    out: list[BenchRecord] = []
    for part in _pool_map(_time_chunk, args, parallel):
        out.extend(part)
    return out


# --- length suite ---------------------------------------------------------


def _length_chunk(args) -> list[BenchRecord]:
    params, pairs, algorithms, seed = args
    model = compile_model(params)
    spec = params.to_spec()
    records = []
    for s, d in pairs:
        s, d = int(s), int(d)
        base_ids, base_total = route_ids(model, "dag-short", s, d)
        for alg in algorithms:
            if alg == "dag-short":
                ids, total = base_ids, base_total
            else:
                ids, total = route_ids(model, alg, s, d, seed)
            hops = _check_route(model, ids, total)
            records.append(BenchRecord(
                constellation=spec,
                src=model.sat_id(s), dst=model.sat_id(d),
                algorithm=alg,
                hop_count=hops,
                total_length_km=total,
                relative_diff=(total - base_total) / base_total if base_total else 0.0,
                elapsed_ns=None,
                seed=seed if alg == "coinflip" else None,
                repetitions=None,
            ))
    return records


def bench_length(
    params: ConstellationParams,
    sampler: PairSampler,
    algorithms: Sequence[str] = ALGORITHMS,
    seed: int = 0,
    parallel: bool = True,
) -> list[BenchRecord]:
    """Route lengths per algorithm, relative to the minimum-hop shortest baseline."""
    algorithms = tuple(algorithms)
    if "dag-short" not in algorithms:
        algorithms = ("dag-short",) + algorithms
    pairs = sampler.pairs(params.total_sats)
    args = [(params, chunk, algorithms, seed) for chunk in _chunks(pairs, parallel)]
    out: list[BenchRecord] = []
    for part in _pool_map(_length_chunk, args, parallel):
        out.extend(part)
    return out


# --- scalability suite ----------------------------------------------------


def _scalability_one(args) -> int:
    params, pairs, algorithm, seed = args
    model = compile_model(params)
    clock = time.perf_counter_ns
    route_ids(model, algorithm, int(pairs[0][0]), int(pairs[0][1]), seed)  # warm-up
    elapsed = 0
    for s, d in pairs:
        t0 = clock()
        route_ids(model, algorithm, int(s), int(d), seed)
        elapsed += clock() - t0
    return elapsed


def bench_scalability(
    algorithms: Sequence[str] = ALGORITHMS,
    sample_size: int = 1000,
    seed: int = 0,
    parallel: bool = True,
    presets: Sequence[str] = SCALABILITY_PRESETS,
) -> tuple[list[BenchRecord], dict]:
    """Total elapsed per (constellation, algorithm) over a seeded pair sample.

    The summary carries the growth factor of each algorithm between
    consecutive constellation sizes.
    """
    if sample_size < 1:
        raise ValueError("sample_size must be >= 1")
    records: list[BenchRecord] = []
    summary: dict = {"sample_size": sample_size, "seed": seed, "algorithms": {}}
    per_alg: dict[str, list] = {alg: [] for alg in algorithms}
    for spec in presets:
        params = parse_spec(spec)
        sampler = PairSampler("random", count=sample_size, seed=seed)
        pairs = sampler.pairs(params.total_sats)
        chunks = _chunks(pairs, parallel)
        for alg in algorithms:
            args = [(params, chunk, alg, seed) for chunk in chunks]
            elapsed = sum(_pool_map(_scalability_one, args, parallel))
            per_alg[alg].append((spec, elapsed))
            records.append(BenchRecord(
                constellation=spec, src=None, dst=None, algorithm=alg,
                hop_count=None, total_length_km=None, relative_diff=None,
                elapsed_ns=elapsed, seed=seed, repetitions=1,
            ))
    for alg, rows in per_alg.items():
        entries = []
        for k, (spec, elapsed) in enumerate(rows):
            factor = elapsed / rows[k - 1][1] if k else None
            entries.append({
                "constellation": spec,
                "total_elapsed_ns": elapsed,
                "growth_factor": factor,
            })
        summary["algorithms"][alg] = entries
    return records, summary


# --- validation suite -----------------------------------------------------


def _validate_source(args) -> dict:
    params, s, dsts = args
    model = compile_model(params)
    src = model.sat_id(int(s))
    table = hopcount.hop_count_table(params, src)
    min_tot = table.min_total[dsts]
    restricted = table.restricted_total(params.planes)[dsts]
    oracle = np.array(hopcount.bfs_distances(params, src))[dsts]

    dist_first, hops_of_shortest = kernels.dijkstra_source(model, int(s), False)
    hops_first_dist, _ = kernels.dijkstra_source(model, int(s), True)

    mism = int((min_tot != oracle).sum())
    chen_excess = restricted - min_tot
    dij_excess = hops_of_shortest[dsts] - min_tot
    gap = hops_first_dist[dsts] - dist_first[dsts]
    rel = gap / dist_first[dsts]
    out = {
        "pairs": len(dsts),
        "mismatches": mism,
        "chen_hist": np.bincount(chen_excess[chen_excess > 0]) if (chen_excess > 0).any() else np.zeros(1, dtype=np.int64),
        "dij_hist": np.bincount(dij_excess[dij_excess > 0]) if (dij_excess > 0).any() else np.zeros(1, dtype=np.int64),
        "max_rel": float(rel.max(initial=0.0)),
        "max_abs": float(gap.max(initial=0.0)),
        "sum_rel_dijkstra": float((-gap / hops_first_dist[dsts]).sum()),
    }
    if chen_excess.min(initial=0) < 0:
        raise InvariantError("restricted hop count below the minimum")
    return out


def validate(
    params: ConstellationParams,
    sampler: PairSampler,
    parallel: bool = True,
) -> dict:
    """Formula-vs-oracle agreement and hop/length statistics over a pair set.

    Uses one full single-source sweep per distinct source (oracle BFS plus
    two lexicographic Dijkstra runs) and reads the sampled destinations off
    the per-source arrays.
    """
    t0 = time.perf_counter()
    n = params.total_sats
    pairs = sampler.pairs(n)
    by_src: dict[int, list[int]] = {}
    for s, d in pairs:
        by_src.setdefault(int(s), []).append(int(d))
    args = [(params, s, np.array(dsts, dtype=np.int64)) for s, dsts in sorted(by_src.items())]

    total_pairs = 0
    mismatches = 0
    chen_hist = np.zeros(1, dtype=np.int64)
    dij_hist = np.zeros(1, dtype=np.int64)
    max_rel = 0.0
    max_abs = 0.0
    sum_rel = 0.0
    chunk = max(1, len(args) // (8 * (os.cpu_count() or 1)))
    for part in _pool_map_chunked(_validate_source, args, parallel, chunk):
        total_pairs += part["pairs"]
        mismatches += part["mismatches"]
        chen_hist = _merge_hist(chen_hist, part["chen_hist"])
        dij_hist = _merge_hist(dij_hist, part["dij_hist"])
        max_rel = max(max_rel, part["max_rel"])
        max_abs = max(max_abs, part["max_abs"])
        sum_rel += part["sum_rel_dijkstra"]

    chen_pairs = int(chen_hist[1:].sum()) if len(chen_hist) > 1 else 0
    dij_pairs = int(dij_hist[1:].sum()) if len(dij_hist) > 1 else 0
    return {
        "constellation": params.to_spec(),
        "backend": backend_name(),
        "sampler": sampler.describe(),
        "pairs": total_pairs,
        "formula_oracle_mismatches": mismatches,
        "formula_oracle_agreement": 1.0 - (mismatches / total_pairs if total_pairs else 0.0),
        "restricted_variant": {
            "excess_pairs": chen_pairs,
            "excess_fraction": chen_pairs / total_pairs,
            "excess_histogram": {
                int(k): int(v) for k, v in enumerate(chen_hist) if k > 0 and v
            },
        },
        "dijkstra_extra_hops": {
            "pairs": dij_pairs,
            "fraction": dij_pairs / total_pairs,
            "excess_histogram": {
                int(k): int(v) for k, v in enumerate(dij_hist) if k > 0 and v
            },
            "max_relative_gap": max_rel,
            "max_absolute_gap_km": max_abs,
        },
        "length_vs_baseline": {
            "mean_relative_diff_dijkstra": sum_rel / total_pairs if total_pairs else 0.0,
        },
        "elapsed_s": time.perf_counter() - t0,
    }


def _merge_hist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) < len(b):
        a, b = b, a
    a = a.copy()
    a[: len(b)] += b
    return a


def _pool_map_chunked(worker, args_list, parallel, chunksize):
    if not parallel or len(args_list) <= 1:
        for args in args_list:
            yield worker(args)
        return
    with ProcessPoolExecutor() as pool:
        yield from pool.map(worker, args_list, chunksize=max(1, chunksize))

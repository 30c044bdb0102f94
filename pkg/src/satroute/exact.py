"""Exact routing algorithms over the ISL graph.

`dijkstra` finds the globally shortest route by Euclidean length,
`dijkstra_hops` the shortest route among those with the minimum hop count,
and `dag_shortest`/`dag_longest` compute the extreme-length minimum-hop
routes by relaxing the rectangular search region in topological order.
"""
from __future__ import annotations

from dataclasses import dataclass

from .backend import kernels
from .errors import InvariantError
from .walker import ConstellationParams, ConstellationModel, SatId, compile_model, isl_distance, neighbors


@dataclass(frozen=True)
class Route:
    """An ISL route: consecutive entries are neighbours, lengths in km."""

    hops: tuple[SatId, ...]
    per_hop_lengths: tuple[float, ...]
    total_length: float

    @property
    def hop_count(self) -> int:
        return len(self.hops) - 1


def route_from_ids(model: ConstellationModel, ids: list[int], total: float) -> Route:
    nbrs = model.nbrs_rows
    per_hop = []
    for a, b in zip(ids, ids[1:]):
        if b not in nbrs[a]:
            raise InvariantError(f"satellites {a} and {b} are not ISL neighbours")
        per_hop.append(model.edge_length(a, b))
    return Route(
        hops=tuple(model.sat_id(i) for i in ids),
        per_hop_lengths=tuple(per_hop),
        total_length=total,
    )


def validate_route(params: ConstellationParams, route: Route) -> None:
    """Check the route invariants: adjacency, length bookkeeping, simplicity."""
    if len(route.hops) != len(route.per_hop_lengths) + 1:
        raise InvariantError("hop list and per-hop lengths disagree")
    if len(set(route.hops)) != len(route.hops):
        raise InvariantError("route visits a satellite twice")
    total = 0.0
    for a, b, length in zip(route.hops, route.hops[1:], route.per_hop_lengths):
        if b not in neighbors(params, a):
            raise InvariantError(f"{a} -> {b} is not an ISL")
        expected = isl_distance(params, a, b)
        if abs(length - expected) > 1e-9 * max(expected, 1.0):
            raise InvariantError(f"hop length {length} != distance {expected}")
        total += length
    if abs(total - route.total_length) > 1e-9 * max(total, 1.0):
        raise InvariantError("total length does not match per-hop sum")


def _run(params: ConstellationParams, src: SatId, dst: SatId, kernel, *args) -> Route:
    model = compile_model(params)
    ids, total = kernel(model, model.sat_index(src), model.sat_index(dst), *args)
    return route_from_ids(model, ids, total)


def dijkstra(params: ConstellationParams, src: SatId, dst: SatId) -> Route:
    """Globally shortest route by total Euclidean length."""
    return _run(params, src, dst, kernels.dijkstra_pair)


def dijkstra_hops(params: ConstellationParams, src: SatId, dst: SatId) -> Route:
    """Shortest route among all routes with the minimum hop count."""
    return _run(params, src, dst, kernels.dijkstra_hops_pair)


def dag_shortest(params: ConstellationParams, src: SatId, dst: SatId) -> Route:
    """Shortest minimum-hop route via DAG relaxation of the search rectangles."""
    return _run(params, src, dst, kernels.dag_route, False)


def dag_longest(params: ConstellationParams, src: SatId, dst: SatId) -> Route:
    """Longest route inside the minimum-hop search rectangles."""
    return _run(params, src, dst, kernels.dag_route, True)

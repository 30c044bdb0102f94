"""On-demand minimum-hop routing heuristics.

Both algorithms run in time linear in the hop count: `coin_flip_route` picks
every free step uniformly at random inside the minimum-hop rectangle, while
`disco_route` places the inter-plane hops as close to the poles as possible
using the satellites' latitudes as the reward signal.
"""
from __future__ import annotations

from dataclasses import dataclass

from .backend import kernels
from .exact import Route, route_from_ids
from .grid import RectangleGrid
from .walker import ConstellationParams, SatId, compile_model, orbital_state


@dataclass(frozen=True)
class RouteQueryContext:
    """Resolved inputs of one heuristic query."""

    rectangle: RectangleGrid
    case: str
    rng_seed: int | None = None


def routing_case(params: ConstellationParams, src: SatId, dst: SatId) -> str:
    """A2A/D2D/A2D/D2A classification from the endpoints' flying directions."""
    a = orbital_state(params, src).ascending
    b = orbital_state(params, dst).ascending
    return ("A" if a else "D") + "2" + ("A" if b else "D")


def coin_flip_route(params: ConstellationParams, src: SatId, dst: SatId, seed: int = 0) -> Route:
    """Random route with exactly the minimum number of hops.

    The seed picks one minimizing rectangle and then drives a fair coin flip
    at every satellite where both directions are still open; once one
    dimension is exhausted the remaining hops are forced.  Deterministic for
    a given (pair, seed).
    """
    model = compile_model(params)
    ids, total = kernels.coin_flip(model, model.sat_index(src), model.sat_index(dst), seed)
    return route_from_ids(model, ids, total)


def disco_route(params: ConstellationParams, src: SatId, dst: SatId) -> Route:
    """Latitude-reward heuristic route with exactly the minimum number of hops.

    Exact (equal to dag_shortest) on constellations with zero phase offset.
    """
    model = compile_model(params)
    ids, total = kernels.disco_route(model, model.sat_index(src), model.sat_index(dst))
    return route_from_ids(model, ids, total)

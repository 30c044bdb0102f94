"""Uniform dispatch over all routing algorithms by CLI name."""
from __future__ import annotations

from .backend import kernels
from .walker import ConstellationModel

ALGORITHMS = (
    "dijkstra",
    "dijkstra-hops",
    "dag-short",
    "dag-long",
    "coinflip",
    "discoroute",
)


def route_ids(
    model: ConstellationModel,
    algorithm: str,
    src: int,
    dst: int,
    seed: int = 0,
) -> tuple[list[int], float]:
    """Run one algorithm on flat satellite indices; returns (ids, total km).

    This is the raw interface the benchmarks time: no Route objects involved.
    `seed` only affects "coinflip".
    """
    if algorithm == "dijkstra":
        return kernels.dijkstra_pair(model, src, dst)
    if algorithm == "dijkstra-hops":
        return kernels.dijkstra_hops_pair(model, src, dst)
    if algorithm == "dag-short":
        return kernels.dag_route(model, src, dst, False)
    if algorithm == "dag-long":
        return kernels.dag_route(model, src, dst, True)
    if algorithm == "coinflip":
        return kernels.coin_flip(model, src, dst, seed)
    if algorithm == "discoroute":
        return kernels.disco_route(model, src, dst)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")

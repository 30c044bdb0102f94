"""Closed-form minimum ISL hop counts between satellites.

The hop count between two satellites decomposes into horizontal (inter-plane)
hops in east or west direction and vertical (intra-plane) hops towards the
successor or predecessor; the minimum is the best of the four direction
combinations.  A restricted variant that never travels more than half the
planes in one direction is kept for comparison, and an unweighted
breadth-first search over the ISL graph serves as the independent oracle.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvariantError
from .walker import (
    TWO_PI,
    ConstellationParams,
    SatId,
    compile_model,
    orbital_state,
)

EAST, WEST = "east", "west"
SUCCESSOR, PREDECESSOR = "successor", "predecessor"

#: Fixed enumeration order of the four direction combinations.
COMBO_ORDER = (
    (EAST, SUCCESSOR),
    (EAST, PREDECESSOR),
    (WEST, SUCCESSOR),
    (WEST, PREDECESSOR),
)

# Quotients of the hop formulas are integral up to float error; anything
# farther from an integer than this indicates a parameterisation bug.
_INTEGRALITY_TOL = 1e-6


def commercial_round(x: float) -> int:
    """Round to the nearest integer, halves away from zero."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


class DirectionCombo(NamedTuple):
    horizontal: str
    vertical: str
    h_count: int
    v_count: int

    @property
    def total(self) -> int:
        return self.h_count + self.v_count


@dataclass(frozen=True)
class HopCountResult:
    """All directional hop counts for a satellite pair.

    `h_east + h_west == P` always.  The vertical counts pair up with a
    horizontal direction because horizontal hops shift the argument of
    latitude by the phase offset.  When the residual phase is zero the
    opposite vertical direction degenerates to a full loop of Q hops; it is
    kept and simply never selected.
    """

    h_east: int
    h_west: int
    v_succ_east: int
    v_pred_east: int
    v_succ_west: int
    v_pred_west: int
    combos: tuple[DirectionCombo, ...]
    min_total: int
    minimizing_combos: tuple[DirectionCombo, ...]


def _ratio_round(angle: float, step: float) -> int:
    q = angle / step
    r = commercial_round(q)
    if abs(q - r) > _INTEGRALITY_TOL:
        raise InvariantError(f"hop quotient {q!r} is not integral")
    return r


def min_hop_count(params: ConstellationParams, src: SatId, dst: SatId) -> HopCountResult:
    """Directional hop counts and their minimum for a satellite pair."""
    s1 = orbital_state(params, src)
    s2 = orbital_state(params, dst)
    p, q = params.planes, params.sats_per_plane

    dl0 = (s2.raan_initial - s1.raan_initial) % TWO_PI
    h_east = _ratio_round(dl0, params.delta_raan)
    h_west = _ratio_round(TWO_PI - dl0, params.delta_raan)
    if h_east == p:  # rounding of a vanishing plane offset: east count is 0
        h_east, h_west = 0, p
    if h_east + h_west != p:
        raise InvariantError(f"directional plane counts {h_east}+{h_west} != {p}")

    du = s2.arg_latitude - s1.arg_latitude
    verticals = []
    for h_count, sign in ((h_east, -1.0), (h_west, 1.0)):
        residual = (du + sign * h_count * params.phase_offset) % TWO_PI
        v_succ = _ratio_round(residual, params.delta_phase)
        v_pred = _ratio_round(TWO_PI - residual, params.delta_phase)
        if v_succ == q:  # same degenerate rounding, vertically
            v_succ, v_pred = 0, q
        verticals.append((v_succ, v_pred))
    (v_se, v_pe), (v_sw, v_pw) = verticals

    by_direction = {
        (EAST, SUCCESSOR): (h_east, v_se),
        (EAST, PREDECESSOR): (h_east, v_pe),
        (WEST, SUCCESSOR): (h_west, v_sw),
        (WEST, PREDECESSOR): (h_west, v_pw),
    }
    combos = tuple(
        DirectionCombo(h, v, *by_direction[(h, v)]) for h, v in COMBO_ORDER
    )
    min_total = min(c.total for c in combos)
    return HopCountResult(
        h_east=h_east,
        h_west=h_west,
        v_succ_east=v_se,
        v_pred_east=v_pe,
        v_succ_west=v_sw,
        v_pred_west=v_pw,
        combos=combos,
        min_total=min_total,
        minimizing_combos=tuple(c for c in combos if c.total == min_total),
    )


def min_hop_count_restricted(params: ConstellationParams, src: SatId, dst: SatId) -> int:
    """Hop count when the longer horizontal direction is never taken.

    The east-computed direction is kept unless it needs strictly more than
    P/2 inter-plane hops (at an exact tie it is kept, so the westbound
    alternative is never examined); the vertical direction is then chosen
    freely.  Always at least as large as the unrestricted minimum.
    """
    res = min_hop_count(params, src, dst)
    if 2 * res.h_east <= params.planes:
        return res.h_east + min(res.v_succ_east, res.v_pred_east)
    return res.h_west + min(res.v_succ_west, res.v_pred_west)


def bfs_distances(params: ConstellationParams, src: SatId) -> list[int]:
    """Unweighted ISL-graph distances from src to every satellite.

    Deliberately independent of the hop-count formula and of the routing
    kernels: plain breadth-first search over the neighbour table.
    """
    model = compile_model(params)
    nbrs = model.nbrs_rows
    dist = [-1] * model.n
    start = model.sat_index(src)
    dist[start] = 0
    queue = deque([start])
    while queue:
        a = queue.popleft()
        da = dist[a] + 1
        for b in nbrs[a]:
            if dist[b] < 0:
                dist[b] = da
                queue.append(b)
    return dist


def bfs_hop_oracle(params: ConstellationParams, src: SatId, dst: SatId) -> int:
    """Exact unweighted graph distance between two satellites."""
    model = compile_model(params)
    return bfs_distances(params, src)[model.sat_index(dst)]


class HopCountTable(NamedTuple):
    """Vectorised directional hop counts from one source to all satellites."""

    h_east: np.ndarray
    h_west: np.ndarray
    v_succ_east: np.ndarray
    v_pred_east: np.ndarray
    v_succ_west: np.ndarray
    v_pred_west: np.ndarray

    @property
    def min_total(self) -> np.ndarray:
        east = self.h_east + np.minimum(self.v_succ_east, self.v_pred_east)
        west = self.h_west + np.minimum(self.v_succ_west, self.v_pred_west)
        return np.minimum(east, west)

    def restricted_total(self, planes: int) -> np.ndarray:
        east = self.h_east + np.minimum(self.v_succ_east, self.v_pred_east)
        west = self.h_west + np.minimum(self.v_succ_west, self.v_pred_west)
        return np.where(2 * self.h_east <= planes, east, west)


def hop_count_table(params: ConstellationParams, src: SatId) -> HopCountTable:
    """Bulk variant of min_hop_count used by the validation/benchmark sweeps.

    Same formula and degenerate-rounding rules as the scalar operation,
    evaluated for all destinations of one source at once.
    """
    model = compile_model(params)
    s = model.sat_index(src)
    p, q = params.planes, params.sats_per_plane

    def ratio_round(angle: np.ndarray, step: float) -> np.ndarray:
        quot = angle / step
        rounded = np.rint(quot)  # quotients are non-negative: rint == commercial
        if np.abs(quot - rounded).max() > _INTEGRALITY_TOL:
            raise InvariantError("hop quotient is not integral")
        return rounded.astype(np.int64)

    dl0 = (model.l0 - model.l0[s]) % TWO_PI
    h_east = ratio_round(dl0, params.delta_raan)
    h_west = ratio_round(TWO_PI - dl0, params.delta_raan)
    full = h_east == p
    h_east[full], h_west[full] = 0, p

    du = model.u - model.u[s]
    pairs = []
    for h_count, sign in ((h_east, -1.0), (h_west, 1.0)):
        residual = (du + sign * h_count * params.phase_offset) % TWO_PI
        v_succ = ratio_round(residual, params.delta_phase)
        v_pred = ratio_round(TWO_PI - residual, params.delta_phase)
        full = v_succ == q
        v_succ[full], v_pred[full] = 0, q
        pairs.append((v_succ, v_pred))
    (v_se, v_pe), (v_sw, v_pw) = pairs
    return HopCountTable(h_east, h_west, v_se, v_pe, v_sw, v_pw)

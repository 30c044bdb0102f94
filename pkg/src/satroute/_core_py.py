"""Pure-Python routing kernels.

Fallback implementation of the hot per-query kernels; the compiled module
`_core_cy` exports the same functions with identical semantics, including
tie-breaking and the coin-flip random stream, so results are bit-identical
across backends.  All kernels work on flat satellite indices of a
ConstellationModel; route kernels return (node index list, total length km).

Link lengths are evaluated from the ECEF coordinates while searching, so the
cost of a query reflects how many edges an algorithm actually looks at.  The
hop-count-keyed searches skip the distance evaluation whenever the integer
key already rejects a relaxation; that asymmetry is what makes them cheaper
than the classic length-keyed search.
"""
from __future__ import annotations

import math
from heapq import heappop, heappush
from math import sqrt

import numpy as np

from .errors import InvariantError

BACKEND_NAME = "python"

TWO_PI = 2.0 * math.pi
_INTEGRALITY_TOL = 1e-6
_INF = math.inf
_NO_HOPS = 2**31 - 1

# Neighbour-table columns (see walker.NEIGHBOR_ORDER).
_SUCC, _PRED, _LEFT, _RIGHT = 0, 1, 2, 3
# Direction combos in fixed order: (horizontal column, vertical column).
_COMBOS = ((_RIGHT, _SUCC), (_RIGHT, _PRED), (_LEFT, _SUCC), (_LEFT, _PRED))

_MASK64 = (1 << 64) - 1


def _sm_next(state: int) -> tuple[int, int]:
    """One splitmix64 step; returns (new state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _round_int(q: float) -> int:
    r = math.floor(q + 0.5)  # quotients are >= 0 here
    if abs(q - r) > _INTEGRALITY_TOL:
        raise InvariantError(f"hop quotient {q!r} is not integral")
    return r


def hop_counts(model, s: int, d: int) -> tuple[int, int, int, int, int, int]:
    """Directional hop counts (h_east, h_west, v_se, v_pe, v_sw, v_pw)."""
    params = model.params
    p, q = params.planes, params.sats_per_plane
    domega, dphi, df = params.delta_raan, params.delta_phase, params.phase_offset
    l0 = model.l0_list
    u = model.u_list

    dl0 = (l0[d] - l0[s]) % TWO_PI
    h_east = _round_int(dl0 / domega)
    h_west = _round_int((TWO_PI - dl0) / domega)
    if h_east == p:
        h_east, h_west = 0, p

    du = u[d] - u[s]
    residual = (du - h_east * df) % TWO_PI
    v_se = _round_int(residual / dphi)
    v_pe = _round_int((TWO_PI - residual) / dphi)
    if v_se == q:
        v_se, v_pe = 0, q
    residual = (du + h_west * df) % TWO_PI
    v_sw = _round_int(residual / dphi)
    v_pw = _round_int((TWO_PI - residual) / dphi)
    if v_sw == q:
        v_sw, v_pw = 0, q
    return h_east, h_west, v_se, v_pe, v_sw, v_pw


def _min_combos(model, s: int, d: int) -> list[tuple[int, int, int, int]]:
    """Minimizing (h column, v column, h count, v count) tuples, fixed order."""
    h_east, h_west, v_se, v_pe, v_sw, v_pw = hop_counts(model, s, d)
    counts = (
        (h_east, v_se),
        (h_east, v_pe),
        (h_west, v_sw),
        (h_west, v_pw),
    )
    best = min(a + b for a, b in counts)
    return [
        (hk, vk, a, b)
        for (hk, vk), (a, b) in zip(_COMBOS, counts)
        if a + b == best
    ]


def dijkstra_pair(model, s: int, d: int) -> tuple[list[int], float]:
    """Single-pair shortest route by total length; stops once dst is settled."""
    n = model.n
    nbrs = model.nbrs_rows
    cx, cy, cz = model.coord_lists
    dist = [_INF] * n
    prev = [-1] * n
    visited = bytearray(n)
    dist[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        du, u = heappop(heap)
        if visited[u]:
            continue
        visited[u] = 1
        if u == d:
            break
        nu = nbrs[u]
        ux, uy, uz = cx[u], cy[u], cz[u]
        for k in range(4):
            v = nu[k]
            if not visited[v]:
                dx = ux - cx[v]
                dy = uy - cy[v]
                dz = uz - cz[v]
                alt = du + sqrt(dx * dx + dy * dy + dz * dz)
                if alt < dist[v]:
                    dist[v] = alt
                    prev[v] = u
                    heappush(heap, (alt, v))
    return _walk_back(prev, s, d), dist[d]


def dijkstra_hops_pair(model, s: int, d: int) -> tuple[list[int], float]:
    """Shortest route among those with the minimum hop count.

    Heap keys are (hops, length) compared lexicographically; the distance is
    only evaluated when the hop key alone cannot reject the relaxation.
    """
    n = model.n
    nbrs = model.nbrs_rows
    cx, cy, cz = model.coord_lists
    dist = [_INF] * n
    hops = [_NO_HOPS] * n
    prev = [-1] * n
    visited = bytearray(n)
    dist[s] = 0.0
    hops[s] = 0
    heap = [(0, 0.0, s)]
    while heap:
        hu, du, u = heappop(heap)
        if visited[u]:
            continue
        visited[u] = 1
        if u == d:
            break
        nu = nbrs[u]
        ux, uy, uz = cx[u], cy[u], cz[u]
        nh = hu + 1
        for k in range(4):
            v = nu[k]
            if visited[v] or nh > hops[v]:
                continue
            dx = ux - cx[v]
            dy = uy - cy[v]
            dz = uz - cz[v]
            alt = du + sqrt(dx * dx + dy * dy + dz * dz)
            if nh < hops[v] or alt < dist[v]:
                hops[v] = nh
                dist[v] = alt
                prev[v] = u
                heappush(heap, (nh, alt, v))
    return _walk_back(prev, s, d), dist[d]


def dijkstra_source(model, s: int, hops_first: bool) -> tuple[np.ndarray, np.ndarray]:
    """Full single-source run; returns (length, hop count) per satellite.

    hops_first=False orders by (length, hops): shortest length, and the fewest
    hops among equally short routes.  hops_first=True orders by (hops, length):
    minimum hops, and the shortest length among minimum-hop routes.
    """
    n = model.n
    nbrs = model.nbrs_rows
    cx, cy, cz = model.coord_lists
    dist = [_INF] * n
    hops = [_NO_HOPS] * n
    visited = bytearray(n)
    dist[s] = 0.0
    hops[s] = 0
    heap = [(0, 0.0, s)] if hops_first else [(0.0, 0, s)]
    while heap:
        a, b, u = heappop(heap)
        if visited[u]:
            continue
        visited[u] = 1
        hu, du = (a, b) if hops_first else (b, a)
        nu = nbrs[u]
        ux, uy, uz = cx[u], cy[u], cz[u]
        nh = hu + 1
        for k in range(4):
            v = nu[k]
            if visited[v]:
                continue
            if hops_first:
                if nh > hops[v]:
                    continue
                dx = ux - cx[v]
                dy = uy - cy[v]
                dz = uz - cz[v]
                alt = du + sqrt(dx * dx + dy * dy + dz * dz)
                if nh < hops[v] or alt < dist[v]:
                    hops[v] = nh
                    dist[v] = alt
                    heappush(heap, (nh, alt, v))
            else:
                dx = ux - cx[v]
                dy = uy - cy[v]
                dz = uz - cz[v]
                alt = du + sqrt(dx * dx + dy * dy + dz * dz)
                if alt < dist[v] or (alt == dist[v] and nh < hops[v]):
                    hops[v] = nh
                    dist[v] = alt
                    heappush(heap, (alt, nh, v))
    return np.array(dist), np.array(hops, dtype=np.int32)


def _walk_back(prev: list[int], s: int, d: int) -> list[int]:
    path = [d]
    u = d
    while u != s:
        u = prev[u]
        if u < 0:
            raise InvariantError("route reconstruction fell off the tree")
        path.append(u)
    path.reverse()
    return path


def _grid_ids(model, s: int, hk: int, vk: int, a: int, b: int) -> list[list[int]]:
    """Rectangle cells as rows[j][i]: i horizontal hops and j vertical from src."""
    nbrs = model.nbrs_rows
    row = [s]
    cur = s
    for _ in range(a):
        cur = nbrs[cur][hk]
        row.append(cur)
    rows = [row]
    for _ in range(b):
        row = [nbrs[c][vk] for c in row]
        rows.append(row)
    return rows


def dag_route(model, s: int, d: int, longest: bool) -> tuple[list[int], float]:
    """Shortest (or longest) route inside the minimum-hop rectangles.

    Cells are relaxed in topological order (row by row away from the source);
    every minimizing direction combination is evaluated and the best route is
    returned, so the shortest variant matches dijkstra_hops exactly.
    """
    cx, cy, cz = model.coord_lists
    best_ids: list[int] | None = None
    best_total = 0.0
    for hk, vk, a, b in _min_combos(model, s, d):
        rows = _grid_ids(model, s, hk, vk, a, b)
        if rows[b][a] != d:
            raise InvariantError("rectangle corner does not reach destination")
        dist = [[-_INF if longest else _INF] * (a + 1) for _ in range(b + 1)]
        from_h = [[False] * (a + 1) for _ in range(b + 1)]
        dist[0][0] = 0.0
        for j in range(b + 1):
            row = rows[j]
            drow = dist[j]
            for i in range(a + 1):
                cur = drow[i]
                cell = row[i]
                ux, uy, uz = cx[cell], cy[cell], cz[cell]
                if i < a:
                    v = row[i + 1]
                    dx = ux - cx[v]
                    dy = uy - cy[v]
                    dz = uz - cz[v]
                    alt = cur + sqrt(dx * dx + dy * dy + dz * dz)
                    if (alt > drow[i + 1]) if longest else (alt < drow[i + 1]):
                        drow[i + 1] = alt
                        from_h[j][i + 1] = True
                if j < b:
                    v = rows[j + 1][i]
                    dx = ux - cx[v]
                    dy = uy - cy[v]
                    dz = uz - cz[v]
                    alt = cur + sqrt(dx * dx + dy * dy + dz * dz)
                    if (alt > dist[j + 1][i]) if longest else (alt < dist[j + 1][i]):
                        dist[j + 1][i] = alt
                        from_h[j + 1][i] = False
        total = dist[b][a]
        if best_ids is None or ((total > best_total) if longest else (total < best_total)):
            i, j = a, b
            ids = [rows[j][i]]
            while i or j:
                if from_h[j][i]:
                    i -= 1
                else:
                    j -= 1
                ids.append(rows[j][i])
            ids.reverse()
            best_ids = ids
            best_total = total
    assert best_ids is not None
    return best_ids, best_total


def disco_route(model, s: int, d: int) -> tuple[list[int], float]:
    """Latitude-reward heuristic route with the minimum hop count.

    Same-direction pairs distribute the horizontal hops between the first and
    last row, preferring the row farther from the Equator; mixed pairs
    distribute the vertical hops and cross on the row closest to a pole.
    Evaluated on every minimizing rectangle; the shortest result wins.
    """
    asc = model.ascending_list
    mixed = asc[s] != asc[d]
    best: tuple[list[int], float] | None = None
    for hk, vk, a, b in _min_combos(model, s, d):
        route = _disco_on_grid(model, s, d, hk, vk, a, b, mixed)
        if best is None or route[1] < best[1]:
            best = route
    assert best is not None
    return best


def _walk(model, start: int, k: int, steps: int) -> list[int]:
    nbrs = model.nbrs_rows
    out = [start]
    cur = start
    for _ in range(steps):
        cur = nbrs[cur][k]
        out.append(cur)
    return out


def _disco_on_grid(model, s, d, hk, vk, a, b, mixed) -> tuple[list[int], float]:
    # Only the two boundary lines and the connecting middle line of the
    # rectangle are ever touched, keeping the heuristic linear in hop count.
    lat = model.lat_list
    nbrs = model.nbrs_rows
    edge = model.edge_length
    route_s = [s]
    route_t = [d]
    total = 0.0
    if not mixed:
        # Both endpoints fly in the same direction: horizontal hops go to the
        # outer rows, split to keep them as far from the Equator as possible.
        bottom = _walk(model, s, hk, a)
        top = _walk(model, _walk(model, s, vk, b)[b], hk, a)
        i, j = 0, a
        for _ in range(a):
            reward_s = abs(lat[bottom[i]] + lat[bottom[i + 1]])
            reward_t = abs(lat[top[j]] + lat[top[j - 1]])
            if reward_s < reward_t:
                j -= 1
                route_t.insert(0, top[j])
                total += edge(top[j], top[j + 1])
            else:
                total += edge(bottom[i], bottom[i + 1])
                i += 1
                route_s.append(bottom[i])
        if i != j:
            raise InvariantError("partial routes did not meet on one plane")
        if b == 0:
            route_t.pop(0)
        else:
            cur = bottom[i]
            for _ in range(b - 1):
                nxt = nbrs[cur][vk]
                total += edge(cur, nxt)
                cur = nxt
                route_s.append(cur)
            total += edge(cur, nbrs[cur][vk])
    else:
        # Ascending/descending pair: vertical hops go to the outer columns and
        # the crossing row of horizontal hops ends up nearest a pole.
        col0 = _walk(model, s, vk, b)
        cola = _walk(model, _walk(model, s, hk, a)[a], vk, b)
        i, j = 0, b
        for _ in range(b):
            reward_s = abs(lat[col0[i]] + lat[col0[i + 1]])
            reward_t = abs(lat[cola[j]] + lat[cola[j - 1]])
            if reward_s < reward_t:
                total += edge(col0[i], col0[i + 1])
                i += 1
                route_s.append(col0[i])
            else:
                j -= 1
                route_t.insert(0, cola[j])
                total += edge(cola[j], cola[j + 1])
        if i != j:
            raise InvariantError("partial routes did not meet on one row")
        if a == 0:
            route_t.pop(0)
        else:
            cur = col0[i]
            for _ in range(a - 1):
                nxt = nbrs[cur][hk]
                total += edge(cur, nxt)
                cur = nxt
                route_s.append(cur)
            total += edge(cur, nbrs[cur][hk])
    return route_s + route_t, total


def coin_flip(model, s: int, d: int, seed: int) -> tuple[list[int], float]:
    """Random minimum-hop route; every free step is a fair coin flip.

    The seed selects one minimizing rectangle, then drives the per-step flips;
    identical seeds reproduce identical routes on any backend.
    """
    nbrs = model.nbrs_rows
    edge = model.edge_length
    combos = _min_combos(model, s, d)
    state = seed & _MASK64
    state, z = _sm_next(state)
    hk, vk, a, b = combos[z % len(combos)]
    ids = [s]
    cur = s
    total = 0.0
    while a or b:
        if a and b:
            state, z = _sm_next(state)
            horizontal = z >> 63
        else:
            horizontal = a > 0
        k = hk if horizontal else vk
        if horizontal:
            a -= 1
        else:
            b -= 1
        nxt = nbrs[cur][k]
        total += edge(cur, nxt)
        cur = nxt
        ids.append(cur)
    return ids, total

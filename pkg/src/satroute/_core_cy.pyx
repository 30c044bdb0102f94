# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled routing kernels.

Twin of `_core_py` with identical semantics: same tie-breaking order on the
heaps, same relaxation rules, same splitmix64 stream, so both backends return
bit-identical routes.  See the pure-Python module for the reference
formulation of each kernel.

A `_Ref` holding raw array pointers and the spacing angles is cached on each
model (like the list mirrors used by the Python backend), so a query costs
one attribute lookup instead of repeated buffer acquisitions.
"""
from libc.math cimport INFINITY, M_PI, floor, fmod, sqrt
from libc.stdlib cimport free, malloc

import numpy as np

from .errors import InvariantError

BACKEND_NAME = "cython"

cdef double TWO_PI = 2.0 * M_PI
cdef double HALF_PI = 0.5 * M_PI
cdef double INTEGRALITY_TOL = 1e-6
cdef int NO_HOPS = 2147483647

# Neighbour-table columns (see walker.NEIGHBOR_ORDER).
cdef int SUCC = 0, PRED = 1, LEFT = 2, RIGHT = 3


cdef class _Ref:
    """Raw pointers into one model's arrays; kept alive via `arrays`."""

    cdef double* l0
    cdef double* u
    cdef double* lat
    cdef double* coords  # (n, 3) row-major ECEF km
    cdef int* nbrs       # (n, 4) row-major
    cdef int n, p, q
    cdef double domega, dphi, df
    cdef object arrays


cdef _Ref _ref(object model):
    cdef _Ref r = getattr(model, "_cy_ref", None)
    if r is not None:
        return r
    r = _Ref()
    cdef const double[::1] l0 = model.l0
    cdef const double[::1] u = model.u
    cdef const double[::1] lat = model.lat
    cdef const double[:, ::1] coords = model.coords
    cdef const int[:, ::1] nbrs = model.nbrs
    r.l0 = <double*> &l0[0]
    r.u = <double*> &u[0]
    r.lat = <double*> &lat[0]
    r.coords = <double*> &coords[0, 0]
    r.nbrs = <int*> &nbrs[0, 0]
    r.n = nbrs.shape[0]
    params = model.params
    r.p = params.planes
    r.q = params.sats_per_plane
    r.domega = params.delta_raan
    r.dphi = params.delta_phase
    r.df = params.phase_offset
    r.arrays = (model.l0, model.u, model.lat, model.coords, model.nbrs)
    object.__setattr__(model, "_cy_ref", r)
    return r


cdef inline double _edge(double* cd, int a, int b) nogil:
    cdef double dx = cd[3 * a] - cd[3 * b]
    cdef double dy = cd[3 * a + 1] - cd[3 * b + 1]
    cdef double dz = cd[3 * a + 2] - cd[3 * b + 2]
    return sqrt(dx * dx + dy * dy + dz * dz)


cdef inline double _emod(double x, double m) nogil:
    # Euclidean float modulo, matching Python's % for a positive divisor.
    cdef double r = fmod(x, m)
    if r != 0.0 and r < 0.0:
        r += m
    return r


cdef int _round_int(double q) except? -1:
    cdef double r = floor(q + 0.5)  # quotients are >= 0 here
    if q - r > INTEGRALITY_TOL or r - q > INTEGRALITY_TOL:
        raise InvariantError(f"hop quotient {q!r} is not integral")
    return <int> r


cdef struct Counts:
    int h_east, h_west, v_se, v_pe, v_sw, v_pw


cdef Counts _hop_counts(_Ref r, int s, int d) except *:
    cdef Counts c
    cdef double dl0 = _emod(r.l0[d] - r.l0[s], TWO_PI)
    c.h_east = _round_int(dl0 / r.domega)
    c.h_west = _round_int((TWO_PI - dl0) / r.domega)
    if c.h_east == r.p:
        c.h_east = 0
        c.h_west = r.p

    cdef double du = r.u[d] - r.u[s]
    cdef double residual = _emod(du - c.h_east * r.df, TWO_PI)
    c.v_se = _round_int(residual / r.dphi)
    c.v_pe = _round_int((TWO_PI - residual) / r.dphi)
    if c.v_se == r.q:
        c.v_se = 0
        c.v_pe = r.q
    residual = _emod(du + c.h_west * r.df, TWO_PI)
    c.v_sw = _round_int(residual / r.dphi)
    c.v_pw = _round_int((TWO_PI - residual) / r.dphi)
    if c.v_sw == r.q:
        c.v_sw = 0
        c.v_pw = r.q
    return c


def hop_counts(model, int s, int d):
    """Directional hop counts (h_east, h_west, v_se, v_pe, v_sw, v_pw)."""
    cdef Counts c = _hop_counts(_ref(model), s, d)
    return c.h_east, c.h_west, c.v_se, c.v_pe, c.v_sw, c.v_pw


cdef int _min_combos(_Ref r, int s, int d, int[4][4] out) except -1:
    """Fill `out` with minimizing (hk, vk, a, b) rows; returns the count."""
    cdef Counts c = _hop_counts(r, s, d)
    cdef int[4] hcols = [RIGHT, RIGHT, LEFT, LEFT]
    cdef int[4] vcols = [SUCC, PRED, SUCC, PRED]
    cdef int[4] hs = [c.h_east, c.h_east, c.h_west, c.h_west]
    cdef int[4] vs = [c.v_se, c.v_pe, c.v_sw, c.v_pw]
    cdef int best = hs[0] + vs[0]
    cdef int k, t, m
    for k in range(1, 4):
        t = hs[k] + vs[k]
        if t < best:
            best = t
    m = 0
    for k in range(4):
        if hs[k] + vs[k] == best:
            out[m][0] = hcols[k]
            out[m][1] = vcols[k]
            out[m][2] = hs[k]
            out[m][3] = vs[k]
            m += 1
    return m


# --- binary heap over (key_a, key_b, node), lexicographic ------------------

cdef struct Heap:
    double* ka
    double* kb
    int* node
    int size


cdef inline bint _heap_less(Heap* h, int x, int y) nogil:
    if h.ka[x] != h.ka[y]:
        return h.ka[x] < h.ka[y]
    if h.kb[x] != h.kb[y]:
        return h.kb[x] < h.kb[y]
    return h.node[x] < h.node[y]


cdef inline void _heap_swap(Heap* h, int x, int y) nogil:
    cdef double t = h.ka[x]
    cdef int n = h.node[x]
    h.ka[x] = h.ka[y]
    h.ka[y] = t
    t = h.kb[x]
    h.kb[x] = h.kb[y]
    h.kb[y] = t
    h.node[x] = h.node[y]
    h.node[y] = n


cdef inline void _heap_push(Heap* h, double ka, double kb, int node) nogil:
    cdef int i = h.size
    cdef int parent
    h.ka[i] = ka
    h.kb[i] = kb
    h.node[i] = node
    h.size += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _heap_less(h, i, parent):
            _heap_swap(h, i, parent)
            i = parent
        else:
            break


cdef inline void _heap_siftdown(Heap* h, int i) nogil:
    cdef int child
    while True:
        child = 2 * i + 1
        if child >= h.size:
            break
        if child + 1 < h.size and _heap_less(h, child + 1, child):
            child += 1
        if _heap_less(h, child, i):
            _heap_swap(h, i, child)
            i = child
        else:
            break


cdef inline void _heap_pop(Heap* h) nogil:
    # caller reads the root before popping
    h.size -= 1
    if h.size == 0:
        return
    _heap_swap(h, 0, h.size)
    _heap_siftdown(h, 0)


cdef void _heap_build(Heap* h) nogil:
    cdef int i
    for i in range((h.size >> 1) - 1, -1, -1):
        _heap_siftdown(h, i)


cdef struct Scratch:
    double* dist
    int* hops
    int* prev
    char* visited
    Heap heap
    double* buf_d
    int* buf_n
    int buf_size


cdef bint _scratch_alloc(Scratch* sc, int n) nogil:
    cdef int cap = 4 * n + 8
    sc.dist = <double*> malloc(n * sizeof(double))
    sc.hops = <int*> malloc(n * sizeof(int))
    sc.prev = <int*> malloc(n * sizeof(int))
    sc.visited = <char*> malloc(n)
    sc.heap.ka = <double*> malloc(cap * sizeof(double))
    sc.heap.kb = <double*> malloc(cap * sizeof(double))
    sc.heap.node = <int*> malloc(cap * sizeof(int))
    sc.heap.size = 0
    sc.buf_d = <double*> malloc(cap * sizeof(double))
    sc.buf_n = <int*> malloc(cap * sizeof(int))
    sc.buf_size = 0
    return (sc.dist != NULL and sc.hops != NULL and sc.prev != NULL
            and sc.visited != NULL and sc.heap.ka != NULL
            and sc.heap.kb != NULL and sc.heap.node != NULL
            and sc.buf_d != NULL and sc.buf_n != NULL)


cdef void _scratch_free(Scratch* sc) nogil:
    free(sc.dist)
    free(sc.hops)
    free(sc.prev)
    free(sc.visited)
    free(sc.heap.ka)
    free(sc.heap.kb)
    free(sc.heap.node)
    free(sc.buf_d)
    free(sc.buf_n)


cdef void _scratch_init(Scratch* sc, int n, int s) nogil:
    cdef int i
    for i in range(n):
        sc.dist[i] = INFINITY
        sc.hops[i] = NO_HOPS
        sc.prev[i] = -1
        sc.visited[i] = 0
    sc.dist[s] = 0.0
    sc.hops[s] = 0
    sc.heap.size = 0


cdef list _walk_back(Scratch* sc, int s, int d):
    path = [d]
    cdef int u = d
    while u != s:
        u = sc.prev[u]
        if u < 0:
            raise InvariantError("route reconstruction fell off the tree")
        path.append(u)
    path.reverse()
    return path


def dijkstra_pair(model, int s, int d):
    """Single-pair shortest route by total length; stops once dst is settled."""
    cdef _Ref r = _ref(model)
    cdef Scratch sc
    if not _scratch_alloc(&sc, r.n):
        raise MemoryError()
    cdef int u, v, k
    cdef double du, alt
    try:
        _scratch_init(&sc, r.n, s)
        _heap_push(&sc.heap, 0.0, 0.0, s)
        while sc.heap.size > 0:
            du = sc.heap.ka[0]
            u = sc.heap.node[0]
            _heap_pop(&sc.heap)
            if sc.visited[u]:
                continue
            sc.visited[u] = 1
            if u == d:
                break
            for k in range(4):
                v = r.nbrs[4 * u + k]
                if not sc.visited[v]:
                    alt = du + _edge(r.coords, u, v)
                    if alt < sc.dist[v]:
                        sc.dist[v] = alt
                        sc.prev[v] = u
                        _heap_push(&sc.heap, alt, 0.0, v)
        return _walk_back(&sc, s, d), sc.dist[d]
    finally:
        _scratch_free(&sc)


cdef inline void _level_advance(Scratch* sc) nogil:
    # move the buffered next hop level into the heap in one build pass
    cdef int t
    for t in range(sc.buf_size):
        sc.heap.ka[t] = sc.buf_d[t]
        sc.heap.kb[t] = 0.0
        sc.heap.node[t] = sc.buf_n[t]
    sc.heap.size = sc.buf_size
    sc.buf_size = 0
    _heap_build(&sc.heap)


def dijkstra_hops_pair(model, int s, int d):
    """Shortest route among those with the minimum hop count.

    Settles satellites in (hops, length, index) order like the reference
    implementation, but exploits the integer hop key: the frontier of the
    next hop level is collected in a plain buffer (O(1) per relaxation) and
    heapified by length only when the level advances.
    """
    cdef _Ref r = _ref(model)
    cdef Scratch sc
    if not _scratch_alloc(&sc, r.n):
        raise MemoryError()
    cdef int u, v, k, nh, level
    cdef double du, alt
    try:
        _scratch_init(&sc, r.n, s)
        _heap_push(&sc.heap, 0.0, 0.0, s)
        level = 0
        while sc.heap.size > 0 or sc.buf_size > 0:
            if sc.heap.size == 0:
                _level_advance(&sc)
                level += 1
            du = sc.heap.ka[0]
            u = sc.heap.node[0]
            _heap_pop(&sc.heap)
            if sc.visited[u]:
                continue
            sc.visited[u] = 1
            if u == d:
                break
            nh = level + 1
            for k in range(4):
                v = r.nbrs[4 * u + k]
                # the integer hop key rejects most relaxations before the
                # Euclidean distance ever needs to be evaluated
                if sc.visited[v] or nh > sc.hops[v]:
                    continue
                alt = du + _edge(r.coords, u, v)
                if nh < sc.hops[v] or alt < sc.dist[v]:
                    sc.hops[v] = nh
                    sc.dist[v] = alt
                    sc.prev[v] = u
                    sc.buf_d[sc.buf_size] = alt
                    sc.buf_n[sc.buf_size] = v
                    sc.buf_size += 1
        return _walk_back(&sc, s, d), sc.dist[d]
    finally:
        _scratch_free(&sc)


def dijkstra_source(model, int s, bint hops_first):
    """Full single-source run; returns (length, hop count) per satellite."""
    cdef _Ref r = _ref(model)
    cdef int n = r.n
    dist_out = np.empty(n, dtype=np.float64)
    hops_out = np.empty(n, dtype=np.int32)
    cdef double[::1] dview = dist_out
    cdef int[::1] hview = hops_out
    cdef Scratch sc
    if not _scratch_alloc(&sc, n):
        raise MemoryError()
    cdef int u, v, k, hu, nh, i
    cdef double du, alt
    cdef int level = 0
    try:
        _scratch_init(&sc, n, s)
        _heap_push(&sc.heap, 0.0, 0.0, s)
        if hops_first:
            while sc.heap.size > 0 or sc.buf_size > 0:
                if sc.heap.size == 0:
                    _level_advance(&sc)
                    level += 1
                du = sc.heap.ka[0]
                u = sc.heap.node[0]
                _heap_pop(&sc.heap)
                if sc.visited[u]:
                    continue
                sc.visited[u] = 1
                nh = level + 1
                for k in range(4):
                    v = r.nbrs[4 * u + k]
                    if sc.visited[v] or nh > sc.hops[v]:
                        continue
                    alt = du + _edge(r.coords, u, v)
                    if nh < sc.hops[v] or alt < sc.dist[v]:
                        sc.hops[v] = nh
                        sc.dist[v] = alt
                        sc.buf_d[sc.buf_size] = alt
                        sc.buf_n[sc.buf_size] = v
                        sc.buf_size += 1
        else:
            while sc.heap.size > 0:
                du = sc.heap.ka[0]
                hu = <int> sc.heap.kb[0]
                u = sc.heap.node[0]
                _heap_pop(&sc.heap)
                if sc.visited[u]:
                    continue
                sc.visited[u] = 1
                nh = hu + 1
                for k in range(4):
                    v = r.nbrs[4 * u + k]
                    if sc.visited[v]:
                        continue
                    alt = du + _edge(r.coords, u, v)
                    if alt < sc.dist[v] or (alt == sc.dist[v] and nh < sc.hops[v]):
                        sc.hops[v] = nh
                        sc.dist[v] = alt
                        _heap_push(&sc.heap, alt, nh, v)
        for i in range(n):
            dview[i] = sc.dist[i]
            hview[i] = sc.hops[i]
        return dist_out, hops_out
    finally:
        _scratch_free(&sc)


cdef int* _grid_ids(_Ref r, int s, int hk, int vk, int a, int b) except NULL:
    """Rectangle cells, row-major: cell(i,j) at [j*(a+1) + i]; caller frees."""
    cdef int cols = a + 1
    cdef int* ids = <int*> malloc(cols * (b + 1) * sizeof(int))
    if ids == NULL:
        raise MemoryError()
    cdef int i, j
    ids[0] = s
    for i in range(a):
        ids[i + 1] = r.nbrs[4 * ids[i] + hk]
    for j in range(b):
        for i in range(cols):
            ids[(j + 1) * cols + i] = r.nbrs[4 * ids[j * cols + i] + vk]
    return ids


def dag_route(model, int s, int d, bint longest):
    """Best-length route inside the minimum-hop rectangles (min or max)."""
    cdef _Ref r = _ref(model)
    cdef int[4][4] combos
    cdef int ncombos = _min_combos(r, s, d, combos)
    cdef int ci, hk, vk, a, b, cols, i, j, idx
    cdef int* ids
    cdef double* dist
    cdef char* fromh
    cdef double cur, alt, total, best_total = 0.0
    cdef list best_ids = None
    for ci in range(ncombos):
        hk = combos[ci][0]
        vk = combos[ci][1]
        a = combos[ci][2]
        b = combos[ci][3]
        cols = a + 1
        ids = _grid_ids(r, s, hk, vk, a, b)
        dist = <double*> malloc(cols * (b + 1) * sizeof(double))
        fromh = <char*> malloc(cols * (b + 1))
        try:
            if dist == NULL or fromh == NULL:
                raise MemoryError()
            if ids[(b + 1) * cols - 1] != d:
                raise InvariantError("rectangle corner does not reach destination")
            for idx in range(cols * (b + 1)):
                dist[idx] = -INFINITY if longest else INFINITY
                fromh[idx] = 0
            dist[0] = 0.0
            for j in range(b + 1):
                for i in range(cols):
                    idx = j * cols + i
                    cur = dist[idx]
                    if i < a:
                        alt = cur + _edge(r.coords, ids[idx], ids[idx + 1])
                        if (alt > dist[idx + 1]) if longest else (alt < dist[idx + 1]):
                            dist[idx + 1] = alt
                            fromh[idx + 1] = 1
                    if j < b:
                        alt = cur + _edge(r.coords, ids[idx], ids[idx + cols])
                        if (alt > dist[idx + cols]) if longest else (alt < dist[idx + cols]):
                            dist[idx + cols] = alt
                            fromh[idx + cols] = 0
            total = dist[(b + 1) * cols - 1]
            if best_ids is None or ((total > best_total) if longest else (total < best_total)):
                i = a
                j = b
                path = [ids[j * cols + i]]
                while i or j:
                    if fromh[j * cols + i]:
                        i -= 1
                    else:
                        j -= 1
                    path.append(ids[j * cols + i])
                path.reverse()
                best_ids = path
                best_total = total
        finally:
            free(ids)
            free(dist)
            free(fromh)
    return best_ids, best_total


def disco_route(model, int s, int d):
    """Latitude-reward heuristic route with the minimum hop count."""
    cdef _Ref r = _ref(model)
    cdef bint mixed = (
        (r.u[s] >= -HALF_PI and r.u[s] <= HALF_PI)
        != (r.u[d] >= -HALF_PI and r.u[d] <= HALF_PI)
    )
    cdef int[4][4] combos
    cdef int ncombos = _min_combos(r, s, d, combos)
    cdef int ci
    cdef double total
    cdef list best_ids = None
    cdef double best_total = 0.0
    for ci in range(ncombos):
        route, total = _disco_on_grid(
            r, s, d,
            combos[ci][0], combos[ci][1], combos[ci][2], combos[ci][3], mixed,
        )
        if best_ids is None or total < best_total:
            best_ids = route
            best_total = total
    return best_ids, best_total


cdef int* _walk_line(_Ref r, int start, int k, int steps) except NULL:
    cdef int* out = <int*> malloc((steps + 1) * sizeof(int))
    if out == NULL:
        raise MemoryError()
    out[0] = start
    cdef int t
    for t in range(steps):
        out[t + 1] = r.nbrs[4 * out[t] + k]
    return out


cdef tuple _disco_on_grid(_Ref r, int s, int d, int hk, int vk,
                          int a, int b, bint mixed):
    # Only the two boundary lines and the connecting middle line of the
    # rectangle are ever touched, keeping the heuristic linear in hop count.
    cdef list route_s = [s]
    cdef list route_t = [d]
    cdef double total = 0.0
    cdef double reward_s, reward_t
    cdef int i, j, k, cur, nxt
    cdef int* line_s = NULL
    cdef int* line_t = NULL
    try:
        if not mixed:
            # Both endpoints fly in the same direction: horizontal hops go to
            # the outer rows, split to keep them far from the Equator.
            line_s = _walk_line(r, s, hk, a)  # bottom row
            cur = s
            for k in range(b):
                cur = r.nbrs[4 * cur + vk]
            line_t = _walk_line(r, cur, hk, a)  # top row
            i = 0
            j = a
            for k in range(a):
                reward_s = abs(r.lat[line_s[i]] + r.lat[line_s[i + 1]])
                reward_t = abs(r.lat[line_t[j]] + r.lat[line_t[j - 1]])
                if reward_s < reward_t:
                    j -= 1
                    route_t.insert(0, line_t[j])
                    total += _edge(r.coords, line_t[j], line_t[j + 1])
                else:
                    total += _edge(r.coords, line_s[i], line_s[i + 1])
                    i += 1
                    route_s.append(line_s[i])
            if i != j:
                raise InvariantError("partial routes did not meet on one plane")
            if b == 0:
                route_t.pop(0)
            else:
                cur = line_s[i]
                for k in range(b - 1):
                    nxt = r.nbrs[4 * cur + vk]
                    total += _edge(r.coords, cur, nxt)
                    cur = nxt
                    route_s.append(cur)
                total += _edge(r.coords, cur, r.nbrs[4 * cur + vk])
        else:
            # Ascending/descending pair: vertical hops go to the outer columns
            # and the crossing row of horizontal hops ends up nearest a pole.
            line_s = _walk_line(r, s, vk, b)  # first column
            cur = s
            for k in range(a):
                cur = r.nbrs[4 * cur + hk]
            line_t = _walk_line(r, cur, vk, b)  # last column
            i = 0
            j = b
            for k in range(b):
                reward_s = abs(r.lat[line_s[i]] + r.lat[line_s[i + 1]])
                reward_t = abs(r.lat[line_t[j]] + r.lat[line_t[j - 1]])
                if reward_s < reward_t:
                    total += _edge(r.coords, line_s[i], line_s[i + 1])
                    i += 1
                    route_s.append(line_s[i])
                else:
                    j -= 1
                    route_t.insert(0, line_t[j])
                    total += _edge(r.coords, line_t[j], line_t[j + 1])
            if i != j:
                raise InvariantError("partial routes did not meet on one row")
            if a == 0:
                route_t.pop(0)
            else:
                cur = line_s[i]
                for k in range(a - 1):
                    nxt = r.nbrs[4 * cur + hk]
                    total += _edge(r.coords, cur, nxt)
                    cur = nxt
                    route_s.append(cur)
                total += _edge(r.coords, cur, r.nbrs[4 * cur + hk])
        return route_s + route_t, total
    finally:
        free(line_s)
        free(line_t)


cdef inline unsigned long long _sm_next(unsigned long long* state) nogil:
    state[0] = state[0] + 0x9E3779B97F4A7C15ULL
    cdef unsigned long long z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def coin_flip(model, int s, int d, seed):
    """Random minimum-hop route; every free step is a fair coin flip."""
    cdef _Ref r = _ref(model)
    cdef int[4][4] combos
    cdef int ncombos = _min_combos(r, s, d, combos)
    cdef unsigned long long state = <unsigned long long> (
        <object> seed & 0xFFFFFFFFFFFFFFFF
    )
    cdef unsigned long long z = _sm_next(&state)
    cdef int pick = <int> (z % <unsigned long long> ncombos)
    cdef int hk = combos[pick][0]
    cdef int vk = combos[pick][1]
    cdef int a = combos[pick][2]
    cdef int b = combos[pick][3]
    cdef list ids = [s]
    cdef int cur = s
    cdef double total = 0.0
    cdef bint horizontal
    cdef int k, nxt
    while a or b:
        if a and b:
            z = _sm_next(&state)
            horizontal = <bint> (z >> 63)
        else:
            horizontal = a > 0
        if horizontal:
            k = hk
            a -= 1
        else:
            k = vk
            b -= 1
        nxt = r.nbrs[4 * cur + k]
        total += _edge(r.coords, cur, nxt)
        cur = nxt
        ids.append(cur)
    return ids, total

"""First-passage percolation on multigraphs.

Exponential edge weights, shortest-path distances, the continuous-time
exploration instrument with its ball-growth statistics, and the weighted and
metric-graph diameters. The metric diameter reduces each edge pair to a
closed-form 2-D maximization (see `_pair_values`), exact in O(1) per pair.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components, dijkstra

from .graphcore import GraphError, MultiGraph

INF = float("inf")
DEFAULT_METRIC_CAP = 20_000


class WeightedGraph:
    """A MultiGraph plus nonnegative per-edge weights (FPP passage times)."""

    __slots__ = ("graph", "weights", "_csr")

    def __init__(self, graph: MultiGraph, weights):
        weights = np.asarray(weights, dtype=np.float64)
        if weights.size != graph.edge_count:
            raise GraphError("one weight per edge required")
        if weights.size and weights.min() < 0:
            raise GraphError("weights must be nonnegative")
        self.graph = graph
        self.weights = weights
        self.weights.flags.writeable = False
        self._csr = None

    def csr(self):
        """Adjacency with parallel edges min-reduced (only the lightest matters)."""
        if self._csr is None:
            self._csr = self.graph.adjacency(self.weights)
        return self._csr

    def __repr__(self):
        return f"WeightedGraph(n={self.graph.n}, m={self.graph.edge_count})"


@dataclass(frozen=True)
class ExplorationRecord:
    """Trace of the continuous-time FPP ball growth from one source.

    tau[i] is the time the (i+1)-st non-source vertex is absorbed,
    ball_size[i] = |B_tau[i]|, excess[i] the tree excess of the ball's
    induced subgraph at that instant. T_q = min{tau : ball >= q}.
    """

    source: int
    tau: np.ndarray
    ball_size: np.ndarray
    excess: np.ndarray
    q: int
    T_q: float
    truncated: bool


def assign_exp_weights(g: MultiGraph, rate: float, rng: np.random.Generator) -> WeightedGraph:
    """I.i.d. Exponential(rate) weights on every edge (strictly positive)."""
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    w = rng.exponential(1.0 / rate, g.edge_count)
    tiny = np.nextafter(0.0, 1.0)
    return WeightedGraph(g, np.where(w > 0, w, tiny))


def sssp(wg: WeightedGraph, source: int) -> np.ndarray:
    """Exact single-source shortest-path distances; unreachable -> +inf."""
    return dijkstra(wg.csr(), indices=source)


def all_pairs_distances(wg: WeightedGraph, chunk: int = 512, dtype=np.float32) -> np.ndarray:
    """Dense distance matrix, computed in source chunks to bound peak memory."""
    n = wg.graph.n
    out = np.empty((n, n), dtype=dtype)
    csr = wg.csr()
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        out[lo:hi] = dijkstra(csr, indices=np.arange(lo, hi))
    return out


def _require_connected(wg: WeightedGraph, what: str) -> None:
    if wg.graph.n == 0:
        return
    ncomp = connected_components(wg.csr(), directed=False)[0]
    if ncomp != 1:
        raise GraphError(f"{what} requires a connected graph")


def weighted_diameter(wg: WeightedGraph, mode: str = "exact", samples: int = 16,
                      rng: np.random.Generator | None = None,
                      apsp: np.ndarray | None = None):
    """Max shortest-path distance over vertex pairs.

    mode="exact" scans every source; mode="sampled" double-sweeps from
    `samples` random sources and returns a lower bound.
    """
    n = wg.graph.n
    if n == 0:
        return 0.0, (0, 0)
    if mode == "exact":
        _require_connected(wg, "exact weighted diameter")
        if apsp is not None:
            flat = int(np.argmax(apsp))
            u, v = divmod(flat, n)
            return float(apsp[u, v]), (u, v)
        best, pair = 0.0, (0, 0)
        csr = wg.csr()
        for lo in range(0, n, 512):
            hi = min(lo + 512, n)
            d = dijkstra(csr, indices=np.arange(lo, hi))
            flat = int(np.argmax(d))
            i, j = divmod(flat, n)
            if d[i, j] > best:
                best, pair = float(d[i, j]), (lo + i, j)
        return best, pair
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = rng if rng is not None else np.random.default_rng(0)
    best, pair = 0.0, (0, 0)
    for _ in range(samples):
        s = int(rng.integers(n))
        d1 = sssp(wg, s)
        d1[np.isinf(d1)] = -1.0
        a = int(np.argmax(d1))
        d2 = sssp(wg, a)
        d2[np.isinf(d2)] = -1.0
        b = int(np.argmax(d2))
        if d2[b] > best:
            best, pair = float(d2[b]), (a, b)
    return best, pair


def _pair_values(w_e: float, A, B, C, E, w_f):
    """Exact max over points (x,y) on segments e x f of the 4-route min distance.

    For fixed offset s on e, the inner max over the offset on f is
    min((w_f+P+Q)/2, P+w_f, Q+w_f) with P = min(s+A, w_e-s+C) and
    Q = min(s+B, w_e-s+E). The outer max over s is attained either on a
    breakpoint of P or Q, on the box boundary, or along one of the two
    diagonal ridges; evaluating that closed candidate set is exact.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    C = np.asarray(C, dtype=np.float64)
    E = np.asarray(E, dtype=np.float64)
    w_f = np.asarray(w_f, dtype=np.float64)
    k1 = 0.5 * (w_e + w_f + E - A)
    k2 = 0.5 * (w_e + C - B - w_f)
    h1 = 0.5 * (w_f + B - A)
    h2 = 0.5 * (w_f + E - C)
    zero = np.zeros_like(w_f)
    candidates = (
        zero,
        zero + w_e,
        0.5 * (w_e + C - A) + zero,
        0.5 * (w_e + E - B) + zero,
        k1, k1 - w_f, k2, k2 + w_f,
        0.5 * (k1 + k2),
        k1 - h1, k1 - h2, k2 + h1, k2 + h2,
    )
    best = np.full_like(w_f, -np.inf)
    for s in candidates:
        s = np.clip(s, 0.0, w_e)
        p = np.minimum(s + A, w_e - s + C)
        q = np.minimum(s + B, w_e - s + E)
        val = np.minimum(0.5 * (w_f + p + q), np.minimum(p, q) + w_f)
        np.maximum(best, val, out=best)
    return best


def metric_pair_max(w_e: float, w_f: float, A: float, B: float, C: float, E: float) -> float:
    """Farthest-point distance between two distinct edge segments.

    A,B,C,E are the vertex distances between the segments' endpoints:
    A = d(a,c), B = d(a,d), C = d(b,c), E = d(b,d) for e = (a,b), f = (c,d).
    """
    for name, val in (("w_e", w_e), ("w_f", w_f), ("A", A), ("B", B), ("C", C), ("E", E)):
        if val < 0:
            raise ValueError(f"{name} must be nonnegative, got {val}")
    return float(_pair_values(w_e, A, B, C, E, np.float64(w_f)))


def _detour_distance(wg: WeightedGraph, edge: int) -> float:
    """Shortest distance between edge's endpoints avoiding the edge itself."""
    g = wg.graph
    a, b = int(g.edge_u[edge]), int(g.edge_v[edge])
    if a == b:
        return 0.0
    keep = np.ones(g.edge_count, dtype=bool)
    keep[edge] = False
    u, v, w = g.edge_u[keep], g.edge_v[keep], wg.weights[keep]
    row = np.concatenate([u, v])
    col = np.concatenate([v, u])
    dat = np.concatenate([w, w])
    csr = sp.csr_matrix((dat, (row, col)), shape=(g.n, g.n))
    return float(dijkstra(csr, indices=a)[b])


def metric_diameter(wg: WeightedGraph, mode: str = "exact", samples: int = 64,
                    rng: np.random.Generator | None = None,
                    cap: int = DEFAULT_METRIC_CAP,
                    apsp: np.ndarray | None = None) -> float:
    """Diameter over all interior points of the edge segments.

    Exact mode maximizes the closed form over all edge pairs (plus the
    same-edge term) after an all-pairs SSSP, and is gated at `cap` vertices;
    sampled mode scans edge pairs touching `samples` pivot edges and reports
    a lower bound.
    """
    g = wg.graph
    n = g.n
    if n == 0:
        return 0.0
    _require_connected(wg, "metric diameter")
    if g.edge_count == 0:
        return 0.0
    if mode == "exact" and n > cap:
        raise GraphError(
            f"exact metric diameter gated at {cap} vertices (n={n}); use mode='sampled'")
    if mode not in ("exact", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if apsp is None:
        apsp = all_pairs_distances(wg)
    eu, ev, w = g.edge_u, g.edge_v, wg.weights
    m = g.edge_count
    best = float(apsp.max())  # vertex pairs are metric points: valid floor
    if mode == "exact":
        rows = range(m)
        full_triangle = True
    else:
        rng = rng if rng is not None else np.random.default_rng(0)
        pick = min(samples, m)
        rows = sorted(set(rng.choice(m, size=pick, replace=False).tolist()))
        full_triangle = False
    wmax = float(w.max())
    for e in rows:
        a, b, we = int(eu[e]), int(ev[e]), float(w[e])
        lo = e + 1 if full_triangle else 0
        if lo >= m and full_triangle:
            continue
        sel = slice(lo, m)
        fu, fv, wf = eu[sel], ev[sel], w[sel]
        da = apsp[a].astype(np.float64)
        db = apsp[b].astype(np.float64)
        A, Bv, Cv, Ev = da[fu], da[fv], db[fu], db[fv]
        # rigorous upper bound: value <= (w_e+w_f+min(A+E, B+C))/2
        # (slack absorbs the float32 storage of the distance matrix)
        ub = 0.5 * (we + wf + np.minimum(A + Ev, Bv + Cv))
        mask = ub > best - 1e-6
        if not full_triangle:
            idx = np.flatnonzero(mask)
            idx = idx[(idx + lo) != e]
        else:
            idx = np.flatnonzero(mask)
        if idx.size == 0:
            continue
        vals = _pair_values(we, A[idx], Bv[idx], Cv[idx], Ev[idx], wf[idx])
        top = float(vals.max())
        if top > best:
            best = top
    # same-edge terms can only win when an edge outweighs everything found
    if mode == "exact":
        for e in np.flatnonzero(w > best):
            we = float(w[int(e)])
            detour = _detour_distance(wg, int(e))
            term = we if math.isinf(detour) else min(we, 0.5 * (we + detour))
            if term > best:
                best = term
    else:
        # cheap lower-bound version: direct distance stands in for the detour
        for e in np.flatnonzero(w > best):
            a, b = int(eu[int(e)]), int(ev[int(e)])
            term = min(float(w[int(e)]), 0.5 * (float(w[int(e)]) + float(apsp[a, b])))
            if term > best:
                best = term
    return best


def exploration(wg: WeightedGraph, source: int, q: int) -> ExplorationRecord:
    """Replay Dijkstra growth of the FPP ball, recording absorption times.

    Stops once the ball holds q vertices; a component smaller than q yields
    T_q = +inf and a truncated record.
    """
    g = wg.graph
    if q > g.n:
        raise GraphError(f"q={q} exceeds vertex count {g.n}")
    indptr, owner, pairing, eid = g.indptr, g.half_owner, g.pairing, g.edge_id
    wts = wg.weights
    dist = {source: 0.0}
    settled = np.zeros(g.n, dtype=bool)
    heap = [(0.0, source)]
    taus, balls, excs = [], [], []
    size = 0
    edges_in = 0
    t_q = INF
    while heap:
        d, v = heapq.heappop(heap)
        if settled[v]:
            continue
        settled[v] = True
        size += 1
        back = 0
        loops2 = 0
        for h in range(indptr[v], indptr[v + 1]):
            mate = pairing[h]
            u = owner[mate]
            if u == v:
                loops2 += 1
                continue
            if settled[u]:
                back += 1
            else:
                nd = d + wts[eid[h]]
                if nd < dist.get(u, INF):
                    dist[u] = nd
                    heapq.heappush(heap, (nd, u))
        edges_in += back + loops2 // 2
        if v != source:
            taus.append(d)
            balls.append(size)
            excs.append(edges_in - (size - 1))
        if size >= q:
            t_q = d
            break
    truncated = size < q
    return ExplorationRecord(
        source=source,
        tau=np.asarray(taus, dtype=np.float64),
        ball_size=np.asarray(balls, dtype=np.int64),
        excess=np.asarray(excs, dtype=np.int64),
        q=q,
        T_q=t_q,
        truncated=truncated,
    )


def _dijkstra_with_preds(wg: WeightedGraph, source: int):
    """Dijkstra with deterministic ties: equal-weight paths prefer the
    lexicographically smallest predecessor."""
    g = wg.graph
    indptr, owner, pairing, eid = g.indptr, g.half_owner, g.pairing, g.edge_id
    wts = wg.weights
    n = g.n
    dist = np.full(n, INF)
    pred = np.full(n, -1, dtype=np.int64)
    settled = np.zeros(n, dtype=bool)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if settled[v]:
            continue
        settled[v] = True
        for h in range(indptr[v], indptr[v + 1]):
            mate = pairing[h]
            u = owner[mate]
            if u == v or settled[u]:
                continue
            nd = d + wts[eid[h]]
            if nd < dist[u]:
                dist[u] = nd
                pred[u] = v
                heapq.heappush(heap, (nd, u))
            elif nd == dist[u] and v < pred[u]:
                pred[u] = v
    return dist, pred


def diameter_path_edge_count(wg: WeightedGraph, u: int, v: int) -> int:
    """Number of edges on the (tie-broken) shortest path from u to v."""
    dist, pred = _dijkstra_with_preds(wg, u)
    if math.isinf(dist[v]):
        raise GraphError(f"vertices {u} and {v} are not connected")
    hops = 0
    cur = v
    while cur != u:
        cur = int(pred[cur])
        hops += 1
    return hops


def write_weighted_edge_list(wg: WeightedGraph, path) -> None:
    """Text format ``n m`` then ``u v w``; 17 significant digits round-trips bits."""
    g = wg.graph
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        for u, v, w in zip(g.edge_u.tolist(), g.edge_v.tolist(), wg.weights.tolist()):
            fh.write(f"{u} {v} {w:.17g}\n")


def read_weighted_edge_list(path) -> WeightedGraph:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise GraphError(f"bad weighted edge-list header in {path}")
        n, m = int(header[0]), int(header[1])
        u = np.empty(m, dtype=np.int64)
        v = np.empty(m, dtype=np.int64)
        w = np.empty(m, dtype=np.float64)
        for i in range(m):
            parts = fh.readline().split()
            u[i], v[i], w[i] = int(parts[0]), int(parts[1]), float(parts[2])
    return WeightedGraph(MultiGraph.from_edges(n, u, v), w)


def count_good_vertices(wg: WeightedGraph, threshold: float) -> int:
    """Vertices all of whose incident edge weights exceed the threshold.

    Defined for regular graphs only (errors otherwise).
    """
    g = wg.graph
    if g.n == 0:
        return 0
    deg = g.degrees()
    if deg.min() != deg.max():
        raise GraphError("good-vertex count is defined for regular graphs")
    if deg[0] == 0:
        return g.n
    half_w = wg.weights[g.edge_id]
    per_vertex_min = np.minimum.reduceat(half_w, g.indptr[:-1])
    return int(np.count_nonzero(per_vertex_min > threshold))

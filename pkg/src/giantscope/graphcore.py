"""Half-edge multigraphs and their structural decompositions.

The graph carrier is a flat half-edge representation: every edge is an
unordered pair of half-edges, so self-loops and parallel edges are
first-class. Decompositions (largest component, 2-core, kernel) return
induced views that keep explicit maps back to the parent graph's ids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components


class GraphError(ValueError):
    """Structural precondition violated (bad matching, disconnected set, ...)."""


class MultiGraph:
    """Immutable multigraph over dense 0-based vertex ids.

    Internals: ``half_owner[h]`` is the vertex owning half-edge ``h`` (halves
    are grouped by vertex, ``indptr`` delimits each block), ``pairing`` is a
    fixed-point-free involution matching halves into edges, and ``edge_id[h]``
    maps a half back to its edge index so per-edge payloads (weights, path
    lengths) stay aligned with the caller's edge order.
    """

    __slots__ = ("n", "indptr", "half_owner", "pairing", "edge_id", "edge_u", "edge_v")

    def __init__(self, n, indptr, half_owner, pairing, edge_id, edge_u, edge_v):
        self.n = int(n)
        self.indptr = indptr
        self.half_owner = half_owner
        self.pairing = pairing
        self.edge_id = edge_id
        self.edge_u = edge_u
        self.edge_v = edge_v
        for a in (indptr, half_owner, pairing, edge_id, edge_u, edge_v):
            a.flags.writeable = False

    @classmethod
    def from_edges(cls, n: int, u, v) -> "MultiGraph":
        """Build from endpoint arrays; edge i keeps index i in all payload maps."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != v.shape:
            raise GraphError("endpoint arrays differ in length")
        m = u.size
        if m and (u.min() < 0 or v.min() < 0 or max(u.max(), v.max()) >= n):
            raise GraphError("vertex id out of range")
        owner = np.empty(2 * m, dtype=np.int64)
        owner[0::2] = u
        owner[1::2] = v
        order = np.argsort(owner, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(2 * m)
        # half 2i pairs with 2i+1 before sorting; push the pairing through rank
        raw_pair = np.arange(2 * m) ^ 1
        pairing = np.empty(2 * m, dtype=np.int64)
        pairing[rank] = rank[raw_pair]
        edge_id = np.empty(2 * m, dtype=np.int64)
        edge_id[rank] = np.repeat(np.arange(m, dtype=np.int64), 2)
        half_owner = owner[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(half_owner, minlength=n), out=indptr[1:])
        return cls(n, indptr, half_owner, pairing, edge_id, u.copy(), v.copy())

    @classmethod
    def from_matching(cls, degrees, pairing) -> "MultiGraph":
        """Build from a perfect matching on vertex-sorted half-edges."""
        degrees = np.asarray(degrees, dtype=np.int64)
        pairing = np.asarray(pairing, dtype=np.int64)
        n = degrees.size
        total = int(degrees.sum())
        if total != pairing.size:
            raise GraphError("pairing length does not match degree sum")
        if total % 2:
            raise GraphError("odd number of half-edges")
        h = np.arange(total)
        if np.any(pairing[pairing] != h) or np.any(pairing == h):
            raise GraphError("pairing is not a fixed-point-free involution")
        half_owner = np.repeat(np.arange(n, dtype=np.int64), degrees)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])
        first = h[h < pairing]  # one representative half per edge, in half order
        m = first.size
        edge_id = np.empty(total, dtype=np.int64)
        edge_id[first] = np.arange(m)
        edge_id[pairing[first]] = np.arange(m)
        return cls(n, indptr, half_owner, pairing.copy(), edge_id,
                   half_owner[first].copy(), half_owner[pairing[first]].copy())

    @property
    def vertex_count(self) -> int:
        return self.n

    @property
    def edge_count(self) -> int:
        return self.edge_u.size

    @property
    def half_count(self) -> int:
        return self.half_owner.size

    def degrees(self) -> np.ndarray:
        """Per-vertex degree; a self-loop contributes 2 to its vertex."""
        return np.diff(self.indptr)

    def halves_of(self, vertices) -> np.ndarray:
        """All half-edge ids owned by the given vertices, vectorized."""
        vertices = np.asarray(vertices, dtype=np.int64)
        starts = self.indptr[vertices]
        counts = self.indptr[vertices + 1] - starts
        total = int(counts.sum())
        if total == 0:
            return np.empty(0, dtype=np.int64)
        offs = np.repeat(np.cumsum(counts) - counts, counts)
        return np.arange(total) - offs + np.repeat(starts, counts)

    def neighbors(self, v: int) -> np.ndarray:
        """Neighbor multiset of v (a self-loop lists v twice)."""
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return self.half_owner[self.pairing[np.arange(lo, hi)]]

    def adjacency(self, weights=None, drop_loops: bool = True) -> sp.csr_matrix:
        """Symmetric sparse adjacency; parallel edges reduced by minimum weight.

        With ``weights=None`` entries are hop counts (1.0 per edge).
        """
        u, v, m = self.edge_u, self.edge_v, self.edge_count
        w = np.ones(m) if weights is None else np.asarray(weights, dtype=np.float64)
        if drop_loops:
            keep = u != v
            u, v, w = u[keep], v[keep], w[keep]
        row = np.concatenate([u, v])
        col = np.concatenate([v, u])
        dat = np.concatenate([w, w])
        order = np.lexsort((col, row))
        row, col, dat = row[order], col[order], dat[order]
        if row.size:
            new = np.empty(row.size, dtype=bool)
            new[0] = True
            new[1:] = (row[1:] != row[:-1]) | (col[1:] != col[:-1])
            starts = np.flatnonzero(new)
            dat = np.minimum.reduceat(dat, starts)
            row, col = row[starts], col[starts]
        return sp.csr_matrix((dat, (row, col)), shape=(self.n, self.n))

    def validate(self) -> None:
        """Assert the half-edge invariants; raises GraphError on violation."""
        h = np.arange(self.half_count)
        if self.half_count % 2:
            raise GraphError("odd half-edge count")
        if self.half_count and (np.any(self.pairing[self.pairing] != h) or np.any(self.pairing == h)):
            raise GraphError("pairing is not a fixed-point-free involution")
        if int(self.degrees().sum()) != 2 * self.edge_count:
            raise GraphError("handshake violated")

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, m={self.edge_count})"


@dataclass(frozen=True)
class SubgraphView:
    """An induced subgraph plus the parent ids of its (dense) vertices."""

    graph: MultiGraph
    vertices: np.ndarray  # vertices[i] = parent id of local vertex i

    def __post_init__(self):
        self.vertices.flags.writeable = False


@dataclass(frozen=True)
class KernelDecomposition:
    """2-core contracted along maximal degree-2 chains.

    ``kernel`` edge k replaces a 2-path of ``path_length[k]`` core edges whose
    endpoints are ``kernel_vertices[kernel.edge_u[k]]`` / ``...edge_v[k]`` in
    the core's ids. Interior core vertices carry the kernel edge they sit on
    and their 1-based offset from the edge_u end.
    """

    kernel: MultiGraph
    path_length: np.ndarray
    kernel_vertices: np.ndarray  # core id of each kernel vertex
    interior_edge: np.ndarray    # per core vertex: kernel edge id, -1 for kernel vertices
    interior_pos: np.ndarray     # per core vertex: offset along the 2-path, 0 for kernel vertices


def induced_subgraph(g: MultiGraph, vertices) -> SubgraphView:
    """Subgraph induced by a vertex set, relabeled to dense 0-based ids."""
    vertices = np.unique(np.asarray(vertices, dtype=np.int64))
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[vertices] = np.arange(vertices.size)
    keep = (new_id[g.edge_u] >= 0) & (new_id[g.edge_v] >= 0)
    sub = MultiGraph.from_edges(vertices.size, new_id[g.edge_u[keep]], new_id[g.edge_v[keep]])
    return SubgraphView(sub, vertices)


def component_labels(g: MultiGraph) -> np.ndarray:
    """Connected-component label per vertex (scipy union-find under the hood)."""
    if g.n == 0:
        return np.empty(0, dtype=np.int64)
    labels = connected_components(g.adjacency(), directed=False)[1]
    return labels.astype(np.int64)


def largest_component(g: MultiGraph) -> SubgraphView:
    """Largest connected component; ties broken by smallest minimum vertex id.

    Empty graph yields an empty view.
    """
    if g.n == 0:
        return SubgraphView(MultiGraph.from_edges(0, [], []), np.empty(0, dtype=np.int64))
    labels = component_labels(g)
    sizes = np.bincount(labels)
    cand = np.flatnonzero(sizes == sizes.max())
    # first occurrence of a label in vertex order = that component's min id
    uniq, first = np.unique(labels, return_index=True)
    min_id = np.empty(sizes.size, dtype=np.int64)
    min_id[uniq] = first
    winner = int(cand[np.argmin(min_id[cand])])
    return induced_subgraph(g, np.flatnonzero(labels == winner))


def two_core(g: MultiGraph) -> SubgraphView:
    """Iteratively peel degree-<=1 vertices; the fixpoint has min degree >= 2.

    Trees peel to the empty graph. Idempotent.
    """
    deg = g.degrees().astype(np.int64)
    alive = np.ones(g.n, dtype=bool)
    frontier = np.flatnonzero(deg <= 1)
    while frontier.size:
        alive[frontier] = False
        partners = g.pairing[g.halves_of(frontier)]
        owners = g.half_owner[partners]
        owners = owners[alive[owners]]
        np.add.at(deg, owners, -1)
        cand = np.unique(owners)
        frontier = cand[(deg[cand] <= 1) & alive[cand]]
    return induced_subgraph(g, np.flatnonzero(alive))


def kernel_contract(core: MultiGraph) -> KernelDecomposition:
    """Contract maximal chains of degree-2 vertices into single kernel edges.

    Input must have min degree >= 2. A component that is a bare cycle (all
    degrees 2) has an empty kernel and is rejected rather than dropped.
    """
    deg = core.degrees()
    if core.n and deg.min() < 2:
        raise GraphError("kernel_contract requires min degree >= 2")
    kernel_vertices = np.flatnonzero(deg >= 3)
    if core.n and kernel_vertices.size == 0:
        raise GraphError("cycle component has empty kernel")
    kernel_of = np.full(core.n, -1, dtype=np.int64)
    kernel_of[kernel_vertices] = np.arange(kernel_vertices.size)

    indptr, pairing, owner = core.indptr, core.pairing, core.half_owner
    visited = np.zeros(core.half_count, dtype=bool)
    interior_edge = np.full(core.n, -1, dtype=np.int64)
    interior_pos = np.zeros(core.n, dtype=np.int64)
    eu, ev, lengths = [], [], []

    for a in kernel_vertices:
        for h in range(indptr[a], indptr[a + 1]):
            if visited[h]:
                continue
            edge_idx = len(lengths)
            length = 0
            cur = h
            while True:
                visited[cur] = True
                mate = pairing[cur]
                visited[mate] = True
                length += 1
                y = owner[mate]
                if kernel_of[y] >= 0:
                    break
                interior_edge[y] = edge_idx
                interior_pos[y] = length
                # degree-2 vertex: continue out the other half
                lo = indptr[y]
                cur = lo if lo != mate else lo + 1
            eu.append(kernel_of[a])
            ev.append(kernel_of[y])
            lengths.append(length)

    if not np.all(visited):
        raise GraphError("cycle component has empty kernel")
    kernel = MultiGraph.from_edges(kernel_vertices.size, eu, ev)
    return KernelDecomposition(
        kernel=kernel,
        path_length=np.asarray(lengths, dtype=np.int64),
        kernel_vertices=kernel_vertices,
        interior_edge=interior_edge,
        interior_pos=interior_pos,
    )


def expand_kernel(kd: KernelDecomposition) -> MultiGraph:
    """Re-subdivide each kernel edge into its recorded path length.

    Reconstructs a graph isomorphic to the contracted 2-core (kernel vertices
    first, then path interiors in edge order).
    """
    k = kd.kernel
    nk = k.vertex_count
    eu, ev = [], []
    nxt = nk
    for i in range(k.edge_count):
        a, b, length = int(k.edge_u[i]), int(k.edge_v[i]), int(kd.path_length[i])
        prev = a
        for _ in range(length - 1):
            eu.append(prev)
            ev.append(nxt)
            prev = nxt
            nxt += 1
        eu.append(prev)
        ev.append(b)
    return MultiGraph.from_edges(nxt, eu, ev)


def tree_excess(g: MultiGraph, vertices) -> int:
    """Edges of the induced subgraph beyond a spanning tree; 0 iff it is a tree."""
    vertices = np.unique(np.asarray(vertices, dtype=np.int64))
    if vertices.size == 0:
        raise GraphError("tree_excess of an empty set")
    view = induced_subgraph(g, vertices)
    if view.graph.n > 1:
        labels = component_labels(view.graph)
        if labels.max(initial=0) != 0:
            raise GraphError("vertex set does not induce a connected subgraph")
    return view.graph.edge_count - (vertices.size - 1)


def degree_histogram(g: MultiGraph) -> dict[int, int]:
    """Exact degree -> count map; counts sum to the vertex count."""
    deg = g.degrees()
    if deg.size == 0:
        return {}
    counts = np.bincount(deg)
    return {int(d): int(c) for d, c in enumerate(counts) if c}


def write_edge_list(g: MultiGraph, path) -> None:
    """Plain-text edge list: header ``n m``, then one ``u v`` line per edge."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist()):
            fh.write(f"{u} {v}\n")


def read_edge_list(path) -> MultiGraph:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise GraphError(f"bad edge-list header in {path}")
        n, m = int(header[0]), int(header[1])
        u = np.empty(m, dtype=np.int64)
        v = np.empty(m, dtype=np.int64)
        for i in range(m):
            parts = fh.readline().split()
            u[i], v[i] = int(parts[0]), int(parts[1])
    return MultiGraph.from_edges(n, u, v)

"""Random generation: G(n,p), configuration multigraphs, PGW trees, and the
two contiguous giant-component constructions.

All samplers take an explicit numpy Generator; experiments derive per-trial
streams with :func:`rng_stream` so runs are reproducible and trials are
independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import ndtri

from .graphcore import GraphError, KernelDecomposition, MultiGraph

DEFAULT_TREE_CAP = 10**6


def rng_stream(root_seed: int, *path: int) -> np.random.Generator:
    """Named splittable stream: disjoint sub-streams for distinct key paths."""
    return np.random.default_rng(np.random.SeedSequence(root_seed, spawn_key=tuple(path)))


def _normal_icdf(rng: np.random.Generator, mean: float, sd: float) -> float:
    # inverse-CDF draw: one uniform consumed, platform-stable
    u = rng.random()
    if u == 0.0:
        u = 2.0**-64
    return mean + sd * float(ndtri(u))


@dataclass(frozen=True)
class GiantParams:
    """Parameter bundle tying the construction's symbols to one home."""

    n: int
    eps: float
    p: float
    mu: float          # conjugate of 1 + eps
    lam: float         # exp(-lam) = 1 - (geometric success prob)
    model: str         # "young" | "general"
    Z: float | None = None
    N: int = 0
    N_k: dict[int, int] = field(default_factory=dict)
    Lambda: float | None = None

    def validate(self) -> None:
        if not (0 < self.mu < 1 < 1 + self.eps):
            raise ValueError("mu outside (0,1) or eps <= 0")
        lhs = self.mu * math.exp(-self.mu)
        rhs = (1 + self.eps) * math.exp(-(1 + self.eps))
        if abs(lhs - rhs) > 1e-12 * rhs:
            raise ValueError("mu is not the conjugate of 1+eps")
        if abs(self.p * self.n - (1 + self.eps)) > 1e-12 * (1 + self.eps):
            raise ValueError("p*n != 1+eps")
        if self.N <= 0 or (self.model == "young" and self.N % 2):
            raise ValueError("kernel vertex count must be positive (and even for the young model)")
        if self.N_k and sum(k * c for k, c in self.N_k.items()) % 2:
            raise ValueError("kernel degree sum is odd")


@dataclass(frozen=True)
class PgwTree:
    """Rooted Galton-Watson family tree, breadth-first vertex order."""

    parent: np.ndarray  # parent[0] == -1
    height: int
    size: int
    truncated: bool = False


@dataclass(frozen=True)
class AnnotatedGiant:
    """A constructed giant component with its build-time decomposition."""

    graph: MultiGraph
    core_vertices: np.ndarray
    kernel_vertices: np.ndarray
    kernel: KernelDecomposition
    params: GiantParams
    truncated_trees: int = 0


def sample_gnp(n: int, p: float, rng: np.random.Generator) -> MultiGraph:
    """Erdos-Renyi simple graph via geometric skipping, O(n + m) expected."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability out of range: {p}")
    npairs = n * (n - 1) // 2
    if p == 0.0 or npairs == 0:
        return MultiGraph.from_edges(n, [], [])
    if p == 1.0:
        i, j = np.triu_indices(n, k=1)
        return MultiGraph.from_edges(n, i, j)
    picks = []
    cursor = 0
    while cursor < npairs:
        expect = (npairs - cursor) * p
        batch = max(1024, int(expect + 6.0 * math.sqrt(expect + 1.0)) + 16)
        gaps = rng.geometric(p, size=batch)
        pos = cursor - 1 + np.cumsum(gaps)
        inside = pos < npairs
        picks.append(pos[inside])
        if not inside.all():
            break
        cursor = int(pos[-1]) + 1
    k = np.concatenate(picks) if picks else np.empty(0, dtype=np.int64)
    u, v = _pair_from_linear(n, k)
    return MultiGraph.from_edges(n, u, v)


def _pair_from_linear(n: int, k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert k = i*(2n-i-1)/2 + (j-i-1) for lexicographic pairs i < j."""
    if k.size == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    tn = 2 * n - 1
    i = ((tn - np.sqrt(tn * tn - 8.0 * k)) // 2).astype(np.int64)
    i = np.clip(i, 0, n - 2)

    def off(x):
        return x * (2 * n - x - 1) // 2

    # float sqrt can be off by one either way; settle exactly
    while True:
        too_high = off(i) > k
        if not too_high.any():
            break
        i[too_high] -= 1
    while True:
        too_low = (i < n - 2) & (off(i + 1) <= k)
        if not too_low.any():
            break
        i[too_low] += 1
    j = k - off(i) + i + 1
    return i, j


def sample_configuration(degrees, rng: np.random.Generator) -> MultiGraph:
    """Uniform configuration-model multigraph for a degree sequence.

    Accepts an array of per-vertex degrees or a vertex->degree mapping.
    """
    if isinstance(degrees, dict):
        n = max(degrees) + 1 if degrees else 0
        arr = np.zeros(n, dtype=np.int64)
        for vtx, d in degrees.items():
            arr[vtx] = d
        degrees = arr
    deg = np.asarray(degrees, dtype=np.int64)
    total = int(deg.sum())
    if total % 2:
        raise GraphError("degree sum must be even")
    perm = rng.permutation(total)
    pairing = np.empty(total, dtype=np.int64)
    pairing[perm[0::2]] = perm[1::2]
    pairing[perm[1::2]] = perm[0::2]
    return MultiGraph.from_matching(deg, pairing)


def conjugate_mu(eps: float) -> float:
    """The root mu in (0,1) of mu*e^-mu = (1+eps)*e^-(1+eps)."""
    if not 0.0 < eps <= 10.0:
        raise ValueError(f"eps must be in (0, 10], got {eps}")
    c = math.log1p(eps) - (1.0 + eps)

    def h(x):
        return math.log(x) - x - c

    mu = brentq(h, 1e-300, 1.0, xtol=1e-300, rtol=8.9e-16)
    target = (1.0 + eps) * math.exp(-(1.0 + eps))
    for _ in range(3):
        resid = mu * math.exp(-mu) - target
        if abs(resid) <= 1e-13 * target:
            break
        dh = (1.0 - mu) * math.exp(-mu)
        if dh > 0:
            mu = min(1.0 - 1e-18, max(1e-300, mu - resid / dh))
    return mu


def coupled_geom_exp(rate: float, rng: np.random.Generator, size=None):
    """Joint draw (w, len): w ~ Exp(rate), len = ceil(w) ~ Geom(1 - e^-rate).

    The coupling guarantees |len - w| < 1 on every draw.
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    u = rng.random(size)
    w = -np.log1p(-u) / rate
    tiny = np.nextafter(0.0, 1.0)
    if size is None:
        w = float(w) if w > 0 else tiny
        return w, int(math.ceil(w))
    w = np.where(w > 0, w, tiny)
    return w, np.ceil(w).astype(np.int64)


def sample_pgw_tree(mu: float, cap: int, rng: np.random.Generator) -> PgwTree:
    """Breadth-first Poisson(mu) Galton-Watson tree, truncated at cap vertices."""
    if not 0.0 < mu < 1.0:
        raise ValueError(f"offspring mean must be in (0,1), got {mu}")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    parent = [np.full(1, -1, dtype=np.int64)]
    frontier = np.zeros(1, dtype=np.int64)
    size = 1
    height = 0
    truncated = False
    while frontier.size:
        counts = rng.poisson(mu, frontier.size)
        total = int(counts.sum())
        if total == 0:
            break
        if size + total > cap:
            truncated = True
            total = cap - size
            if total <= 0:
                break
            # trim the last level to fit the cap
            cum = np.cumsum(counts)
            counts = np.minimum(counts, np.maximum(total - (cum - counts), 0))
            total = int(counts.sum())
        parents = np.repeat(frontier, counts)
        parent.append(parents)
        frontier = size + np.arange(total, dtype=np.int64)
        size += total
        height += 1
        if truncated:
            break
    return PgwTree(parent=np.concatenate(parent), height=height, size=size, truncated=truncated)


def sample_pgw_forest(mu: float, roots: int, rng: np.random.Generator,
                      cap: int = DEFAULT_TREE_CAP):
    """Batch of independent PGW(mu) trees, generated level-synchronously.

    Returns (parent, tree_id, sizes, heights, truncated): global parent ids
    with -1 at each root, the owning tree per node, and per-tree summaries.
    Trees reaching cap vertices stop growing and are flagged.
    """
    if not 0.0 < mu < 1.0:
        raise ValueError(f"offspring mean must be in (0,1), got {mu}")
    parent_parts = [np.full(roots, -1, dtype=np.int64)]
    tree_parts = [np.arange(roots, dtype=np.int64)]
    sizes = np.ones(roots, dtype=np.int64)
    heights = np.zeros(roots, dtype=np.int64)
    truncated = np.zeros(roots, dtype=bool)
    cur = np.arange(roots, dtype=np.int64)
    cur_tree = tree_parts[0]
    next_id = roots
    level = 0
    while cur.size:
        counts = rng.poisson(mu, cur.size)
        over = sizes[cur_tree] >= cap
        if over.any():
            truncated[cur_tree[over & (counts > 0)]] = True
            counts[over] = 0
        level += 1
        new_parent = np.repeat(cur, counts)
        new_tree = np.repeat(cur_tree, counts)
        if new_parent.size == 0:
            break
        parent_parts.append(new_parent)
        tree_parts.append(new_tree)
        heights[new_tree] = level
        sizes += np.bincount(new_tree, minlength=roots)
        cur = next_id + np.arange(new_parent.size, dtype=np.int64)
        cur_tree = new_tree
        next_id += new_parent.size
    return (np.concatenate(parent_parts), np.concatenate(tree_parts),
            sizes, heights, truncated)


def pgw_level_alive(mu: float, trees: int, depth: int, rng: np.random.Generator) -> np.ndarray:
    """Monte Carlo level populations: z[t] after `depth` generations per tree."""
    z = np.ones(trees, dtype=np.int64)
    for _ in range(depth):
        live = z > 0
        if not live.any():
            break
        z[live] = rng.poisson(mu * z[live].astype(np.float64))
        z[~live] = 0
    return z


def pgw_survival_exact(mu: float, k: int) -> float:
    """P(generation k is nonempty) by the generating-function recursion."""
    if not 0.0 < mu < 1.0:
        raise ValueError(f"offspring mean must be in (0,1), got {mu}")
    if k < 0:
        raise ValueError("k must be >= 0")
    q = 1.0
    for _ in range(k):
        q = -math.expm1(-mu * q)
    return q


def pgw_survival_sandwich(mu: float, k: int) -> tuple[float, float]:
    """Resistance bounds (1/(1+R_k), 2/(1+R_k)) on level-k survival."""
    if not 0.0 < mu < 1.0:
        raise ValueError(f"offspring mean must be in (0,1), got {mu}")
    if k < 1:
        raise ValueError("k must be >= 1")
    log_x = -math.log(mu)  # x = 1/mu > 1
    if (k + 1) * log_x > 250.0:
        # R_k = (x^(k+1) - 1)/(x - 1) in log space to dodge overflow
        log_r = (k + 1) * log_x + math.log1p(-mu ** (k + 1)) - math.log(math.expm1(log_x))
        lower = math.exp(-log_r) if log_r < 700 else 0.0
    else:
        x = 1.0 / mu
        r = (x ** (k + 1) - 1.0) / (x - 1.0)
        lower = 1.0 / (1.0 + r)
    return lower, 2.0 * lower


def _subdivided_edges(kernel: MultiGraph, lengths: np.ndarray):
    """Replace kernel edge i by a path of lengths[i] edges; interiors get fresh ids.

    Returns (edge_u, edge_v, n_total, interior_edge_ids, interior_positions);
    interior vertex ids start at kernel.vertex_count, grouped by edge.
    """
    nk = kernel.vertex_count
    eu_parts, ev_parts = [], []
    interior_counts = lengths - 1
    total_int = int(interior_counts.sum())
    interior_edge = np.repeat(np.arange(lengths.size, dtype=np.int64), interior_counts)
    interior_pos = np.concatenate(
        [np.arange(1, c + 1, dtype=np.int64) for c in interior_counts]
    ) if total_int else np.empty(0, dtype=np.int64)
    nxt = nk
    for i in range(lengths.size):
        length = int(lengths[i])
        a, b = int(kernel.edge_u[i]), int(kernel.edge_v[i])
        chain = [a] + list(range(nxt, nxt + length - 1)) + [b]
        nxt += length - 1
        eu_parts.extend(chain[:-1])
        ev_parts.extend(chain[1:])
    return (np.asarray(eu_parts, dtype=np.int64), np.asarray(ev_parts, dtype=np.int64),
            nxt, interior_edge, interior_pos)


def _assemble_giant(kernel_graph: MultiGraph, lengths: np.ndarray, tree_mu: float,
                    params: GiantParams, rng: np.random.Generator,
                    tree_cap: int) -> AnnotatedGiant:
    nk = kernel_graph.vertex_count
    eu, ev, n_core, int_edge, int_pos = _subdivided_edges(kernel_graph, lengths)
    parent, _, _, _, truncated = sample_pgw_forest(tree_mu, n_core, rng, cap=tree_cap)
    n_total = parent.size
    # forest roots are the core vertices, in order; children get fresh ids
    child = np.flatnonzero(parent >= 0)
    all_u = np.concatenate([eu, parent[child]])
    all_v = np.concatenate([ev, child])
    graph = MultiGraph.from_edges(n_total, all_u, all_v)
    interior_edge = np.full(n_core, -1, dtype=np.int64)
    interior_pos = np.zeros(n_core, dtype=np.int64)
    interior_edge[nk:] = int_edge
    interior_pos[nk:] = int_pos
    kd = KernelDecomposition(
        kernel=kernel_graph,
        path_length=lengths.astype(np.int64),
        kernel_vertices=np.arange(nk, dtype=np.int64),
        interior_edge=interior_edge,
        interior_pos=interior_pos,
    )
    return AnnotatedGiant(
        graph=graph,
        core_vertices=np.arange(n_core, dtype=np.int64),
        kernel_vertices=np.arange(nk, dtype=np.int64),
        kernel=kd,
        params=params,
        truncated_trees=int(truncated.sum()),
    )


def sample_young_giant(n: int, eps: float, rng: np.random.Generator,
                       tree_cap: int = DEFAULT_TREE_CAP) -> AnnotatedGiant:
    """3-regular-kernel construction: Geom(eps) paths, PGW(1-eps) trees."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0,1), got {eps}")
    e3n = eps**3 * n
    if e3n < 50:
        raise ValueError(f"eps^3*n = {e3n:.3g} too small for young-giant model (need >= 50)")
    z = 0.0
    for _ in range(100):
        z = _normal_icdf(rng, (2.0 / 3.0) * e3n, math.sqrt(e3n))
        if math.floor(z) > 0:
            break
    else:
        raise ValueError("eps^3*n too small for young-giant model")
    big_n = 2 * int(math.floor(z))
    kernel_graph = sample_configuration(np.full(big_n, 3, dtype=np.int64), rng)
    lengths = rng.geometric(eps, kernel_graph.edge_count)
    params = GiantParams(
        n=n, eps=eps, p=(1.0 + eps) / n, mu=conjugate_mu(eps),
        lam=-math.log1p(-eps), model="young", Z=z, N=big_n, N_k={3: big_n},
    )
    return _assemble_giant(kernel_graph, lengths, 1.0 - eps, params, rng, tree_cap)


def sample_general_giant(n: int, eps: float, rng: np.random.Generator,
                         tree_cap: int = DEFAULT_TREE_CAP) -> AnnotatedGiant:
    """Truncated-Poisson-kernel construction: Geom(1-mu) paths, PGW(mu) trees."""
    if not 0.0 < eps <= 0.5:
        raise ValueError(f"eps must be in (0, 0.5], got {eps}")
    if eps**3 * n < 50:
        raise ValueError(f"eps^3*n = {eps**3 * n:.3g} too small (need >= 50)")
    mu = conjugate_mu(eps)
    for _ in range(100):
        lam_cap = _normal_icdf(rng, 1.0 + eps - mu, math.sqrt(1.0 / (eps * n)))
        if lam_cap <= 0:
            continue
        degree_draw = None
        for _ in range(100):
            d = rng.poisson(lam_cap, n)
            kernel_deg = d[d >= 3]
            if kernel_deg.size == 0:
                break
            if int(kernel_deg.sum()) % 2 == 0:
                degree_draw = (d, kernel_deg)
                break
        if degree_draw is not None:
            break
    else:
        raise ValueError("no degree->=3 slots after 100 Lambda redraws")
    if degree_draw is None:
        raise ValueError("no degree->=3 slots after 100 Lambda redraws")
    d, kernel_deg = degree_draw
    counts = np.bincount(d)
    n_k = {int(k): int(c) for k, c in enumerate(counts) if k >= 3 and c}
    kernel_graph = sample_configuration(kernel_deg, rng)
    lengths = rng.geometric(1.0 - mu, kernel_graph.edge_count)
    params = GiantParams(
        n=n, eps=eps, p=(1.0 + eps) / n, mu=mu, lam=-math.log(mu),
        model="general", Z=None, N=int(kernel_deg.size), N_k=n_k, Lambda=lam_cap,
    )
    return _assemble_giant(kernel_graph, lengths, mu, params, rng, tree_cap)

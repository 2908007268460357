import numpy as np
import pytest

import giantscope as gs
from giantscope.diameter import bfs_distances
from giantscope.graphcore import GraphError


def graph_from(n, edges):
    return gs.MultiGraph.from_edges(n, [e[0] for e in edges], [e[1] for e in edges])


def path_graph(n):
    return graph_from(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return graph_from(n, [(i, (i + 1) % n) for i in range(n)])


# ------------------------------------------------------------- eccentricity

def test_bfs_eccentricity_examples():
    assert gs.bfs_eccentricity(path_graph(5), 0) == (4, 4)
    assert gs.bfs_eccentricity(cycle_graph(6), 0)[0] == 3
    star = graph_from(10, [(0, i) for i in range(1, 10)])
    assert gs.bfs_eccentricity(star, 0) == (1, 1)
    assert gs.bfs_eccentricity(star, 3) == (2, 1)


def test_bfs_distances_unreachable():
    g = graph_from(4, [(0, 1)])
    d = bfs_distances(g, 0)
    assert d.tolist() == [0, 1, -1, -1]


def test_bfs_parents_consistent():
    g = cycle_graph(7)
    dist, par = bfs_distances(g, 0, parents=True)
    for v in range(1, 7):
        assert dist[par[v]] == dist[v] - 1


def test_ecc_lipschitz_property():
    rng = np.random.default_rng(2)
    g = gs.largest_component(gs.sample_gnp(300, 2.5 / 300, rng)).graph
    eccs = [gs.bfs_eccentricity(g, v)[0] for v in range(g.n)]
    d0 = bfs_distances(g, 0)
    for v in range(g.n):
        assert abs(eccs[0] - eccs[v]) <= d0[v]


# ------------------------------------------------------------- double sweep

def test_double_sweep_exact_on_trees():
    rng = np.random.default_rng(0)
    for seed in range(10):
        r = np.random.default_rng(seed)
        # random tree via random attachment
        n = int(r.integers(2, 200))
        parents = [int(r.integers(0, i)) for i in range(1, n)]
        tree = graph_from(n, list(zip(range(1, n), parents)))
        exact, _ = gs.exact_diameter(tree, method="all_pairs")
        assert gs.double_sweep_bound(tree, 1, rng) == exact


def test_double_sweep_cycle():
    assert gs.double_sweep_bound(cycle_graph(6), 3, np.random.default_rng(0)) == 3


def test_double_sweep_disconnected_errors():
    with pytest.raises(GraphError):
        gs.double_sweep_bound(graph_from(4, [(0, 1), (2, 3)]), 2, np.random.default_rng(0))


def test_double_sweep_never_exceeds_exact():
    rng = np.random.default_rng(9)
    for seed in range(20):
        r = np.random.default_rng(seed)
        n = int(r.integers(30, 400))
        g = gs.largest_component(gs.sample_gnp(n, 1.5 / n, r)).graph
        lb = gs.double_sweep_bound(g, 10, rng)
        exact, _ = gs.exact_diameter(g)
        assert lb <= exact


# ------------------------------------------------------------ exact diameter

def test_exact_diameter_examples():
    assert gs.exact_diameter(cycle_graph(6))[0] == 3
    # two triangles joined by a 4-edge path
    edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6),
             (6, 7), (7, 8), (8, 6)]
    assert gs.exact_diameter(graph_from(9, edges))[0] == 6


def test_exact_diameter_disconnected_errors():
    with pytest.raises(GraphError):
        gs.exact_diameter(graph_from(4, [(0, 1), (2, 3)]))


def test_ifub_matches_all_pairs_on_random_giants():
    for seed in range(60):
        r = np.random.default_rng(seed)
        n = int(r.integers(20, 1000))
        g = gs.largest_component(gs.sample_gnp(n, 2.0 / n, r)).graph
        a, _ = gs.exact_diameter(g, method="ifub")
        b, _ = gs.exact_diameter(g, method="all_pairs")
        assert a == b, f"seed={seed}"


def test_exact_diameter_relabel_invariant():
    for seed in range(10):
        r = np.random.default_rng(seed)
        n = int(r.integers(20, 500))
        g = gs.largest_component(gs.sample_gnp(n, 2.0 / n, r)).graph
        base, _ = gs.exact_diameter(g, method="ifub")
        perm = r.permutation(g.n)
        relabeled = gs.MultiGraph.from_edges(g.n, perm[g.edge_u], perm[g.edge_v])
        assert gs.exact_diameter(relabeled, method="ifub")[0] == base


def test_exact_diameter_witness_pair_attains_value():
    for seed in range(10):
        r = np.random.default_rng(seed + 100)
        g = gs.largest_component(gs.sample_gnp(300, 2.0 / 300, r)).graph
        diam, (u, v) = gs.exact_diameter(g, method="ifub")
        assert bfs_distances(g, u)[v] == diam

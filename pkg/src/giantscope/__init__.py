"""giantscope: supercritical giant components, FPP, and graph diameters."""

from .graphcore import (
    GraphError,
    KernelDecomposition,
    MultiGraph,
    SubgraphView,
    degree_histogram,
    expand_kernel,
    induced_subgraph,
    kernel_contract,
    largest_component,
    read_edge_list,
    tree_excess,
    two_core,
    write_edge_list,
)
from .samplers import (
    AnnotatedGiant,
    GiantParams,
    PgwTree,
    conjugate_mu,
    coupled_geom_exp,
    pgw_survival_exact,
    pgw_survival_sandwich,
    rng_stream,
    sample_configuration,
    sample_general_giant,
    sample_gnp,
    sample_pgw_forest,
    sample_pgw_tree,
    sample_young_giant,
)
from .fpp import (
    ExplorationRecord,
    WeightedGraph,
    assign_exp_weights,
    count_good_vertices,
    diameter_path_edge_count,
    exploration,
    metric_diameter,
    metric_pair_max,
    read_weighted_edge_list,
    sssp,
    weighted_diameter,
    write_weighted_edge_list,
)
from .diameter import (
    bfs_distances,
    bfs_eccentricity,
    double_sweep_bound,
    exact_diameter,
)

__version__ = "0.1.0"

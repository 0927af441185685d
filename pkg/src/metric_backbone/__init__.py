"""Metric backbones of weighted graphs, weighted stochastic block models,
competing sparsifiers and adjacency spectral clustering."""

from .backbone import (
    BackboneResult,
    ShortestPathTree,
    all_pairs_distances,
    approximate_backbone,
    default_num_roots,
    dijkstra,
    max_shortest_path_cost,
    metric_backbone,
    pair_distances,
)
from .cluster import adjusted_rand_index, clustering_loss, kmeans, spectral_clustering, spectral_embedding
from .errors import *  # noqa: F401,F403
from .graph import (
    Mode,
    Partition,
    WeightedGraph,
    component_count,
    connected_components,
    filter_small_components,
    filter_well_connected_components,
    from_edge_list,
    is_connected,
)
from .report import BlockRetention, SparsifyReport, block_retention
from .sparsify import effective_resistances, spectral_sparsify, threshold_sparsify
from .transforms import PointCloud, distance_to_proximity, knn_graph, proximity_to_distance, weighted_jaccard
from .wsbm import (
    CostDistribution,
    WsbmParams,
    backbone_probability_quadrature,
    empirical_retention,
    operator_summary,
    planted_partition,
    predicted_backbone_density,
    predicted_retention,
    sample_wsbm,
)

__version__ = "0.1.0"

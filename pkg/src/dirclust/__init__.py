"""Density-based clustering for directional data on the unit hypersphere.

Kernel density estimation with the von Mises-Fisher kernel, highest
density region thresholds, level-set cluster trees with geodesic edge
weights, density-ratio classification of outskirts points, bandwidth
selection, and a simulation/evaluation harness.
"""

from ._kernels import BACKEND as kernel_backend
from .bandwidth import (
    BandwidthResult,
    estimate_vmf_concentration,
    lcv_score,
    lscv_score,
    select_bandwidth,
    select_lcv,
    select_lscv,
    select_rot_circular,
    select_rot_hypersphere,
)
from .classify import Labeling, adjusted_rand_index, classify, spherical_kmeans
from .density import (
    DensityModel,
    KernelDensity,
    VmfMixture,
    integrate_density,
    log_vmf_const,
    sample_uniform,
    sample_vmf,
)
from .geometry import geodesic_distance, geodesic_points, normalize, normalize_rows
from .hdr import HdrSpec, TauGrid, estimate_threshold, hdr_contains, hdr_mask, level_for_tau
from .tree import (
    ClusterTree,
    CoreAssignment,
    GraphConfig,
    ModeFunction,
    WeightedGraph,
    build_graph,
    build_merge_tree,
    cluster_cores,
    components_at_level,
    graph_components,
    mode_function,
)

__version__ = "0.1.0"

__all__ = [
    "BandwidthResult",
    "ClusterTree",
    "CoreAssignment",
    "DensityModel",
    "GraphConfig",
    "HdrSpec",
    "KernelDensity",
    "Labeling",
    "ModeFunction",
    "TauGrid",
    "VmfMixture",
    "WeightedGraph",
    "adjusted_rand_index",
    "build_graph",
    "build_merge_tree",
    "classify",
    "cluster_cores",
    "components_at_level",
    "estimate_threshold",
    "estimate_vmf_concentration",
    "geodesic_distance",
    "geodesic_points",
    "graph_components",
    "hdr_contains",
    "hdr_mask",
    "integrate_density",
    "kernel_backend",
    "lcv_score",
    "level_for_tau",
    "log_vmf_const",
    "lscv_score",
    "mode_function",
    "normalize",
    "normalize_rows",
    "sample_uniform",
    "sample_vmf",
    "select_bandwidth",
    "select_lcv",
    "select_lscv",
    "select_rot_circular",
    "select_rot_hypersphere",
    "spherical_kmeans",
]

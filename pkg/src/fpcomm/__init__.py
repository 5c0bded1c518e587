"""Community detection by maximizing the performance (fp) partition measure."""

from . import fastfp, fpgreed
from ._accel import USE_NUMBA, backend_name
from .graph import Graph, bridged_cliques, common_neighbors, load_edge_list, ring_of_cliques
from .oracle import exhaustive_best_fp
from .quality import FpScore, Partition, cross_edges, fp, merge_delta, modularity, move_delta

__version__ = "0.1.0"

__all__ = [
    "FpScore",
    "Graph",
    "Partition",
    "USE_NUMBA",
    "backend_name",
    "bridged_cliques",
    "common_neighbors",
    "cross_edges",
    "exhaustive_best_fp",
    "fastfp",
    "fp",
    "fpgreed",
    "load_edge_list",
    "merge_delta",
    "modularity",
    "move_delta",
    "ring_of_cliques",
]

"""Submodular objective families: coverage, fair harmonic centrality, influence."""

from .centrality import (
    CentralityInstance,
    build_centrality_instance,
    fair_harmonic_value,
    pick_median_degree_target,
    reverse_bfs,
)
from .coverage import CoverInstance, CoverOracle, cover_value, uncovered_edges
from .graph import Graph, load_colored_graph, read_colors, read_edge_list, read_probabilities, write_edge_list, write_mapping
from .influence import CascadeModel, build_cascade_model, influence_value

__all__ = [
    "CascadeModel",
    "CentralityInstance",
    "CoverInstance",
    "CoverOracle",
    "Graph",
    "build_cascade_model",
    "build_centrality_instance",
    "cover_value",
    "fair_harmonic_value",
    "influence_value",
    "load_colored_graph",
    "pick_median_degree_target",
    "read_colors",
    "read_edge_list",
    "read_probabilities",
    "reverse_bfs",
    "uncovered_edges",
    "write_edge_list",
    "write_mapping",
]

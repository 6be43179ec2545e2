"""Clustering the hyperedges of temporal hypergraphs through weighted line graphs."""

__version__ = "0.1.0"

from .analysis import (cluster_stats, degree_cluster_correlation, distribution_matrix, hellinger,
                       project_to_vertices, sigma_sweep, topic_diversity)
from .extraction import OUTLIER, Clustering, CondensedTree, condense, excess_of_mass, extract, run_pipeline
from .hierarchy import Dendrogram, SpanningForest, maximum_spanning_forest, single_linkage
from .hypergraph import (TemporalHypergraph, clean_authors, load, normalize_times, parse_csv,
                         parse_jsonl)
from .linegraph import WeightedLineGraph, build_line_graph, candidate_pairs, connected_components
from .similarity import (SimilarityKind, combined_weight, jaccard, simplicial, size_filtered,
                         time_kernel)

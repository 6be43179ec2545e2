"""Condensed cluster tree and excess-of-mass flat cluster selection.

Merge distances become densities ``lambda = 1 / d``.  Walking the hierarchy
top-down, a split where both sides have at least ``min_cluster_size`` points
births two child clusters; smaller sides shed their points from the current
cluster at the split's lambda.  Flat clusters are then the antichain of the
condensed tree with maximum total stability.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from . import kernels
from .errors import ParameterError
from .hierarchy import Dendrogram, SpanningForest, maximum_spanning_forest, single_linkage
from .hypergraph import TemporalHypergraph
from .linegraph import WeightedLineGraph, build_line_graph
from .similarity import SimilarityKind

log = logging.getLogger(__name__)

OUTLIER = -1
D_CLAMP = 1e-12


@dataclass(frozen=True, eq=False)
class CondensedTree:
    """Condensed clusters (ids ascend top-down) plus per-point fall-out events.

    ``parent[c]`` is -1 for roots.  ``point_cluster[p]`` is the cluster point
    ``p`` falls out of at ``point_lambda[p]``, or -1 if it never belongs to one.
    """

    n_points: int
    min_cluster_size: int
    parent: np.ndarray
    birth: np.ndarray
    size: np.ndarray
    point_cluster: np.ndarray
    point_lambda: np.ndarray
    joined: bool = True

    @property
    def n_clusters(self) -> int:
        return int(self.parent.shape[0])

    def roots(self) -> np.ndarray:
        return np.flatnonzero(self.parent < 0)

    def children(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_clusters)]
        for c in range(self.n_clusters):
            if self.parent[c] >= 0:
                out[self.parent[c]].append(c)
        return out

    def stability(self) -> np.ndarray:
        return stability(self)


@dataclass(eq=False)
class Clustering:
    labels: np.ndarray
    stability: np.ndarray
    condensed_ids: np.ndarray
    params: dict = field(default_factory=dict)

    @property
    def n_clusters(self) -> int:
        return int(self.stability.shape[0])

    @property
    def outlier_fraction(self) -> float:
        n = self.labels.shape[0]
        return float((self.labels == OUTLIER).sum() / n) if n else 0.0

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cluster)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels[self.labels >= 0], minlength=self.n_clusters)


def condense(dendrogram: Dendrogram, min_cluster_size: int = 10, join_components: bool = True,
             d_clamp: float = D_CLAMP) -> CondensedTree:
    """Condense a single-linkage forest.

    With ``join_components`` every component hangs below one root born at
    lambda 0, as if components were merged at infinite distance; components
    of at least ``min_cluster_size`` points become its children when there
    are two or more of them.  Without it, each such component is a separate
    root cluster and smaller components are left out of every cluster.
    """
    if int(min_cluster_size) != min_cluster_size or min_cluster_size < 2:
        raise ParameterError(f"min_cluster_size must be an integer >= 2, got {min_cluster_size!r}")
    parent, birth, size, pcl, plam = kernels.get().condense_forest(
        dendrogram.left, dendrogram.right, dendrogram.distance, dendrogram.size,
        dendrogram.n_leaves, int(min_cluster_size), bool(join_components), float(d_clamp),
    )
    return CondensedTree(dendrogram.n_leaves, int(min_cluster_size), parent, birth, size, pcl, plam,
                         joined=bool(join_components))


def stability(tree: CondensedTree) -> np.ndarray:
    """Excess of mass per cluster: sum over departing points and child clusters
    of ``size * (lambda_leave - lambda_birth)``."""
    k = tree.n_clusters
    stab = np.zeros(k)
    pts = tree.point_cluster >= 0
    pc = tree.point_cluster[pts]
    np.add.at(stab, pc, tree.point_lambda[pts] - tree.birth[pc])
    kids = np.flatnonzero(tree.parent >= 0)
    par = tree.parent[kids]
    np.add.at(stab, par, tree.size[kids] * (tree.birth[kids] - tree.birth[par]))
    return stab


def select_clusters(tree: CondensedTree, stab: np.ndarray, allow_single_root: bool = False) -> np.ndarray:
    """Boolean mask of the selected antichain; on exact ties the children win."""
    k = tree.n_clusters
    children = tree.children()
    best = np.zeros(k)
    chosen = np.zeros(k, bool)
    for c in range(k - 1, -1, -1):
        below = sum(best[x] for x in children[c])
        selectable = allow_single_root or tree.parent[c] >= 0
        if selectable and (not children[c] or stab[c] > below):
            chosen[c] = True
            best[c] = stab[c]
        else:
            best[c] = below
    # keep only the topmost chosen cluster on every root-to-leaf path
    final = np.zeros(k, bool)
    covered = np.zeros(k, bool)
    for c in range(k):
        p = tree.parent[c]
        above = covered[p] if p >= 0 else False
        final[c] = chosen[c] and not above
        covered[c] = above or final[c]
    return final


def excess_of_mass(tree: CondensedTree, allow_single_root: bool = False) -> Clustering:
    stab = stability(tree)
    selected = select_clusters(tree, stab, allow_single_root)
    k = tree.n_clusters
    # nearest selected ancestor-or-self; parents have smaller ids
    owner = np.full(k, -1, np.int64)
    for c in range(k):
        p = tree.parent[c]
        owner[c] = c if selected[c] else (owner[p] if p >= 0 else -1)
    point_owner = np.full(tree.n_points, -1, np.int64)
    has = tree.point_cluster >= 0
    point_owner[has] = owner[tree.point_cluster[has]]

    sel_ids = np.flatnonzero(selected)
    first = np.full(k, tree.n_points, np.int64)
    in_cl = np.flatnonzero(point_owner >= 0)
    np.minimum.at(first, point_owner[in_cl], in_cl)
    sel_ids = sel_ids[np.argsort(first[sel_ids], kind="stable")]
    dense = np.full(k, OUTLIER, np.int64)
    dense[sel_ids] = np.arange(sel_ids.shape[0])
    labels = np.full(tree.n_points, OUTLIER, np.int64)
    labels[in_cl] = dense[point_owner[in_cl]]
    return Clustering(
        labels=labels,
        stability=stab[sel_ids],
        condensed_ids=sel_ids,
        params={"min_cluster_size": tree.min_cluster_size, "allow_single_root": allow_single_root,
                "join_components": tree.joined},
    )


@dataclass(eq=False)
class PipelineResult:
    line_graph: WeightedLineGraph
    forest: SpanningForest
    dendrogram: Dendrogram
    tree: CondensedTree
    clustering: Clustering


def run_pipeline(H: TemporalHypergraph, sigma: float, sim: SimilarityKind | str = "jaccard",
                 min_cluster_size: int = 10, allow_single_root: bool = False,
                 join_components: bool = True, max_degree: int | None = None,
                 workers: int | None = None) -> PipelineResult:
    if isinstance(sim, str):
        sim = SimilarityKind(sim)
    if int(min_cluster_size) != min_cluster_size or min_cluster_size < 2:
        raise ParameterError(f"min_cluster_size must be an integer >= 2, got {min_cluster_size!r}")
    LG = build_line_graph(H, sigma, sim, max_degree=max_degree, workers=workers)
    log.info("line graph: %d vertices, %d edges", LG.n_vertices, LG.n_edges)
    forest = maximum_spanning_forest(LG)
    dendro = single_linkage(forest)
    tree = condense(dendro, min_cluster_size, join_components=join_components)
    clustering = excess_of_mass(tree, allow_single_root)
    clustering.params.update({"sigma": float(sigma), "similarity": sim.name,
                              "slack_ratio": sim.slack_ratio, "slack_offset": sim.slack_offset})
    return PipelineResult(LG, forest, dendro, tree, clustering)


def extract(H: TemporalHypergraph, sigma: float, sim: SimilarityKind | str = "jaccard",
            min_cluster_size: int = 10, **kwargs) -> Clustering:
    """Line graph -> spanning forest -> single linkage -> condense -> excess of mass."""
    return run_pipeline(H, sigma, sim, min_cluster_size, **kwargs).clustering


def write_condensed_csv(tree: CondensedTree, stream: IO[str]) -> None:
    """hdbscan-style rows; cluster ``c`` is written as ``n_points + c``."""
    n = tree.n_points
    stream.write("parent,child,lambda,size\n")
    for c in range(tree.n_clusters):
        if tree.parent[c] >= 0:
            stream.write(f"{n + tree.parent[c]},{n + c},{tree.birth[c]:.12g},{tree.size[c]}\n")
    for p in np.flatnonzero(tree.point_cluster >= 0).tolist():
        stream.write(f"{n + tree.point_cluster[p]},{p},{tree.point_lambda[p]:.12g},1\n")

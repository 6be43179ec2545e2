"""Maximum spanning forest and the single-linkage hierarchy built from it."""
from __future__ import annotations

from dataclasses import dataclass
from typing import IO

import numpy as np

from . import kernels
from .linegraph import WeightedLineGraph


@dataclass(frozen=True, eq=False)
class SpanningForest:
    n_vertices: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray

    @property
    def n_edges(self) -> int:
        return int(self.weights.shape[0])

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """Merge list over ``n_leaves`` leaves; merge ``k`` creates node ``n_leaves + k``.

    A disconnected line graph gives a forest: fewer than ``n_leaves - 1``
    merges, with one root per component.  Distances are non-decreasing.
    """

    n_leaves: int
    left: np.ndarray
    right: np.ndarray
    distance: np.ndarray
    size: np.ndarray

    @property
    def n_merges(self) -> int:
        return int(self.distance.shape[0])

    def roots(self) -> np.ndarray:
        total = self.n_leaves + self.n_merges
        is_child = np.zeros(total, bool)
        is_child[self.left] = True
        is_child[self.right] = True
        return np.flatnonzero(~is_child)

    def leaves_of(self, node: int) -> list[int]:
        out, stack = [], [node]
        while stack:
            x = stack.pop()
            if x < self.n_leaves:
                out.append(x)
            else:
                k = x - self.n_leaves
                stack.extend((int(self.left[k]), int(self.right[k])))
        return sorted(out)


def maximum_spanning_forest(LG: WeightedLineGraph) -> SpanningForest:
    """Kruskal in decreasing weight; equal weights are taken in (i, j) order."""
    keep = kernels.get().spanning_forest(LG.rows, LG.cols, LG.weights, LG.n_vertices)
    return SpanningForest(LG.n_vertices, LG.rows[keep], LG.cols[keep], LG.weights[keep])


def single_linkage(forest: SpanningForest) -> Dendrogram:
    """Merge along forest edges by increasing distance ``1 - w`` (ties by (i, j))."""
    d = 1.0 - forest.weights
    order = np.lexsort((forest.cols, forest.rows, d))
    a = forest.rows[order].astype(np.int64)
    b = forest.cols[order].astype(np.int64)
    d = d[order]
    left, right, size = kernels.get().single_linkage_replay(a, b, d, forest.n_vertices)
    return Dendrogram(forest.n_vertices, left, right, d, size)


def write_csv(dendrogram: Dendrogram, stream: IO[str]) -> None:
    stream.write("left,right,distance,size\n")
    for l, r, d, s in zip(dendrogram.left.tolist(), dendrogram.right.tolist(),
                          dendrogram.distance.tolist(), dendrogram.size.tolist()):
        stream.write(f"{l},{r},{d:.12g},{s}\n")

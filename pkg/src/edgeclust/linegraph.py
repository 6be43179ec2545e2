"""Sparse weighted line graph over hyperedges.

Two hyperedges are adjacent when they share a vertex and their times differ
by less than ``sigma``; every other pair has zero weight under all supported
similarities, so candidates come from scanning each vertex's time-sorted
incidence list inside the time window.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from typing import IO, Iterator

import numpy as np

from . import kernels
from .errors import ParameterError
from .hypergraph import TemporalHypergraph
from .similarity import SimilarityKind

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WeightedLineGraph:
    """Upper-triangular adjacency ``(rows[k], cols[k], weights[k])``, sorted by (row, col)."""

    n_vertices: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray

    @property
    def n_edges(self) -> int:
        return int(self.weights.shape[0])

    def to_scipy(self):
        from scipy.sparse import coo_matrix

        n = self.n_vertices
        m = coo_matrix((self.weights, (self.rows, self.cols)), shape=(n, n))
        return (m + m.T).tocsr()

    def edge_dict(self) -> dict[tuple[int, int], float]:
        return {(int(i), int(j)): float(w) for i, j, w in zip(self.rows, self.cols, self.weights)}


@dataclass(frozen=True, eq=False)
class ComponentSummary:
    component_count: int
    large_component_count: int
    labels: np.ndarray
    sizes: np.ndarray
    threshold: int = 10

    def to_json(self) -> dict:
        return {
            "components": self.component_count,
            "large_components": self.large_component_count,
            "threshold": self.threshold,
        }


def _check_sigma(sigma):
    if not (isinstance(sigma, (int, float, np.floating, np.integer)) and sigma > 0 and np.isfinite(sigma)):
        raise ParameterError(f"sigma must be a positive finite number, got {sigma!r}")


def candidate_pairs(H: TemporalHypergraph, sigma: float) -> Iterator[tuple[int, int]]:
    """Yield every pair ``i < j`` sharing a vertex with ``|t(i) - t(j)| < sigma``, in (i, j) order."""
    _check_sigma(sigma)
    times = H._require_times()
    ptr, inc, inc_t, pos = H.incidence_ptr, H.incidence_edges, H.incidence_times, H.entry_positions
    for i in range(H.n_edges):
        ti = times[i]
        partners = set()
        for p in range(H.edge_ptr[i], H.edge_ptr[i + 1]):
            v = H.edge_members[p]
            q, start, stop = pos[p], ptr[v], ptr[v + 1]
            r = q - 1
            while r >= start and ti - inc_t[r] < sigma:
                partners.add(int(inc[r]))
                r -= 1
            r = q + 1
            while r < stop and inc_t[r] - ti < sigma:
                partners.add(int(inc[r]))
                r += 1
        for j in sorted(x for x in partners if x > i):
            yield i, j


def build_line_graph(
    H: TemporalHypergraph,
    sigma: float,
    sim: SimilarityKind | str = "jaccard",
    max_degree: int | None = None,
    workers: int | None = None,
) -> WeightedLineGraph:
    """Weighted line graph with ``w = sqrt(s * T_sigma)``; zero-weight pairs are dropped.

    ``max_degree`` skips vertices with more incident edges than that during
    candidate discovery (pairs sharing only such vertices are lost); weights
    of the pairs that are found stay exact.
    """
    _check_sigma(sigma)
    if isinstance(sim, str):
        sim = SimilarityKind(sim)
    times = H._require_times()
    skip = np.zeros(H.n_vertices, dtype=np.bool_)
    if max_degree is not None:
        skip = H.degrees > max_degree
        if skip.any():
            names = [H.vertex_names[v] for v in np.flatnonzero(skip)[:20]]
            log.warning("degree cap %d skips %d vertices: %s%s", max_degree, int(skip.sum()),
                        ", ".join(names), " ..." if skip.sum() > 20 else "")
    ra, ro, rq = sim.filter_coefficients()
    rows, cols, w = kernels.get().line_graph(
        H.edge_ptr, H.edge_members, H.sizes, times,
        H.incidence_ptr, H.incidence_edges, H.incidence_times,
        skip, bool(skip.any()), float(sigma), sim.code, ra, ro, rq,
        workers=workers or os.cpu_count() or 1,
    )
    return WeightedLineGraph(H.n_edges, rows, cols, w)


def connected_components(LG: WeightedLineGraph, threshold: int = 10) -> ComponentSummary:
    labels = kernels.get().component_labels(LG.n_vertices, LG.rows, LG.cols)
    sizes = np.bincount(labels, minlength=0) if LG.n_vertices else np.zeros(0, np.int64)
    return ComponentSummary(
        component_count=int(sizes.shape[0]),
        large_component_count=int((sizes >= threshold).sum()),
        labels=labels,
        sizes=sizes,
        threshold=threshold,
    )


def write_csv(LG: WeightedLineGraph, stream: IO[str]) -> None:
    stream.write("i,j,w\n")
    for i, j, w in zip(LG.rows.tolist(), LG.cols.tolist(), LG.weights.tolist()):
        stream.write(f"{i},{j},{w:.12g}\n")

"""Post-clustering statistics: cluster reports, vertex projections, topic and
author distributions with Hellinger distances, and sigma sweeps."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import IO, Sequence

import numpy as np
from scipy.sparse import csr_matrix

from .errors import ParameterError, UndefinedCorrelationError
from .extraction import OUTLIER, Clustering, extract
from .hypergraph import TemporalHypergraph
from .linegraph import build_line_graph, connected_components
from .similarity import SimilarityKind


def _g(x: float) -> float:
    return float(f"{x:.12g}")


def primary_category(labels: Sequence[str]) -> str | None:
    return labels[0] if labels else None


def subject_of(category: str) -> str:
    """``"math.at"`` -> ``"math"``; categories without a dot are their own subject."""
    return category.split(".", 1)[0]


@dataclass
class ClusterReport:
    cluster: int
    size: int
    lifetime: float
    mean_edge_size: float
    std_edge_size: float
    unique_subjects: int
    unique_categories: int
    topic_distribution: dict[str, float] = field(default_factory=dict)
    author_distribution: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        for key in ("lifetime", "mean_edge_size", "std_edge_size"):
            d[key] = _g(d[key])
        d["topic_distribution"] = {k: _g(v) for k, v in self.topic_distribution.items()}
        d["author_distribution"] = {k: _g(v) for k, v in self.author_distribution.items()}
        return d


def _cluster_edges(clustering: Clustering) -> list[np.ndarray]:
    labels = clustering.labels
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(clustering.n_clusters + 1))
    return [order[bounds[c]:bounds[c + 1]] for c in range(clustering.n_clusters)]


def cluster_stats(H: TemporalHypergraph, clustering: Clustering) -> list[ClusterReport]:
    """One report per cluster, ordered by cluster id.

    The author distribution gives each paper weight ``1/|M(e)|`` per member and
    is normalized to sum to one.  Edge-size spread is the population std.
    """
    times = H._require_times()
    sizes = H.sizes
    reports = []
    for c, edges in enumerate(_cluster_edges(clustering)):
        cats = [primary_category(H.labels[e]) for e in edges]
        cats = [x for x in cats if x is not None]
        topic = {}
        if cats:
            names, counts = np.unique(cats, return_counts=True)
            topic = {str(k): v / len(cats) for k, v in zip(names, counts)}
        verts = np.concatenate([H.members(e) for e in edges])
        wts = np.repeat(1.0 / sizes[edges], sizes[edges])
        uv, inv = np.unique(verts, return_inverse=True)
        mass = np.bincount(inv, weights=wts)
        mass /= mass.sum()
        es = sizes[edges].astype(np.float64)
        reports.append(ClusterReport(
            cluster=c,
            size=int(edges.shape[0]),
            lifetime=float(times[edges].max() - times[edges].min()),
            mean_edge_size=float(es.mean()),
            std_edge_size=float(es.std()),
            unique_subjects=len({subject_of(x) for x in cats}),
            unique_categories=len(set(cats)),
            topic_distribution=topic,
            author_distribution={H.vertex_names[v]: float(p) for v, p in zip(uv, mass)},
        ))
    return reports


@dataclass(eq=False)
class VertexProjection:
    """Clusters per vertex in CSR form (``ptr``, ``clusters``) and vertex degrees."""

    ptr: np.ndarray
    clusters: np.ndarray
    degree: np.ndarray

    @property
    def n_vertices(self) -> int:
        return int(self.degree.shape[0])

    @property
    def cluster_counts(self) -> np.ndarray:
        return np.diff(self.ptr)

    def clusters_of(self, v: int) -> set[int]:
        return set(self.clusters[self.ptr[v]:self.ptr[v + 1]].tolist())

    @property
    def unclustered_fraction(self) -> float:
        n = self.n_vertices
        return float((self.cluster_counts == 0).sum() / n) if n else 0.0


def project_to_vertices(H: TemporalHypergraph, clustering: Clustering) -> VertexProjection:
    """Vertex ``v`` belongs to every cluster holding at least one of its edges."""
    labels = np.repeat(clustering.labels, H.sizes)
    verts = H.edge_members.astype(np.int64)
    keep = labels != OUTLIER
    k = max(clustering.n_clusters, 1)
    pairs = np.unique(verts[keep] * k + labels[keep])
    v, c = pairs // k, pairs % k
    ptr = np.zeros(H.n_vertices + 1, dtype=np.int64)
    np.cumsum(np.bincount(v, minlength=H.n_vertices), out=ptr[1:])
    return VertexProjection(ptr, c, H.degrees.copy())


def degree_cluster_correlation(projection: VertexProjection) -> float:
    """Pearson correlation between vertex degree and number of clusters."""
    x = projection.degree.astype(np.float64)
    y = projection.cluster_counts.astype(np.float64)
    if x.shape[0] < 2 or x.std() == 0 or y.std() == 0:
        raise UndefinedCorrelationError("correlation needs at least two vertices and non-constant values")
    return float(np.corrcoef(x, y)[0, 1])


def hellinger(p, q) -> float:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"distributions have different supports: {p.shape} vs {q.shape}")
    return float(np.sqrt(np.sum((np.sqrt(p) - np.sqrt(q)) ** 2)) / np.sqrt(2.0))


def align(p: dict, q: dict) -> tuple[np.ndarray, np.ndarray]:
    """Dense vectors for two label->probability maps over their joint support."""
    keys = sorted(set(p) | set(q))
    return np.array([p.get(k, 0.0) for k in keys]), np.array([q.get(k, 0.0) for k in keys])


def distribution_matrix(reports: Sequence[ClusterReport], kind: str = "topics") -> tuple[list[int], np.ndarray]:
    """Pairwise Hellinger distances between cluster topic or author distributions.

    Computed through the Bhattacharyya coefficient ``BC = sum sqrt(p q)``,
    using ``H = sqrt(1 - BC)`` for unit-sum inputs.
    """
    if kind not in ("topics", "authors"):
        raise ParameterError("kind must be 'topics' or 'authors'")
    if len(reports) < 2:
        raise ParameterError("need at least two clusters")
    dists = [r.topic_distribution if kind == "topics" else r.author_distribution for r in reports]
    for r, d in zip(reports, dists):
        if not d:
            raise ValueError(f"cluster {r.cluster} has an empty {kind} distribution")
    index: dict[str, int] = {}
    rows, cols, vals = [], [], []
    for i, d in enumerate(dists):
        for key, p in d.items():
            rows.append(i)
            cols.append(index.setdefault(key, len(index)))
            vals.append(np.sqrt(p))
    S = csr_matrix((vals, (rows, cols)), shape=(len(dists), len(index)))
    bc = (S @ S.T).toarray()
    D = np.sqrt(np.clip(1.0 - bc, 0.0, 1.0))
    D = (D + D.T) / 2
    np.fill_diagonal(D, 0.0)
    return [r.cluster for r in reports], D


@dataclass
class TopicDiversity:
    rows: list[tuple[int, int, int, int]]
    global_subjects: int
    global_categories: int


def topic_diversity(H: TemporalHypergraph, clustering: Clustering) -> TopicDiversity:
    """Per cluster ``(id, size, unique subjects, unique categories)`` plus dataset totals."""
    rows = []
    for c, edges in enumerate(_cluster_edges(clustering)):
        cats = {primary_category(H.labels[e]) for e in edges} - {None}
        rows.append((c, int(edges.shape[0]), len({subject_of(x) for x in cats}), len(cats)))
    cats = {primary_category(x) for x in H.labels} - {None}
    return TopicDiversity(rows, len({subject_of(x) for x in cats}), len(cats))


@dataclass
class SweepRow:
    sigma: float
    lg_edges: int
    components: int
    large_components: int
    seconds: float
    n_clusters: int | None = None
    outlier_fraction: float | None = None


def sigma_sweep(H: TemporalHypergraph, sigmas: Sequence[float], sim: SimilarityKind | str = "jaccard",
                min_cluster_size: int = 10, full: bool = False, threshold: int = 10,
                workers: int | None = None) -> list[SweepRow]:
    """Line-graph size and component counts per sigma; optionally the full clustering too."""
    sigmas = [float(s) for s in sigmas]
    if not sigmas or any(not s > 0 for s in sigmas):
        raise ParameterError("sigmas must be positive")
    if any(b <= a for a, b in zip(sigmas, sigmas[1:])):
        raise ParameterError("sigmas must be sorted ascending without repeats")
    rows = []
    for s in sigmas:
        start = time.perf_counter()
        LG = build_line_graph(H, s, sim, workers=workers)
        comp = connected_components(LG, threshold)
        row = SweepRow(s, LG.n_edges, comp.component_count, comp.large_component_count, 0.0)
        if full:
            C = extract(H, s, sim, min_cluster_size, workers=workers)
            row.n_clusters, row.outlier_fraction = C.n_clusters, C.outlier_fraction
        row.seconds = time.perf_counter() - start
        rows.append(row)
    return rows


def summary(H: TemporalHypergraph, clustering: Clustering, reports=None, projection=None) -> dict:
    """Headline numbers: cluster count, outlier shares, lifetime stats, degree correlation."""
    reports = cluster_stats(H, clustering) if reports is None else reports
    projection = project_to_vertices(H, clustering) if projection is None else projection
    life = np.array([r.lifetime for r in reports])
    try:
        corr = degree_cluster_correlation(projection)
    except UndefinedCorrelationError:
        corr = None
    return {
        "edges": H.n_edges,
        "vertices": H.n_vertices,
        "clusters": clustering.n_clusters,
        "outlier_fraction": _g(clustering.outlier_fraction),
        "unclustered_vertex_fraction": _g(projection.unclustered_fraction),
        "mean_lifetime": _g(life.mean()) if life.size else None,
        "p95_lifetime": _g(np.percentile(life, 95)) if life.size else None,
        "degree_cluster_pearson": _g(corr) if corr is not None else None,
    }


def write_report_json(reports: Sequence[ClusterReport], stream: IO[str]) -> None:
    json.dump([r.to_json() for r in reports], stream, indent=1, ensure_ascii=False)
    stream.write("\n")


def write_projection_tsv(H: TemporalHypergraph, projection: VertexProjection, stream: IO[str]) -> None:
    for v in range(projection.n_vertices):
        cl = projection.clusters[projection.ptr[v]:projection.ptr[v + 1]]
        stream.write(f"{H.vertex_names[v]}\t{','.join(map(str, cl.tolist()))}\n")


def write_sweep_csv(rows: Sequence[SweepRow], stream: IO[str]) -> None:
    stream.write("sigma,lg_edges,components,large_components,seconds\n")
    for r in rows:
        stream.write(f"{r.sigma:.12g},{r.lg_edges},{r.components},{r.large_components},{r.seconds:.12g}\n")


def write_distances_csv(ids: Sequence[int], D: np.ndarray, stream: IO[str]) -> None:
    stream.write("cluster," + ",".join(map(str, ids)) + "\n")
    for c, row in zip(ids, D):
        stream.write(f"{c}," + ",".join(f"{x:.12g}" for x in row) + "\n")

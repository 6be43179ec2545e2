"""Synthetic temporal hypergraphs for recovery tests and benchmarks."""
from __future__ import annotations

import numpy as np

from .hypergraph import TemporalHypergraph


def planted_collaborations(
    n_groups: int = 20,
    group_size: tuple[int, int] = (5, 15),
    papers_per_group: int = 15,
    window: float = 200.0,
    n_noise: int = 500,
    horizon: float = 2555.0,
    n_noise_authors: int = 3000,
    seed: int | None = 0,
) -> tuple[TemporalHypergraph, np.ndarray]:
    """Planted collaborations plus noise papers.

    Each group has its own authors and publishes ``papers_per_group`` papers at
    uniform times inside a ``window``-day span; each paper lists a random
    subset of at least half of the group.  Noise papers draw 1-5 authors
    uniformly from all group authors plus ``n_noise_authors`` others, at
    uniform times over ``horizon``.

    Returns the hypergraph and the planted label per edge (-1 for noise).
    """
    rng = np.random.default_rng(seed)
    edges: list[list[str]] = []
    times: list[float] = []
    truth: list[int] = []
    everyone: list[str] = []
    for g in range(n_groups):
        k = int(rng.integers(group_size[0], group_size[1] + 1))
        authors = [f"g{g}_a{a}" for a in range(k)]
        everyone.extend(authors)
        start = rng.uniform(0.0, horizon - window)
        for _ in range(papers_per_group):
            size = int(rng.integers(max(1, -(-k // 2)), k + 1))
            edges.append(sorted(rng.choice(authors, size=size, replace=False).tolist()))
            times.append(float(start + rng.uniform(0.0, window)))
            truth.append(g)
    everyone.extend(f"x{a}" for a in range(n_noise_authors))
    for _ in range(n_noise):
        size = int(rng.integers(1, 6))
        edges.append(sorted(rng.choice(everyone, size=size, replace=False).tolist()))
        times.append(float(rng.uniform(0.0, horizon)))
        truth.append(-1)
    H = TemporalHypergraph.from_lists(edges, times=times)
    return H, np.asarray(truth)


def power_law_hypergraph(
    n_edges: int,
    n_vertices: int | None = None,
    size_exponent: float = 2.2,
    max_size: int = 3000,
    popularity_exponent: float = 0.75,
    horizon: float = 2555.0,
    seed: int | None = 0,
) -> TemporalHypergraph:
    """Random hypergraph with power-law edge sizes and author popularity.

    Sizes are ``Zipf(size_exponent)`` draws clipped at ``max_size``; member ``k``
    of the popularity ranking is drawn with weight ``(k + 1) ** -popularity_exponent``.
    Times are uniform on ``[0, horizon]``.
    """
    rng = np.random.default_rng(seed)
    if n_vertices is None:
        n_vertices = n_edges
    sizes = np.minimum(rng.zipf(size_exponent, size=n_edges), max_size)
    ptr = np.zeros(n_edges + 1, dtype=np.int64)
    np.cumsum(sizes, out=ptr[1:])
    weights = (np.arange(n_vertices) + 1.0) ** -popularity_exponent
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    members = np.searchsorted(cdf, rng.random(int(ptr[-1])), side="right")
    members = np.minimum(members, n_vertices - 1)
    # shuffle ranks so popular vertices are not the low ids
    members = rng.permutation(n_vertices)[members]
    times = rng.uniform(0.0, horizon, size=n_edges)
    return TemporalHypergraph.from_arrays(ptr, members, times, vertex_names=[f"v{k}" for k in range(n_vertices)])

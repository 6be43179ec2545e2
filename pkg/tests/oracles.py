"""Independent reference implementations used as test oracles.

None of these touch the kernels; they work on Python sets, dicts and
exhaustive enumeration.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter

import numpy as np

from edgeclust.similarity import combined_weight, similarity, time_kernel


def brute_force_line_graph(member_sets, times, sigma, kind):
    """All pairs, reference scalar formulas; returns {(i, j): w} with w > 0."""
    out = {}
    n = len(member_sets)
    for i in range(n):
        for j in range(i + 1, n):
            s = similarity(member_sets[i], member_sets[j], kind)
            t = time_kernel(times[i], times[j], sigma)
            w = combined_weight(s, t)
            if w > 0:
                out[(i, j)] = w
    return out


def brute_force_candidates(member_sets, times, sigma):
    return {
        (i, j)
        for i in range(len(member_sets))
        for j in range(i + 1, len(member_sets))
        if abs(times[i] - times[j]) < sigma and member_sets[i] & member_sets[j]
    }


def _components(n, edges):
    comp = list(range(n))

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            comp[max(ra, rb)] = min(ra, rb)
    return [find(v) for v in range(n)]


def exhaustive_max_forest_weight(n, edges):
    """Maximum total weight over all spanning forests, by enumerating edge subsets.

    ``edges`` is a list of ``(i, j, w)``.  A spanning forest has exactly
    ``n - #components`` acyclic edges.
    """
    k = n - len(set(_components(n, [(a, b) for a, b, _ in edges])))
    best = -math.inf
    for subset in itertools.combinations(edges, k):
        if len(set(_components(n, [(a, b) for a, b, _ in subset]))) == n - k:
            best = max(best, sum(w for _, _, w in subset))
    return best if k else 0.0


def naive_single_linkage(n, dist):
    """Agglomerate by repeatedly merging the two closest clusters.

    ``dist`` is a sparse {(i, j): d}; the distance between two clusters is
    the minimum over connected member pairs, and clusters with no connecting
    pair are never merged.  Every step rescans all pairs, no spanning tree
    involved.  Returns ``(d, frozenset_a, frozenset_b)`` in merge order.
    """
    owner = list(range(n))
    members = {v: frozenset([v]) for v in range(n)}
    merges = []
    while True:
        best = None
        for (i, j), d in dist.items():
            a, b = owner[i], owner[j]
            if a != b and (best is None or d < best[0]):
                best = (d, a, b)
        if best is None:
            return merges
        d, a, b = best
        merges.append((d, members[a], members[b]))
        merged = members.pop(a) | members.pop(b)
        members[a] = merged
        for v in merged:
            owner[v] = a


def partitions_by_level(n, merges):
    """Partition (as a frozenset of frozensets) after all merges at each distinct distance."""
    current = {frozenset([v]) for v in range(n)}
    out = {}
    for d, a, b in merges:
        current.discard(a)
        current.discard(b)
        current.add(a | b)
        out[d] = frozenset(current)
    return out


def exhaustive_antichain(parent, stab, allow_root=False):
    """Selected cluster set maximizing total stability over all antichains.

    Roots (parent -1) are excluded unless ``allow_root``.  Among optimal
    antichains the deepest one wins (largest summed depth), matching the
    "prefer children on ties" rule.
    """
    k = len(parent)
    children = [[] for _ in range(k)]
    for c, p in enumerate(parent):
        if p >= 0:
            children[p].append(c)
    depth = [0] * k
    for c in range(k):
        if parent[c] >= 0:
            depth[c] = depth[parent[c]] + 1

    def antichains(c):
        below = [frozenset()]
        for ch in children[c]:
            below = [a | b for a in below for b in antichains(ch)]
        if allow_root or parent[c] >= 0:
            return below + [frozenset([c])]
        return below

    roots = [c for c in range(k) if parent[c] < 0]
    options = [frozenset()]
    for r in roots:
        options = [a | b for a in options for b in antichains(r)]
    # exact comparison on rationals would be ideal; sums are rounded to 1e-9 of the scale
    scale = max(1.0, max((abs(s) for s in stab), default=1.0))

    def key(sel):
        total = math.fsum(stab[c] for c in sel)
        return (round(total / scale, 9), sum(depth[c] for c in sel) + len(sel))

    return max(options, key=key)


def adjusted_rand_index(truth, pred):
    """ARI from the pair-counting contingency table."""
    truth, pred = list(truth), list(pred)
    n = len(truth)
    pairs = lambda x: x * (x - 1) / 2
    table = Counter(zip(truth, pred))
    a = Counter(truth)
    b = Counter(pred)
    index = sum(pairs(v) for v in table.values())
    sum_a = sum(pairs(v) for v in a.values())
    sum_b = sum(pairs(v) for v in b.values())
    expected = sum_a * sum_b / pairs(n)
    max_index = (sum_a + sum_b) / 2
    if max_index == expected:
        return 1.0
    return (index - expected) / (max_index - expected)


def random_hypergraph(rng, n_edges, n_vertices, max_size=6, t_max=100.0):
    members = []
    for _ in range(n_edges):
        size = int(rng.integers(1, min(max_size, n_vertices) + 1))
        members.append(set(rng.choice(n_vertices, size=size, replace=False).tolist()))
    times = rng.uniform(0, t_max, size=n_edges).tolist()
    return members, times


def random_weighted_graph(rng, n, p=0.3, quantize=None):
    """Random sparse graph; ``quantize`` rounds weights to create ties."""
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                w = float(rng.uniform(0.01, 1.0))
                if quantize:
                    w = max(round(w * quantize) / quantize, 1.0 / quantize)
                edges[(i, j)] = w
    return edges


def np_edges(edges):
    keys = sorted(edges)
    rows = np.array([k[0] for k in keys], dtype=np.int32)
    cols = np.array([k[1] for k in keys], dtype=np.int32)
    w = np.array([edges[k] for k in keys], dtype=np.float64)
    return rows, cols, w


def naive_condense(n, left, right, dist, min_size, join=True, clamp=1e-12):
    """Recursive top-down condensing of a merge list.

    Returns a list of clusters, each a dict with ``parent``, ``birth``,
    ``points`` (all points below it) and ``leave`` ({point: lambda}).
    """
    kids = {n + k: (int(l), int(r), float(d)) for k, (l, r, d) in enumerate(zip(left, right, dist))}
    has_parent = {x for l, r, _ in kids.values() for x in (l, r)}
    roots = sorted((x for x in range(n + len(kids)) if x not in has_parent), reverse=True)
    memo = {}

    def leaves(x):
        if x not in memo:
            memo[x] = frozenset([x]) if x < n else leaves(kids[x][0]) | leaves(kids[x][1])
        return memo[x]

    clusters = []

    def new(parent, birth, pts):
        clusters.append({"parent": parent, "birth": birth, "points": pts, "leave": {}})
        return len(clusters) - 1

    def descend(x, c):
        l, r, d = kids[x]
        lam = 1.0 / max(d, clamp)
        big = [len(leaves(y)) >= min_size for y in (l, r)]
        if all(big):
            for y in (l, r):
                descend(y, new(c, lam, leaves(y)))
        elif not any(big):
            for p in leaves(l) | leaves(r):
                clusters[c]["leave"][p] = lam
        else:
            keep, drop = (l, r) if big[0] else (r, l)
            for p in leaves(drop):
                clusters[c]["leave"][p] = lam
            descend(keep, c)

    large = [x for x in roots if len(leaves(x)) >= min_size]
    if join and large:
        root = new(-1, 0.0, frozenset().union(*(leaves(x) for x in large)))
        if len(large) == 1:
            descend(large[0], root)
        else:
            for x in large:
                descend(x, new(root, 0.0, leaves(x)))
    elif not join:
        for x in large:
            descend(x, new(-1, 0.0, leaves(x)))
    return clusters


def naive_stability(clusters):
    out = []
    for c, cl in enumerate(clusters):
        s = sum(lam - cl["birth"] for lam in cl["leave"].values())
        s += sum(len(ch["points"]) * (ch["birth"] - cl["birth"]) for ch in clusters if ch["parent"] == c)
        out.append(s)
    return out


def naive_extraction(n, left, right, dist, min_size, join=True, allow_root=False):
    """Set of selected point sets, by condense + exhaustive antichain."""
    clusters = naive_condense(n, left, right, dist, min_size, join)
    stab = naive_stability(clusters)
    chosen = exhaustive_antichain([c["parent"] for c in clusters], stab, allow_root)
    return {clusters[c]["points"] for c in chosen}


def label_sets(labels):
    groups = {}
    for p, c in enumerate(labels):
        if c >= 0:
            groups.setdefault(int(c), set()).add(p)
    return {frozenset(g) for g in groups.values()}


def random_condensed(rng, max_clusters=20, max_children=3):
    """Random condensed-tree arrays: parents precede children, births grow downward."""
    k = int(rng.integers(1, max_clusters + 1))
    parent = [-1]
    birth = [0.0]
    for c in range(1, k):
        p = int(rng.integers(0, c))
        if sum(1 for x in parent if x == p) >= max_children:
            p = -1
        parent.append(p)
        birth.append(0.0 if p < 0 else birth[p] + float(rng.uniform(0.05, 2.0)))
    points, lams = [], []
    for c in range(k):
        for _ in range(int(rng.integers(1, 6))):
            points.append(c)
            lams.append(birth[c] + float(rng.uniform(0.0, 3.0)))
    size = [0] * k
    for c in range(k - 1, -1, -1):
        size[c] += points.count(c)
        if parent[c] >= 0:
            size[parent[c]] += size[c]
    return parent, birth, size, points, lams

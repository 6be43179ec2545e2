"""Loop kernels written in the numba-compatible subset of Python.

``_numba`` compiles these with ``njit``; ``_numpy`` calls the plain Python
versions where no vectorized formulation exists.  Helpers are inlined on
purpose: a jitted function cannot call an un-jitted module global.
"""
import numpy as np


def window_pair_counts(n_edges, inc_ptr, inc_edge, inc_time, skip, sigma):
    """Pairs per lower edge id over all vertex windows ``|dt| < sigma``.

    Each vertex list is scanned forward once, so a pair sharing ``k``
    vertices is counted ``k`` times.  Returns CSR offsets of length
    ``n_edges + 1``.
    """
    off = np.zeros(n_edges + 1, np.int64)
    for v in range(inc_ptr.shape[0] - 1):
        if skip[v]:
            continue
        stop = inc_ptr[v + 1]
        for r in range(inc_ptr[v], stop):
            a = inc_edge[r]
            s = r + 1
            while s < stop and inc_time[s] - inc_time[r] < sigma:
                b = inc_edge[s]
                off[min(a, b) + 1] += 1
                s += 1
    for i in range(n_edges):
        off[i + 1] += off[i]
    return off


def window_pair_fill(off, inc_ptr, inc_edge, inc_time, skip, sigma):
    """Bucket the higher edge id of every window pair under its lower id."""
    fill = off[:-1].copy()
    part = np.empty(off[-1], np.int32)
    for v in range(inc_ptr.shape[0] - 1):
        if skip[v]:
            continue
        stop = inc_ptr[v + 1]
        for r in range(inc_ptr[v], stop):
            a = inc_edge[r]
            s = r + 1
            while s < stop and inc_time[s] - inc_time[r] < sigma:
                b = inc_edge[s]
                if a < b:
                    part[fill[a]] = b
                    fill[a] += 1
                else:
                    part[fill[b]] = a
                    fill[b] += 1
                s += 1
    return part


def row_weights(lo, hi, off, part, e_ptr, e_mem, sizes, times, exact, sigma, kind, ra, ro, rq):
    """Weighted edges ``(i, j, w)`` for rows ``lo <= i < hi``, sorted by (i, j).

    Sorts each bucket in place; the multiplicity of ``j`` is ``|M(i) & M(j)|``
    unless vertices were skipped (``exact``), in which case the intersection
    is recounted by merging the sorted member lists.  Dedup and weight
    evaluation are separate passes so the random gathers of the second one
    stay independent of each other.
    """
    cap = off[hi] - off[lo]
    rows = np.empty(cap, np.int32)
    cols = np.empty(cap, np.int32)
    cnt = np.empty(cap, np.int32)
    m = 0
    for i in range(lo, hi):
        a0 = off[i]
        a1 = off[i + 1]
        if a1 - a0 <= 16:
            for a in range(a0 + 1, a1):
                x = part[a]
                b = a - 1
                while b >= a0 and part[b] > x:
                    part[b + 1] = part[b]
                    b -= 1
                part[b + 1] = x
        else:
            part[a0:a1].sort()
        k = a0
        while k < a1:
            j = part[k]
            c = 0
            while k < a1 and part[k] == j:
                c += 1
                k += 1
            rows[m] = i
            cols[m] = j
            cnt[m] = c
            m += 1

    if exact:
        for k in range(m):
            i = rows[k]
            j = cols[k]
            c = 0
            a = e_ptr[i]
            b = e_ptr[j]
            while a < e_ptr[i + 1] and b < e_ptr[j + 1]:
                if e_mem[a] == e_mem[b]:
                    c += 1
                    a += 1
                    b += 1
                elif e_mem[a] < e_mem[b]:
                    a += 1
                else:
                    b += 1
            cnt[k] = c

    wts = np.empty(m, np.float64)
    for k in range(m):
        si = sizes[rows[k]]
        sj = sizes[cols[k]]
        c = cnt[k]
        smin = min(si, sj)
        smax = max(si, sj)
        if kind == 1:
            s = 1.0 if c == smin else 0.0
        elif kind == 2 and smin * ra + ro < smax * rq:
            s = 0.0
        else:
            s = c / (si + sj - c)
        t = 1.0 - abs(times[rows[k]] - times[cols[k]]) / sigma
        if t < 0.0:
            t = 0.0
        wts[k] = np.sqrt(s * t)

    keep = 0
    for k in range(m):
        if wts[k] > 0.0:
            rows[keep] = rows[k]
            cols[keep] = cols[k]
            wts[keep] = wts[k]
            keep += 1
    return rows[:keep].copy(), cols[:keep].copy(), wts[:keep].copy()


def kruskal_mask(rows, cols, n):
    """Mark the edges Kruskal keeps when scanning them in the given order."""
    parent = np.arange(n, dtype=np.int32)
    size = np.ones(n, np.int32)
    keep = np.zeros(rows.shape[0], np.bool_)
    for e in range(rows.shape[0]):
        a = rows[e]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = cols[e]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        keep[e] = True
    return keep


def component_labels(n, rows, cols):
    """Connected-component label per vertex, numbered by smallest member vertex."""
    parent = np.arange(n)
    for e in range(rows.shape[0]):
        a = rows[e]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = cols[e]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a < b:
            parent[b] = a
        elif b < a:
            parent[a] = b
    labels = np.empty(n, np.int64)
    count = 0
    for v in range(n):
        r = v
        while parent[r] != r:
            r = parent[r]
        parent[v] = r
        if r == v:
            labels[v] = count
            count += 1
        else:
            labels[v] = labels[r]
    return labels


def single_linkage_replay(a, b, dist, n):
    """Replay distance-sorted spanning-forest edges as agglomerative merges.

    Returns ``(left, right, size)``; the k-th merge creates node ``n + k`` and
    ``left < right`` are the ids of the two merged nodes.
    """
    m = a.shape[0]
    left = np.empty(m, np.int64)
    right = np.empty(m, np.int64)
    merged = np.empty(m, np.int64)
    parent = np.arange(n)
    node = np.arange(n)
    size = np.ones(n, np.int64)
    for k in range(m):
        x = a[k]
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        y = b[k]
        while parent[y] != y:
            parent[y] = parent[parent[y]]
            y = parent[y]
        nx = node[x]
        ny = node[y]
        left[k] = min(nx, ny)
        right[k] = max(nx, ny)
        merged[k] = size[x] + size[y]
        if size[x] < size[y]:
            x, y = y, x
        parent[y] = x
        size[x] += size[y]
        node[x] = n + k
    return left, right, merged


def condense_forest(left, right, dist, merged, n, min_size, virtual_root, d_clamp):
    """Condense a (possibly multi-rooted) single-linkage hierarchy.

    Clusters are numbered top-down, so every parent id is smaller than its
    children's.  Returns ``(cl_parent, cl_birth, cl_size, pt_cluster, pt_lambda)``;
    ``pt_cluster`` is the cluster a point falls out of (-1: none).

    With ``virtual_root`` all components of at least ``min_size`` points
    hang under cluster 0, joined at lambda = 0.  Otherwise each such component
    is its own root cluster born at lambda = 0.  Smaller components belong to
    no cluster either way.
    """
    m = left.shape[0]
    total = n + m
    has_parent = np.zeros(total, np.bool_)
    for k in range(m):
        has_parent[left[k]] = True
        has_parent[right[k]] = True
    relabel = np.full(total, -1, np.int64)
    # -1: undecided, -2: belongs to no cluster, >= 0: falls out of that cluster
    fall = np.full(total, -1, np.int64)
    fall_lambda = np.zeros(total, np.float64)
    cl_parent = np.empty(n + 1, np.int64)
    cl_birth = np.empty(n + 1, np.float64)
    cl_size = np.empty(n + 1, np.int64)
    nc = 0

    n_big = 0
    big_total = 0
    for node in range(total - 1, -1, -1):
        if not has_parent[node]:
            sz = merged[node - n] if node >= n else 1
            if sz >= min_size:
                n_big += 1
                big_total += sz
    if virtual_root and n_big > 0:
        cl_parent[0] = -1
        cl_birth[0] = 0.0
        cl_size[0] = big_total
        nc = 1
    for node in range(total - 1, -1, -1):
        if has_parent[node]:
            continue
        sz = merged[node - n] if node >= n else 1
        if sz >= min_size:
            if virtual_root and n_big == 1:
                relabel[node] = 0
            else:
                cl_parent[nc] = 0 if virtual_root else -1
                cl_birth[nc] = 0.0
                cl_size[nc] = sz
                relabel[node] = nc
                nc += 1
        else:
            fall[node] = -2

    for k in range(m - 1, -1, -1):
        node = n + k
        l = left[k]
        r = right[k]
        if fall[node] != -1:
            fall[l] = fall[node]
            fall[r] = fall[node]
            fall_lambda[l] = fall_lambda[node]
            fall_lambda[r] = fall_lambda[node]
            continue
        c = relabel[node]
        d = dist[k]
        if d < d_clamp:
            d = d_clamp
        lam = 1.0 / d
        sl = merged[l - n] if l >= n else 1
        sr = merged[r - n] if r >= n else 1
        if sl >= min_size and sr >= min_size:
            cl_parent[nc] = c
            cl_birth[nc] = lam
            cl_size[nc] = sl
            relabel[l] = nc
            nc += 1
            cl_parent[nc] = c
            cl_birth[nc] = lam
            cl_size[nc] = sr
            relabel[r] = nc
            nc += 1
        elif sl < min_size and sr < min_size:
            fall[l] = c
            fall[r] = c
            fall_lambda[l] = lam
            fall_lambda[r] = lam
        elif sl >= min_size:
            relabel[l] = c
            fall[r] = c
            fall_lambda[r] = lam
        else:
            relabel[r] = c
            fall[l] = c
            fall_lambda[l] = lam

    pt_cluster = np.empty(n, np.int64)
    pt_lambda = np.empty(n, np.float64)
    for p in range(n):
        pt_cluster[p] = fall[p] if fall[p] >= 0 else -1
        pt_lambda[p] = fall_lambda[p]
    return cl_parent[:nc].copy(), cl_birth[:nc].copy(), cl_size[:nc].copy(), pt_cluster, pt_lambda

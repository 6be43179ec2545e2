"""Pure numpy/scipy kernels; used when numba is disabled or unavailable.

Pair generation and the spanning forest are vectorized.  Single-linkage
replay and condensing are inherently sequential and run as plain Python.
"""
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _loops
from ._order import descending_order

NAME = "numpy"

single_linkage_replay = _loops.single_linkage_replay
condense_forest = _loops.condense_forest


def line_graph(e_ptr, e_mem, sizes, times, inc_ptr, inc_edge, inc_time,
               skip, exact, sigma, kind, ra, ro, rq, workers=1):
    n = sizes.shape[0]
    n_vertices = inc_ptr.shape[0] - 1
    ent_v = np.repeat(np.arange(n_vertices, dtype=np.int64), np.diff(inc_ptr))
    use = ~skip[ent_v]
    ev, ee, et = ent_v[use], inc_edge[use].astype(np.int64), inc_time[use]

    # entry p pairs with p + k while both sit in one vertex list within sigma;
    # once p + k fails, every later offset fails too
    keys = []
    active = np.arange(max(ev.shape[0] - 1, 0), dtype=np.int64)
    k = 1
    while active.size:
        active = active[active + k < ev.shape[0]]
        partner = active + k
        ok = (ev[partner] == ev[active]) & (et[partner] - et[active] < sigma)
        active, partner = active[ok], partner[ok]
        a, b = ee[active], ee[partner]
        keys.append(np.minimum(a, b) * n + np.maximum(a, b))
        k += 1
    keys = np.concatenate(keys) if keys else np.zeros(0, np.int64)
    uniq, inter = np.unique(keys, return_counts=True)
    i, j = uniq // n, uniq % n
    if exact:
        inter = _intersections(e_ptr, e_mem, n, i, j)

    si, sj = sizes[i], sizes[j]
    lo, hi = np.minimum(si, sj), np.maximum(si, sj)
    if kind == 1:
        s = (inter == lo).astype(np.float64)
    else:
        s = inter / (si + sj - inter)
        if kind == 2:
            s = np.where(lo * ra + ro < hi * rq, 0.0, s)
    t = np.maximum(1.0 - np.abs(times[i] - times[j]) / sigma, 0.0)
    w = np.sqrt(s * t)
    keep = w > 0.0
    return i[keep].astype(np.int32), j[keep].astype(np.int32), w[keep]


def _intersections(e_ptr, e_mem, n, i, j, chunk=1 << 20):
    if e_mem.shape[0] == 0 or i.shape[0] == 0:
        return np.zeros(i.shape[0], np.int64)
    A = csr_matrix((np.ones(e_mem.shape[0], np.int64), e_mem, e_ptr), shape=(n, int(e_mem.max()) + 1))
    out = np.empty(i.shape[0], np.int64)
    for s in range(0, i.shape[0], chunk):
        sl = slice(s, s + chunk)
        out[sl] = np.asarray(A[i[sl]].multiply(A[j[sl]]).sum(axis=1)).ravel()
    return out


def spanning_forest(rows, cols, w, n):
    """Boruvka over the strict order (-w, i, j); this order makes the
    maximum spanning forest unique, so the result equals Kruskal's."""
    m = w.shape[0]
    order = descending_order(w)
    rank = np.empty(m, np.int64)
    rank[order] = np.arange(m)
    rows = rows.astype(np.int64)
    cols = cols.astype(np.int64)
    comp = np.arange(n)
    keep = np.zeros(m, bool)
    alive = np.arange(m)
    while True:
        ca, cb = comp[rows[alive]], comp[cols[alive]]
        cross = ca != cb
        alive, ca, cb = alive[cross], ca[cross], cb[cross]
        if alive.size == 0:
            break
        best = np.full(n, m, np.int64)
        r = rank[alive]
        np.minimum.at(best, ca, r)
        np.minimum.at(best, cb, r)
        chosen = order[np.unique(best[best < m])]
        keep[chosen] = True
        g = csr_matrix((np.ones(chosen.shape[0]), (comp[rows[chosen]], comp[cols[chosen]])), shape=(n, n))
        _, lab = connected_components(g, directed=False)
        comp = lab[comp]
    return keep


def component_labels(n, rows, cols):
    g = csr_matrix((np.ones(rows.shape[0]), (rows, cols)), shape=(n, n))
    _, lab = connected_components(g, directed=False)
    _, first = np.unique(lab, return_index=True)
    remap = np.empty(first.shape[0], np.int64)
    remap[np.argsort(first)] = np.arange(first.shape[0])
    return remap[lab]

"""numba-compiled kernels."""
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit

from . import _loops
from ._order import descending_order

NAME = "numba"

_jit = njit(cache=True, nogil=True)

window_pair_counts = _jit(_loops.window_pair_counts)
window_pair_fill = _jit(_loops.window_pair_fill)
row_weights = _jit(_loops.row_weights)
kruskal_mask = _jit(_loops.kruskal_mask)
component_labels = _jit(_loops.component_labels)
single_linkage_replay = _jit(_loops.single_linkage_replay)
condense_forest = _jit(_loops.condense_forest)


def line_graph(e_ptr, e_mem, sizes, times, inc_ptr, inc_edge, inc_time,
               skip, exact, sigma, kind, ra, ro, rq, workers=1):
    n = sizes.shape[0]
    off = window_pair_counts(n, inc_ptr, inc_edge, inc_time, skip, sigma)
    part = window_pair_fill(off, inc_ptr, inc_edge, inc_time, skip, sigma)
    # row blocks of roughly equal pair counts
    n_blocks = max(1, min(n, 4 * workers))
    cuts = np.searchsorted(off, np.linspace(0, off[-1], n_blocks + 1)[1:-1])
    bounds = list(zip([0, *cuts.tolist()], [*cuts.tolist(), n]))
    bounds = [b for b in bounds if b[1] > b[0]]

    def run(b):
        return row_weights(b[0], b[1], off, part, e_ptr, e_mem, sizes, times, exact, sigma, kind, ra, ro, rq)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    if not parts:
        return np.zeros(0, np.int32), np.zeros(0, np.int32), np.zeros(0, np.float64)
    return tuple(np.concatenate(x) for x in zip(*parts))


def spanning_forest(rows, cols, w, n):
    order = descending_order(w)
    keep = np.zeros(w.shape[0], np.bool_)
    keep[order[kruskal_mask(rows[order], cols[order], n)]] = True
    return keep

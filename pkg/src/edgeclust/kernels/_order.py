"""Edge order shared by both backends."""
import numpy as np


def descending_order(w: np.ndarray) -> np.ndarray:
    """Indices sorting ``w`` descending, ties in ascending index order.

    Same result as ``argsort(-w, kind="stable")``; a quicksort followed by
    repairing the (usually few) runs of equal weights is much faster.
    """
    order = np.argsort(-w)
    ws = w[order]
    tie = ws[1:] == ws[:-1]
    if tie.any():
        in_run = np.zeros(order.shape[0], bool)
        in_run[1:] |= tie
        in_run[:-1] |= tie
        pos = np.flatnonzero(in_run)
        sub = order[pos]
        order[pos] = sub[np.lexsort((sub, -ws[pos]))]
    return order

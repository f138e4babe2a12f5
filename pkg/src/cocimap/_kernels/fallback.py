"""Pure NumPy/Python fallback for the compiled kernels.

Selected at import time when the extension is unavailable; results are
identical to the compiled path (callers sort the emitted keys, so emission
order is free to differ).
"""

from __future__ import annotations

import numpy as np


def emit_pair_keys(indptr, units, n_units, out):
    """Fill ``out`` with one int64 key (u * n_units + v, u < v) per co-cited pair.

    ``units`` holds the sorted distinct unit indices of each citing entry,
    segmented by ``indptr``.  Vectorized by bucketing entries of equal size.
    Returns the number of keys written.
    """
    indptr = np.asarray(indptr, dtype=np.int64)
    units = np.asarray(units)
    sizes = np.diff(indptr)
    pos = 0
    for m in np.unique(sizes):
        m = int(m)
        if m < 2:
            continue
        starts = indptr[:-1][sizes == m]
        rows = units[starts[:, None] + np.arange(m)]
        iu, ju = np.triu_indices(m, 1)
        keys = rows[:, iu].astype(np.int64) * int(n_units) + rows[:, ju]
        out[pos:pos + keys.size] = keys.ravel()
        pos += keys.size
    return pos


def pfnet_retain(eu, ev, tier_starts, n_nodes):
    """Minimax-path edge retention over edges pre-sorted by ascending distance.

    ``tier_starts`` marks the first index of each equal-distance tier and
    ends with the edge count.  An edge survives iff its endpoints are in
    different union-find components before its tier is merged, which keeps
    exactly the edges on some minimum spanning tree of their component.
    Returns a bool mask aligned with the sorted edge order.
    """
    eu_l = np.asarray(eu).tolist()
    ev_l = np.asarray(ev).tolist()
    parent = list(range(int(n_nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    m = len(eu_l)
    retained = np.zeros(m, dtype=bool)
    starts = np.asarray(tier_starts, dtype=np.int64).tolist()
    for t in range(len(starts) - 1):
        lo, hi = starts[t], starts[t + 1]
        for k in range(lo, hi):
            if find(eu_l[k]) != find(ev_l[k]):
                retained[k] = True
        for k in range(lo, hi):
            if retained[k]:
                ru, rv = find(eu_l[k]), find(ev_l[k])
                if ru != rv:
                    parent[ru] = rv
    return retained

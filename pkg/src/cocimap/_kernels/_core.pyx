# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the two hot loops: co-citation pair emission and
PFNET union-find retention.  Semantics match ``fallback`` exactly."""

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint8_t


def emit_pair_keys(const int64_t[::1] indptr, const int32_t[::1] units,
                   int64_t n_units, int64_t[::1] out):
    """Fill ``out`` with one int64 key (u * n_units + v, u < v) per co-cited pair.

    ``units`` holds the sorted distinct unit indices of each citing entry,
    segmented by ``indptr``.  Returns the number of keys written.
    """
    cdef Py_ssize_t n_entries = indptr.shape[0] - 1
    cdef Py_ssize_t e, i, j, lo, hi
    cdef Py_ssize_t pos = 0
    cdef int64_t base
    with nogil:
        for e in range(n_entries):
            lo = indptr[e]
            hi = indptr[e + 1]
            for i in range(lo, hi):
                base = (<int64_t> units[i]) * n_units
                for j in range(i + 1, hi):
                    out[pos] = base + units[j]
                    pos += 1
    return pos


cdef inline Py_ssize_t _find(int32_t[::1] parent, Py_ssize_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def pfnet_retain(const int32_t[::1] eu, const int32_t[::1] ev,
                 const int64_t[::1] tier_starts, Py_ssize_t n_nodes):
    """Minimax-path edge retention over edges pre-sorted by ascending distance.

    ``tier_starts`` marks the first index of each equal-distance tier and
    ends with the edge count.  Returns a bool mask aligned with the sorted
    edge order.
    """
    parent_arr = np.arange(n_nodes, dtype=np.int32)
    rank_arr = np.zeros(n_nodes, dtype=np.int8)
    retained_arr = np.zeros(eu.shape[0], dtype=np.uint8)
    cdef int32_t[::1] parent = parent_arr
    cdef signed char[::1] rank = rank_arr
    cdef uint8_t[::1] retained = retained_arr
    cdef Py_ssize_t n_tiers = tier_starts.shape[0] - 1
    cdef Py_ssize_t t, k, lo, hi, ru, rv
    with nogil:
        for t in range(n_tiers):
            lo = tier_starts[t]
            hi = tier_starts[t + 1]
            for k in range(lo, hi):
                ru = _find(parent, eu[k])
                rv = _find(parent, ev[k])
                if ru != rv:
                    retained[k] = 1
            for k in range(lo, hi):
                if retained[k]:
                    ru = _find(parent, eu[k])
                    rv = _find(parent, ev[k])
                    if ru != rv:
                        if rank[ru] < rank[rv]:
                            parent[ru] = rv
                        elif rank[ru] > rank[rv]:
                            parent[rv] = ru
                        else:
                            parent[rv] = ru
                            rank[ru] += 1
    return retained_arr.view(bool)

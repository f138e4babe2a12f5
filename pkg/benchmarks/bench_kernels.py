"""Benchmark the compiled kernels against the pure NumPy/Python fallback.

Times the two hot paths (co-citation pair emission and PFNET union-find
retention) on synthetic corpora of increasing size, checking on the way
that both backends produce identical graphs.

Usage:
    python benchmarks/bench_kernels.py [--references 1000000] [--journals 10000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cocimap import _kernels
from cocimap.cocitation import _accumulate_set_mode, _entry_unit_csr
from cocimap.pathfinder import _tier_starts
from cocimap.synthdata import generate_linked_corpus


def _build_inputs(n_references, n_journals, seed=7):
    corpus = generate_linked_corpus(seed=seed, n_references=n_references,
                                    n_journals=n_journals)
    unit_ids, eptr, units = _entry_unit_csr(corpus, "journal")
    return corpus, unit_ids, eptr, units


def bench_pairs(eptr, units, n_units, backend):
    kernels = _kernels.get_kernels(backend)
    start = time.perf_counter()
    keys, weights = _accumulate_set_mode(eptr, units, n_units, kernels)
    return time.perf_counter() - start, keys, weights


def bench_pfnet(keys, weights, n_units, backend):
    kernels = _kernels.get_kernels(backend)
    eu = (keys // n_units).astype(np.int32)
    ev = (keys % n_units).astype(np.int32)
    sort_keys = -weights
    start = time.perf_counter()
    order = np.lexsort((ev, eu, sort_keys))
    tiers = _tier_starts(sort_keys, order)
    retained = kernels.pfnet_retain(eu[order], ev[order], tiers, n_units)
    elapsed = time.perf_counter() - start
    return elapsed, int(np.asarray(retained).sum())


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--references", type=int, default=1_000_000)
    parser.add_argument("--journals", type=int, default=10_000)
    args = parser.parse_args()

    backends = ["python"]
    try:
        _kernels.get_kernels("compiled")
        backends.insert(0, "compiled")
    except ImportError:
        print("compiled kernels unavailable; timing the fallback only")

    sizes = [args.references // 100, args.references // 10, args.references]
    print(f"active backend at import: {_kernels.BACKEND}")
    print(f"{'references':>12} {'backend':>9} {'pairs [s]':>10} "
          f"{'pfnet [s]':>10} {'edges':>10} {'retained':>9}")
    for n_refs in sizes:
        _, unit_ids, eptr, units = _build_inputs(n_refs, args.journals)
        n_units = len(unit_ids)
        reference = None
        for backend in backends:
            t_pairs, keys, weights = bench_pairs(eptr, units, n_units, backend)
            t_pfnet, retained = bench_pfnet(keys, weights, n_units, backend)
            if reference is None:
                reference = (keys, weights, retained)
            else:
                assert np.array_equal(reference[0], keys)
                assert np.array_equal(reference[1], weights)
                assert reference[2] == retained
            print(f"{n_refs:>12} {backend:>9} {t_pairs:>10.3f} "
                  f"{t_pfnet:>10.3f} {len(keys):>10} {retained:>9}")


if __name__ == "__main__":
    main()

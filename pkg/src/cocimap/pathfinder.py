"""Pathfinder sparsification at (r = infinity, q = n - 1).

An edge survives iff no alternative path connects its endpoints with a
strictly smaller maximum edge distance.  With ties preserved this is the
union of all minimum spanning trees per component, computed here by
processing equal-distance tiers in ascending order over a union-find: a
tier edge is kept iff its endpoints lie in different components before the
tier is merged (O(E log E)).

Distances are the inverse co-citation weights.  The minimax criterion does
no arithmetic on them (only comparisons), so tie detection is exact: for
integer weights the tier order is decided on the integers themselves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .cocitation import CoCitationGraph
from .errors import OracleTooLarge

R_PARAMETER = float("inf")

ORACLE_DEFAULT_BOUND = 200


@dataclass
class DistanceGraph:
    """Co-citation graph re-expressed as distances d = 1/w.

    ``weights`` keeps the original integer weights when the graph came from
    a co-citation build (None for synthetic distance inputs); tier grouping
    then compares integers rather than floats.
    """

    source: CoCitationGraph
    distances: np.ndarray
    weights: np.ndarray | None

    @property
    def n_nodes(self) -> int:
        return self.source.n_nodes

    @property
    def n_edges(self) -> int:
        return len(self.distances)

    @property
    def edge_u(self) -> np.ndarray:
        return self.source.edge_u

    @property
    def edge_v(self) -> np.ndarray:
        return self.source.edge_v

    @classmethod
    def from_distances(cls, edges, node_ids=None) -> "DistanceGraph":
        """Synthetic constructor from (a_id, b_id, distance) triples."""
        graph = CoCitationGraph.from_edges(
            [(a, b, 1) for a, b, _ in edges], node_ids=node_ids)
        dist = {tuple(sorted((str(a), str(b)))): float(d) for a, b, d in edges}
        distances = np.array(
            [dist[tuple(sorted((graph.node_ids[u], graph.node_ids[v])))]
             for u, v in zip(graph.edge_u, graph.edge_v)], dtype=np.float64)
        if np.any(distances <= 0):
            raise ValueError("distances must be positive")
        return cls(source=graph, distances=distances, weights=None)


def to_distance(graph: CoCitationGraph) -> DistanceGraph:
    """Distance view of a co-citation graph: d_ij = 1 / w_ij exactly."""
    if np.any(graph.edge_w < 1):
        raise ValueError("co-citation weights must be >= 1")
    return DistanceGraph(
        source=graph,
        distances=1.0 / graph.edge_w.astype(np.float64),
        weights=graph.edge_w,
    )


@dataclass
class PFNetwork:
    """Pathfinder network: the retained subset of a distance graph's edges."""

    dgraph: DistanceGraph
    retained: np.ndarray  # bool mask aligned with the source edge order
    r: float = R_PARAMETER

    @property
    def q(self) -> int:
        return max(self.dgraph.n_nodes - 1, 0)

    @property
    def n_retained(self) -> int:
        return int(self.retained.sum())

    def retained_edges(self):
        """(u, v, weight, distance) arrays of the surviving edges."""
        m = self.retained
        src = self.dgraph.source
        w = src.edge_w[m] if self.dgraph.weights is not None else None
        return src.edge_u[m], src.edge_v[m], w, self.dgraph.distances[m]

    def edge_key_set(self) -> set:
        src = self.dgraph.source
        return {(src.node_ids[u], src.node_ids[v])
                for u, v in zip(src.edge_u[self.retained],
                                src.edge_v[self.retained])}

    def to_graph(self) -> CoCitationGraph:
        """Retained edges as a graph (all nodes kept, kind='pfnet')."""
        g = self.dgraph.source.edge_subset(self.retained)
        g.kind = "pfnet"
        return g


def _tier_starts(sort_keys: np.ndarray, order: np.ndarray) -> np.ndarray:
    sorted_keys = sort_keys[order]
    if sorted_keys.size == 0:
        return np.zeros(1, dtype=np.int64)
    bounds = np.flatnonzero(np.diff(sorted_keys)) + 1
    return np.concatenate(([0], bounds, [sorted_keys.size])).astype(np.int64)


def pfnet_sparsify(dgraph: DistanceGraph) -> PFNetwork:
    """Sparsify under the (r = inf, q = n - 1) criterion, ties preserved.

    Disconnected inputs pass through per component untouched; tree inputs
    are the identity.
    """
    if dgraph.weights is not None:
        sort_keys = -dgraph.weights.astype(np.int64)  # ascending distance
    else:
        sort_keys = dgraph.distances
    if not np.all(np.isfinite(dgraph.distances)) or np.any(dgraph.distances <= 0):
        raise ValueError("distances must be finite and positive")
    order = np.lexsort((dgraph.edge_v, dgraph.edge_u, sort_keys))
    tiers = _tier_starts(sort_keys, order)
    kernels = _kernels.get_kernels()
    retained_sorted = kernels.pfnet_retain(
        dgraph.edge_u[order], dgraph.edge_v[order], tiers, dgraph.n_nodes)
    retained = np.zeros(dgraph.n_edges, dtype=bool)
    retained[order] = retained_sorted
    return PFNetwork(dgraph=dgraph, retained=retained)


def pfnet_oracle(dgraph: DistanceGraph, bound: int = ORACLE_DEFAULT_BOUND) -> PFNetwork:
    """Definitionally correct sparsification by minimax closure (O(n^3)).

    Computes all-pairs minimax path distances m_ij = min over k of
    max(m_ik, m_kj) to fixpoint and retains a direct edge iff no path
    strictly beats it.  Comparisons select among existing distance values,
    so the closure is exact; with integer weights it runs as a maximin
    closure on the weights themselves.
    """
    n = dgraph.n_nodes
    if n > bound:
        raise OracleTooLarge(f"oracle bound {bound} exceeded (n={n})")
    eu, ev = dgraph.edge_u, dgraph.edge_v
    if dgraph.weights is not None:
        # maximin on integer weights: higher weight == smaller distance
        m = np.zeros((n, n), dtype=np.int64)
        m[eu, ev] = dgraph.weights
        m[ev, eu] = dgraph.weights
        np.fill_diagonal(m, np.iinfo(np.int64).max)
        better = np.maximum
        combine = np.minimum
        direct = dgraph.weights
    else:
        m = np.full((n, n), np.inf)
        m[eu, ev] = dgraph.distances
        m[ev, eu] = dgraph.distances
        np.fill_diagonal(m, 0.0)
        better = np.minimum
        combine = np.maximum
        direct = dgraph.distances
    while True:
        prev = m.copy()
        for k in range(n):
            m = better(m, combine(m[:, k, None], m[None, k, :]))
        if np.array_equal(m, prev):
            break
    retained = m[eu, ev] == direct
    return PFNetwork(dgraph=dgraph, retained=np.asarray(retained, dtype=bool))

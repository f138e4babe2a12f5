"""Pathfinder sparsification against the exact minimax oracle."""

import numpy as np
import pytest

from cocimap.cocitation import CoCitationGraph
from cocimap.errors import OracleTooLarge
from cocimap.pathfinder import (
    DistanceGraph,
    pfnet_oracle,
    pfnet_sparsify,
    to_distance,
)

from oracles import random_graph, scipy_mst_edges


def _graph(edges, node_ids=None):
    return CoCitationGraph.from_edges(edges, node_ids=node_ids)


class TestToDistance:
    def test_inverse_weights(self):
        dg = to_distance(_graph([("A", "B", 1), ("B", "C", 4)]))
        by_pair = {(int(u), int(v)): d for u, v, d in
                   zip(dg.edge_u, dg.edge_v, dg.distances)}
        weights = {(int(u), int(v)): int(w) for u, v, w in
                   zip(dg.source.edge_u, dg.source.edge_v, dg.source.edge_w)}
        for pair, d in by_pair.items():
            assert d == 1.0 / weights[pair]

    def test_monotone(self):
        dg = to_distance(_graph([("A", "B", 2), ("A", "C", 1)]))
        d = {tuple(sorted((dg.source.node_ids[u], dg.source.node_ids[v]))): dist
             for u, v, dist in zip(dg.edge_u, dg.edge_v, dg.distances)}
        assert d[("A", "B")] < d[("A", "C")]

    def test_rejects_zero_weight(self):
        g = _graph([("A", "B", 1)])
        g.edge_w[0] = 0
        with pytest.raises(ValueError):
            to_distance(g)


class TestSparsifyFixtures:
    def test_triangle_weak_edge_pruned(self):
        # d(AB)=d(BC)=0.2, d(AC)=0.5; path A-B-C maxes at 0.2 < 0.5
        pfn = pfnet_sparsify(to_distance(
            _graph([("A", "B", 5), ("B", "C", 5), ("A", "C", 2)])))
        assert pfn.edge_key_set() == {("A", "B"), ("B", "C")}

    def test_equal_triangle_fully_retained(self):
        pfn = pfnet_sparsify(to_distance(
            _graph([("A", "B", 3), ("B", "C", 3), ("A", "C", 3)])))
        assert pfn.n_retained == 3

    def test_tree_identity(self):
        pfn = pfnet_sparsify(to_distance(
            _graph([("A", "B", 1), ("B", "C", 7), ("B", "D", 2)])))
        assert pfn.n_retained == 3

    def test_four_cycle_distances(self):
        dg = DistanceGraph.from_distances(
            [("A", "B", 1.0), ("B", "C", 1.0), ("C", "D", 1.0),
             ("A", "D", 3.0)])
        pfn = pfnet_sparsify(dg)
        assert pfn.edge_key_set() == {("A", "B"), ("B", "C"), ("C", "D")}

    def test_single_edge(self):
        pfn = pfnet_sparsify(to_distance(_graph([("A", "B", 1)])))
        assert pfn.n_retained == 1

    def test_disconnected_components_untouched(self):
        pfn = pfnet_sparsify(to_distance(_graph(
            [("A", "B", 2), ("X", "Y", 1), ("Y", "Z", 1), ("X", "Z", 1)],
            node_ids=["A", "B", "X", "Y", "Z", "ISOLATED"])))
        assert pfn.n_retained == 4


class TestOracle:
    def test_same_fixtures_as_sparsify(self):
        for edges in (
            [("A", "B", 5), ("B", "C", 5), ("A", "C", 2)],
            [("A", "B", 3), ("B", "C", 3), ("A", "C", 3)],
            [("A", "B", 1), ("B", "C", 7), ("B", "D", 2)],
        ):
            dg = to_distance(_graph(edges))
            assert (pfnet_oracle(dg).edge_key_set()
                    == pfnet_sparsify(dg).edge_key_set())

    def test_four_cycle(self):
        dg = DistanceGraph.from_distances(
            [("A", "B", 1.0), ("B", "C", 1.0), ("C", "D", 1.0),
             ("A", "D", 3.0)])
        assert pfnet_oracle(dg).edge_key_set() == {("A", "B"), ("B", "C"),
                                                   ("C", "D")}

    def test_bound_enforced(self):
        g = _graph([(f"n{i}", f"n{i+1}", 1) for i in range(10)])
        with pytest.raises(OracleTooLarge):
            pfnet_oracle(to_distance(g), bound=5)


class TestProperties:
    def test_oracle_equivalence_random(self):
        rng = np.random.default_rng(2024)
        for _ in range(120):
            g = random_graph(rng, n_max=25, weights=(1, 10))
            if g.n_edges == 0:
                continue
            dg = to_distance(g)
            assert (pfnet_sparsify(dg).edge_key_set()
                    == pfnet_oracle(dg).edge_key_set())

    def test_unique_mst_when_distinct(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            g = random_graph(rng, n_max=20, ensure_connected=True,
                             distinct_weights=True)
            pfn = pfnet_sparsify(to_distance(g))
            assert pfn.n_retained == g.n_nodes - 1
            assert pfn.edge_key_set() == scipy_mst_edges(g)

    def test_mst_containment_with_ties(self):
        rng = np.random.default_rng(99)
        for _ in range(30):
            g = random_graph(rng, n_max=20, weights=(1, 4),
                             ensure_connected=True)
            retained = pfnet_sparsify(to_distance(g)).edge_key_set()
            assert scipy_mst_edges(g) <= retained

    def test_connectivity_preserved(self):
        from scipy.sparse import csr_matrix
        from scipy.sparse.csgraph import connected_components
        rng = np.random.default_rng(5)
        for _ in range(30):
            g = random_graph(rng, n_max=20)
            pfn = pfnet_sparsify(to_distance(g))
            sub = pfn.to_graph()

            def labels(graph):
                mat = csr_matrix((np.ones(graph.n_edges),
                                  (graph.edge_u, graph.edge_v)),
                                 shape=(graph.n_nodes, graph.n_nodes))
                return connected_components(mat, directed=False)[1]

            la, lb = labels(g), labels(sub)
            # identical partitions up to relabeling
            assert len({(a, b) for a, b in zip(la, lb)}) == len(set(la)) \
                == len(set(lb))

    def test_scale_invariance_of_distances(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            g = random_graph(rng, n_max=15)
            if g.n_edges == 0:
                continue
            base = [(g.node_ids[u], g.node_ids[v], 1.0 / w)
                    for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w)]
            for c in (0.5, 3.0, 17.0):
                scaled = DistanceGraph.from_distances(
                    [(a, b, c * d) for a, b, d in base], node_ids=g.node_ids)
                plain = DistanceGraph.from_distances(base, node_ids=g.node_ids)
                assert (pfnet_sparsify(scaled).edge_key_set()
                        == pfnet_sparsify(plain).edge_key_set())

    def test_edge_count_at_least_spanning(self):
        rng = np.random.default_rng(44)
        for _ in range(20):
            g = random_graph(rng, n_max=15, ensure_connected=True)
            pfn = pfnet_sparsify(to_distance(g))
            assert pfn.n_retained >= g.n_nodes - 1

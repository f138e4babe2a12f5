"""Centralities against exhaustive enumeration and dense eigen references."""

import numpy as np
import pytest

from cocimap.cocitation import CoCitationGraph
from cocimap.errors import EmptyInput
from cocimap.netmetrics import centralities, weighted_degree
from cocimap.pathfinder import pfnet_sparsify, to_distance

from oracles import oracle_betweenness_closeness, oracle_eigenvector, random_graph

DYADIC = (1, 2, 4, 8, 16)


def _graph(edges, node_ids=None):
    return CoCitationGraph.from_edges(edges, node_ids=node_ids)


def _dyadic_graph(rng, n_max=15):
    """Random graph whose 1/w distances are exact dyadic floats, so
    equal-cost paths are detected without rounding ambiguity."""
    g = random_graph(rng, n_max=n_max, weights=(1, 5))
    g.edge_w = np.array([DYADIC[w % len(DYADIC)] for w in g.edge_w],
                        dtype=np.int64)
    return g


class TestWeightedDegree:
    def test_triangle(self):
        g = _graph([("A", "B", 2), ("B", "C", 2), ("A", "C", 2)])
        assert weighted_degree(g).tolist() == [4, 4, 4]

    def test_isolated_zero(self):
        g = _graph([("A", "B", 3)], node_ids=["A", "B", "Z"])
        deg = dict(zip(g.node_ids, weighted_degree(g).tolist()))
        assert deg == {"A": 3, "B": 3, "Z": 0}

    def test_random_fixture_hand_summed(self):
        edges = [("A", "B", 5), ("A", "C", 2), ("B", "D", 7), ("C", "D", 1),
                 ("D", "E", 4)]
        g = _graph(edges)
        expected = {"A": 7, "B": 12, "C": 3, "D": 12, "E": 4}
        assert dict(zip(g.node_ids, weighted_degree(g).tolist())) == expected


class TestCentralitiesFixtures:
    def test_path_unweighted(self):
        g = _graph([("A", "B", 1), ("B", "C", 1)])
        rep = centralities(g, use_distances=False)
        by = dict(zip(rep.node_ids, rep.betweenness))
        assert by == {"A": 0.0, "B": 1.0, "C": 0.0}
        close = dict(zip(rep.node_ids, rep.closeness))
        assert close["B"] == pytest.approx(1.0)
        assert close["A"] == pytest.approx(2 / 3)

    def test_star_eigenvector(self):
        g = _graph([("HUB", "L1", 1), ("HUB", "L2", 1), ("HUB", "L3", 1)])
        rep = centralities(g, use_distances=False)
        eig = dict(zip(rep.node_ids, rep.eigenvector))
        assert eig["HUB"] == pytest.approx(1.0)
        leaves = [eig["L1"], eig["L2"], eig["L3"]]
        assert max(leaves) < 1.0
        assert max(leaves) - min(leaves) < 1e-9

    def test_degree_one_tree_nodes_zero_betweenness(self):
        g = _graph([("R", "A", 1), ("R", "B", 1), ("A", "C", 1)])
        rep = centralities(g, use_distances=False)
        by = dict(zip(rep.node_ids, rep.betweenness))
        assert by["B"] == 0.0 and by["C"] == 0.0

    def test_singleton_component_closeness_zero(self):
        g = _graph([("A", "B", 1)], node_ids=["A", "B", "Z"])
        rep = centralities(g, use_distances=False)
        assert dict(zip(rep.node_ids, rep.closeness))["Z"] == 0.0

    def test_empty_graph_rejected(self):
        g = CoCitationGraph.from_edges([], node_ids=[])
        with pytest.raises(EmptyInput):
            centralities(g)

    def test_weighted_changes_paths(self):
        # hop-count route A-C direct; distance route goes around via B
        g = _graph([("A", "C", 1), ("A", "B", 10), ("B", "C", 10)])
        hop = centralities(g, use_distances=False)
        wtd = centralities(g, use_distances=True)
        hop_b = dict(zip(hop.node_ids, hop.betweenness))["B"]
        wtd_b = dict(zip(wtd.node_ids, wtd.betweenness))["B"]
        assert hop_b == 0.0 and wtd_b == 1.0

    def test_harmonic_closeness_variant(self):
        g = _graph([("A", "B", 1), ("B", "C", 1)], node_ids=["A", "B", "C", "Z"])
        rep = centralities(g, use_distances=False,
                           closeness_variant="harmonic")
        close = dict(zip(rep.node_ids, rep.closeness))
        assert close["B"] == pytest.approx(2.0)        # 1/1 + 1/1
        assert close["A"] == pytest.approx(1.5)        # 1/1 + 1/2
        assert close["Z"] == 0.0
        assert "harmonic" in rep.flags["closeness"]

    def test_default_mode_follows_graph_kind(self):
        g = _graph([("A", "B", 2), ("B", "C", 2), ("A", "C", 1)])
        raw = centralities(g)
        assert raw.flags["weighted"] is False
        pfn_graph = pfnet_sparsify(to_distance(g)).to_graph()
        pruned = centralities(pfn_graph)
        assert pruned.flags["weighted"] is True


class TestCentralitiesOracles:
    @pytest.mark.parametrize("use_distances", [False, True])
    def test_betweenness_closeness_random(self, use_distances):
        rng = np.random.default_rng(101 if use_distances else 202)
        for _ in range(25):
            g = _dyadic_graph(rng, n_max=12)
            if g.n_nodes < 2:
                continue
            rep = centralities(g, use_distances=use_distances)
            bet, close = oracle_betweenness_closeness(g, use_distances)
            np.testing.assert_allclose(rep.betweenness, bet, atol=1e-9)
            np.testing.assert_allclose(rep.closeness, close, atol=1e-9)

    def test_betweenness_total_mass(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            g = _dyadic_graph(rng, n_max=10)
            rep = centralities(g, use_distances=True)
            bet, _ = oracle_betweenness_closeness(g, True)
            assert rep.betweenness.sum() == pytest.approx(bet.sum(), abs=1e-9)

    def test_eigenvector_dense_reference(self):
        rng = np.random.default_rng(55)
        for _ in range(25):
            g = random_graph(rng, n_max=15, weights=(1, 9))
            rep = centralities(g, use_distances=False)
            np.testing.assert_allclose(rep.eigenvector, oracle_eigenvector(g),
                                       atol=1e-6)

    def test_eigenvector_scale_invariant(self):
        g = _graph([("A", "B", 2), ("B", "C", 3), ("A", "C", 1),
                    ("C", "D", 5)])
        rep1 = centralities(g, use_distances=False)
        g2 = _graph([("A", "B", 20), ("B", "C", 30), ("A", "C", 10),
                     ("C", "D", 50)])
        rep2 = centralities(g2, use_distances=False)
        np.testing.assert_allclose(rep1.eigenvector, rep2.eigenvector,
                                   atol=1e-8)

    def test_bipartite_component_converges(self):
        # plain power iteration oscillates on a single edge; the shifted
        # iteration must converge
        g = _graph([("A", "B", 3)])
        rep = centralities(g, use_distances=False)
        np.testing.assert_allclose(rep.eigenvector, [1.0, 1.0], atol=1e-9)

    def test_networkx_cross_check(self):
        nx = pytest.importorskip("networkx")
        rng = np.random.default_rng(31)
        for _ in range(10):
            g = _dyadic_graph(rng, n_max=12)
            if g.n_edges == 0:
                continue
            gx = nx.Graph()
            gx.add_nodes_from(range(g.n_nodes))
            for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w):
                gx.add_edge(int(u), int(v), dist=1.0 / int(w))
            rep = centralities(g, use_distances=True)
            nx_bet = nx.betweenness_centrality(gx, normalized=False,
                                               weight="dist")
            np.testing.assert_allclose(
                rep.betweenness, [nx_bet[i] for i in range(g.n_nodes)],
                atol=1e-9)

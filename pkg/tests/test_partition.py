"""Modularity, greedy detection (SC/LC), edge-aware weights, Haar pairs."""

import numpy as np
import pytest

from conftest import blocks_to_labels, brute_modularity, set_partitions
from cosub import (PartitionConfig, SubgraphPartition, WeightedGraph,
                   edge_aware_adjacency, haar_partition, louvain, modularity,
                   partition_is_connected, sbm_graph)


def two_triangles_bridge() -> WeightedGraph:
    return WeightedGraph.from_edges(
        6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


class TestModularity:
    def test_one_block_is_zero(self, toy_graph):
        part = SubgraphPartition.from_labels([1] * 5)
        assert modularity(toy_graph, part) == pytest.approx(0.0, abs=1e-15)

    def test_toy_partition_value(self, toy_graph, toy_partition):
        assert modularity(toy_graph, toy_partition) == pytest.approx(0.22, abs=1e-12)

    def test_singleton_value(self, toy_graph):
        part = SubgraphPartition.from_labels([1, 2, 3, 4, 5])
        assert modularity(toy_graph, part) == pytest.approx(-22 / 100, abs=1e-12)

    def test_zero_weight_graph_rejected(self):
        g = WeightedGraph.from_edges(3, [])
        with pytest.raises(ValueError, match="zero total weight"):
            modularity(g, SubgraphPartition.from_labels([1, 2, 3]))

    def test_matches_brute_force_oracle(self, toy_graph):
        for blocks in set_partitions(5):
            labels = blocks_to_labels(blocks, 5)
            part = SubgraphPartition.compact(labels)
            assert modularity(toy_graph, part) == pytest.approx(
                brute_modularity(toy_graph, labels), abs=1e-12)

    def test_toy_maximizer_is_triangle_pair(self, toy_graph, toy_partition):
        best_q = max(brute_modularity(toy_graph, blocks_to_labels(b, 5))
                     for b in set_partitions(5))
        assert best_q == pytest.approx(0.22, abs=1e-12)
        assert modularity(toy_graph, toy_partition) == pytest.approx(best_q, abs=1e-12)


class TestLouvain:
    def test_sc_finds_triangles(self):
        g = two_triangles_bridge()
        best_q = max(brute_modularity(g, blocks_to_labels(b, 6))
                     for b in set_partitions(6))
        for seed in range(6):
            part = louvain(g, PartitionConfig(variant="sc", seed=seed))
            assert np.array_equal(part.labels, [1, 1, 1, 2, 2, 2])
            assert modularity(g, part) == pytest.approx(best_q, abs=1e-12)

    def test_lc_disjoint_cliques(self):
        g = sbm_graph([10, 10], 1.0, 0.0, 3)
        part = louvain(g, PartitionConfig(variant="lc", tau=1000, seed=5))
        assert part.n_subgraphs == 2
        assert len(set(part.labels[:10])) == 1
        assert len(set(part.labels[10:])) == 1

    def test_lc_respects_tau(self):
        for seed in range(4):
            g = sbm_graph([8, 8, 8], 0.8, 0.1, seed)
            part = louvain(g, PartitionConfig(variant="lc", tau=2, seed=seed))
            assert part.sizes.max() <= 2

    def test_all_communities_connected(self):
        for seed in range(8):
            g = sbm_graph([12, 10, 9], 0.5, 0.08, seed)
            for variant in ("sc", "lc"):
                part = louvain(g, PartitionConfig(variant=variant, seed=seed, tau=15))
                assert partition_is_connected(g, part)

    def test_final_q_beats_singletons(self):
        for seed in range(5):
            g = sbm_graph([9, 9], 0.6, 0.1, seed)
            part = louvain(g, PartitionConfig(variant="sc", seed=seed))
            singles = SubgraphPartition.from_labels(np.arange(1, g.n + 1))
            assert modularity(g, part) >= modularity(g, singles) - 1e-12

    def test_deterministic_given_seed(self):
        g = sbm_graph([14, 14], 0.4, 0.05, 8)
        a = louvain(g, PartitionConfig(variant="lc", tau=20, seed=2))
        b = louvain(g, PartitionConfig(variant="lc", tau=20, seed=2))
        assert np.array_equal(a.labels, b.labels)

    def test_edgeless_graph_rejected(self):
        g = WeightedGraph.from_edges(3, [])
        with pytest.raises(ValueError, match="edge"):
            louvain(g, PartitionConfig())

    def test_never_exceeds_enumerated_maximum(self):
        rng = np.random.default_rng(0)
        for trial in range(4):
            n = int(rng.integers(5, 8))
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
            keep = [p for p in pairs if rng.random() < 0.55]
            if not keep:
                keep = [pairs[0]]
            g = WeightedGraph.from_edges(n, keep)
            best_q = max(brute_modularity(g, blocks_to_labels(b, n))
                         for b in set_partitions(n))
            part = louvain(g, PartitionConfig(variant="sc", seed=trial))
            assert modularity(g, part) <= best_q + 1e-12


class TestPartitionConfig:
    def test_lc_tau_validation(self):
        with pytest.raises(ValueError, match="tau"):
            PartitionConfig(variant="lc", tau=1)

    def test_variant_validation(self):
        with pytest.raises(ValueError, match="variant"):
            PartitionConfig(variant="xl")


class TestEdgeAware:
    def test_constant_signal_degenerates_to_unit_weights(self, toy_graph):
        out = edge_aware_adjacency(toy_graph, np.full(5, 3.25))
        assert all(w == 1.0 for _, _, w in out.edges())

    def test_single_difference_degenerates(self):
        g = WeightedGraph.from_edges(2, [(0, 1)])
        out = edge_aware_adjacency(g, [0.0, 1.0])
        assert list(out.edges()) == [(0, 1, 1.0)]

    def test_path_kernel_values(self):
        g = WeightedGraph.from_edges(3, [(0, 1), (1, 2)])
        out = edge_aware_adjacency(g, [0.0, 0.0, 1.0])
        weights = {(u, v): w for u, v, w in out.edges()}
        assert weights[(0, 1)] == pytest.approx(1.0, abs=1e-15)
        assert weights[(1, 2)] == pytest.approx(np.exp(-2.0), abs=1e-15)

    def test_support_preserved_and_bounded(self):
        rng = np.random.default_rng(5)
        g = sbm_graph([10, 10], 0.5, 0.2, 17)
        x = rng.normal(size=g.n)
        out = edge_aware_adjacency(g, x)
        src = sorted((u, v) for u, v, _ in g.edges())
        dst = sorted((u, v) for u, v, _ in out.edges())
        assert src == dst
        weights = np.array([w for _, _, w in out.edges()])
        assert np.all((weights > 0.0) & (weights <= 1.0))


class TestHaarPartition:
    def test_examples(self):
        assert np.array_equal(haar_partition(4).labels, [1, 1, 2, 2])
        assert np.array_equal(haar_partition(2).labels, [1, 1])
        assert np.array_equal(haar_partition(6).labels, [1, 1, 2, 2, 3, 3])

    def test_odd_rejected(self):
        with pytest.raises(ValueError, match="even"):
            haar_partition(5)

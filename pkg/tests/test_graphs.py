"""Graph construction, Laplacians, splitting, coarsening, generators."""

import numpy as np
import pytest

from conftest import brute_coarsen, graphs_equal, random_connected_partition
from cosub import (SubgraphPartition, WeightedGraph, coarsen,
                   connected_components, extract_local_adjacency,
                   global_fourier, grid_graph, laplacian, line_graph,
                   partition_is_connected, sbm_graph, split_adjacency)


class TestWeightedGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            WeightedGraph.from_edges(3, [(0, 0)])

    def test_rejects_duplicate_edges(self):
        with pytest.raises(ValueError, match="duplicate"):
            WeightedGraph.from_edges(3, [(0, 1), (1, 0)])

    def test_rejects_non_positive_weight(self):
        with pytest.raises(ValueError, match="weight"):
            WeightedGraph.from_edges(3, [(0, 1, 0.0)])

    def test_symmetry_of_adjacency(self, toy_graph):
        a = toy_graph.dense_adjacency()
        assert np.array_equal(a, a.T)
        assert np.all(np.diag(a) == 0.0)

    def test_from_adjacency_round_trip(self, toy_graph):
        rebuilt = WeightedGraph.from_adjacency(toy_graph.dense_adjacency())
        assert graphs_equal(toy_graph, rebuilt)

    def test_from_adjacency_rejects_asymmetry(self):
        with pytest.raises(ValueError, match="symmetric"):
            WeightedGraph.from_adjacency(np.array([[0.0, 1.0], [0.5, 0.0]]))


class TestLaplacian:
    def test_triangle(self):
        tri = WeightedGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
        expected = np.array([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]], dtype=float)
        assert np.array_equal(laplacian(tri), expected)

    def test_single_node(self):
        g = WeightedGraph.from_edges(1, [])
        assert np.array_equal(laplacian(g), np.zeros((1, 1)))

    def test_pair(self):
        g = WeightedGraph.from_edges(2, [(0, 1)])
        assert np.array_equal(laplacian(g), np.array([[1.0, -1.0], [-1.0, 1.0]]))

    def test_row_sums_zero_and_psd(self):
        g = sbm_graph([8, 8], 0.7, 0.2, 11)
        lap = laplacian(g)
        assert np.abs(lap.sum(axis=1)).max() == 0.0
        w = np.linalg.eigvalsh(lap)
        assert w.min() > -1e-12
        # connected graph: zero eigenvalue is simple
        assert np.sum(np.abs(w) < 1e-8) == 1


class TestSplitAdjacency:
    def test_toy_split(self, toy_graph, toy_partition):
        a_int, a_ext = split_adjacency(toy_graph, toy_partition)
        assert sorted((u, v) for u, v, _ in a_int.edges()) == [(0, 1), (0, 2), (1, 2), (3, 4)]
        assert sorted((u, v) for u, v, _ in a_ext.edges()) == [(2, 3)]

    def test_singleton_partition(self, toy_graph):
        part = SubgraphPartition.from_labels([1, 2, 3, 4, 5])
        a_int, a_ext = split_adjacency(toy_graph, part)
        assert a_int.num_edges == 0
        assert graphs_equal(a_ext, toy_graph)

    def test_one_block_partition(self, toy_graph):
        part = SubgraphPartition.from_labels([1, 1, 1, 1, 1])
        a_int, a_ext = split_adjacency(toy_graph, part)
        assert graphs_equal(a_int, toy_graph)
        assert a_ext.num_edges == 0

    def test_additivity_random(self):
        rng = np.random.default_rng(4)
        g = sbm_graph([12, 9, 7], 0.6, 0.15, 21)
        part = random_connected_partition(g, rng, 6)
        a_int, a_ext = split_adjacency(g, part)
        total = a_int.dense_adjacency() + a_ext.dense_adjacency()
        assert np.array_equal(total, g.dense_adjacency())

    def test_length_mismatch(self, toy_graph):
        with pytest.raises(ValueError, match="length"):
            split_adjacency(toy_graph, SubgraphPartition.from_labels([1, 1, 2]))


class TestExtractLocal:
    def test_triangle_block(self, toy_graph, toy_partition):
        local = extract_local_adjacency(toy_graph, toy_partition, 1)
        assert local.n == 3
        assert sorted((u, v) for u, v, _ in local.edges()) == [(0, 1), (0, 2), (1, 2)]

    def test_pair_block(self, toy_graph, toy_partition):
        local = extract_local_adjacency(toy_graph, toy_partition, 2)
        assert local.n == 2
        assert list(local.edges()) == [(0, 1, 1.0)]

    def test_singleton_block(self, toy_graph):
        part = SubgraphPartition.from_labels([1, 1, 1, 1, 2])
        local = extract_local_adjacency(toy_graph, part, 2)
        assert local.n == 1 and local.num_edges == 0

    def test_unknown_label(self, toy_graph, toy_partition):
        with pytest.raises(ValueError, match="unknown"):
            extract_local_adjacency(toy_graph, toy_partition, 3)


class TestConnectedComponents:
    def test_recovers_partition_from_intra_edges(self, toy_graph, toy_partition):
        a_int, _ = split_adjacency(toy_graph, toy_partition)
        comp = connected_components(a_int)
        assert np.array_equal(comp.labels, toy_partition.labels)

    def test_complete_graph_single_component(self):
        g = sbm_graph([6], 1.0, 0.0, 0)
        assert connected_components(g).n_subgraphs == 1

    def test_edgeless_graph(self):
        g = WeightedGraph.from_edges(4, [])
        comp = connected_components(g)
        assert comp.n_subgraphs == 4
        assert np.array_equal(comp.labels, [1, 2, 3, 4])

    def test_round_trip_random_partitions(self):
        rng = np.random.default_rng(7)
        for seed in range(5):
            g = sbm_graph([10, 10, 10], 0.5, 0.1, seed)
            part = random_connected_partition(g, rng, 7)
            a_int, _ = split_adjacency(g, part)
            comp = connected_components(a_int)
            # identical up to renaming; compact order makes them equal
            assert np.array_equal(comp.labels, part.labels)
            assert partition_is_connected(g, part)


class TestCoarsen:
    def test_toy_coarse_graph(self, toy_graph, toy_partition):
        _, a_ext = split_adjacency(toy_graph, toy_partition)
        coarse = coarsen(a_ext, toy_partition)
        assert np.array_equal(coarse.dense_adjacency(), [[0.0, 1.0], [1.0, 0.0]])

    def test_empty_inter_edges(self, toy_graph):
        part = SubgraphPartition.from_labels([1, 1, 1, 1, 1])
        _, a_ext = split_adjacency(toy_graph, part)
        coarse = coarsen(a_ext, part)
        assert coarse.n == 1 and coarse.num_edges == 0

    def test_parallel_crossing_edges_sum(self):
        g = WeightedGraph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5),
                                         (0, 3), (1, 4), (2, 5)])
        part = SubgraphPartition.from_labels([1, 1, 1, 2, 2, 2])
        _, a_ext = split_adjacency(g, part)
        coarse = coarsen(a_ext, part)
        expected = brute_coarsen(a_ext, part.labels, [1, 2])
        assert expected[0, 1] == 3.0
        assert np.array_equal(coarse.dense_adjacency(), expected)

    def test_zero_diagonal_and_weight_conservation(self):
        rng = np.random.default_rng(3)
        g = sbm_graph([9, 9, 9], 0.6, 0.25, 13)
        part = random_connected_partition(g, rng, 5)
        _, a_ext = split_adjacency(g, part)
        coarse = coarsen(a_ext, part)
        dense = coarse.dense_adjacency()
        assert np.array_equal(dense, dense.T)
        assert np.all(np.diag(dense) == 0.0)
        assert coarse.total_weight == pytest.approx(a_ext.total_weight, abs=1e-12)
        oracle = brute_coarsen(a_ext, part.labels, range(1, part.n_subgraphs + 1))
        assert np.allclose(dense, oracle, atol=1e-12)


class TestGlobalFourier:
    def test_constant_signal_concentrates(self):
        g = sbm_graph([10], 0.8, 0.0, 5)
        x = np.full(g.n, 1.0 / np.sqrt(g.n))
        coeffs = global_fourier(g, x)
        assert coeffs[0] == pytest.approx(np.linalg.norm(x), abs=1e-12)
        assert np.abs(coeffs[1:]).max() < 1e-12

    def test_single_mode_maps_to_unit_vector(self):
        from cosub import global_eigenbasis
        g = sbm_graph([4, 4], 0.9, 0.3, 2)
        _, q = global_eigenbasis(g)
        coeffs = global_fourier(g, q[:, 3])
        expected = np.zeros(g.n)
        expected[3] = 1.0
        assert np.allclose(coeffs, expected, atol=1e-10)

    def test_energy_preservation(self):
        rng = np.random.default_rng(9)
        g = sbm_graph([10, 10], 0.6, 0.2, 9)
        x = rng.normal(size=g.n)
        coeffs = global_fourier(g, x)
        assert np.linalg.norm(coeffs) == pytest.approx(np.linalg.norm(x), rel=1e-12)

    def test_disconnected_graph_rejected(self):
        g = WeightedGraph.from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(ValueError, match="connected"):
            global_fourier(g, np.zeros(4))


class TestGenerators:
    def test_line_graph(self):
        g = line_graph(4)
        assert sorted((u, v) for u, v, _ in g.edges()) == [(0, 1), (1, 2), (2, 3)]

    def test_grid_graph(self):
        g = grid_graph(2, 2)
        assert g.n == 4 and g.num_edges == 4

    def test_sbm_extreme_probabilities(self):
        g = sbm_graph([10, 10], 1.0, 0.0, 42)
        comp = connected_components(g)
        assert comp.n_subgraphs == 2
        assert g.num_edges == 2 * (10 * 9 // 2)

    def test_sbm_deterministic(self):
        a = sbm_graph([15, 15], 0.5, 0.05, 12)
        b = sbm_graph([15, 15], 0.5, 0.05, 12)
        assert graphs_equal(a, b)

    def test_sbm_large_sparse_regime(self):
        g = sbm_graph([50] * 60, 0.5, 0.0005, 3)
        assert g.n == 3000
        # cross edges present but sparse
        labels = np.repeat(np.arange(60), 50)
        u, v, _ = g.edge_arrays()
        cross = np.sum(labels[u] != labels[v])
        assert 0 < cross < 6000

    def test_degenerate_sizes_rejected(self):
        with pytest.raises(ValueError):
            line_graph(0)
        with pytest.raises(ValueError):
            grid_graph(0, 3)
        with pytest.raises(ValueError):
            sbm_graph([5, 0], 0.5, 0.1, 1)
        with pytest.raises(ValueError):
            sbm_graph([5, 5], 0.2, 0.5, 1)

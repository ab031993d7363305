"""Unit tests for exact and brute-force reference oracles"""

import itertools
import math
from collections import Counter
from fractions import Fraction

import networkx as nx
import pytest
from scipy import stats

from random_cc.errors import BudgetExceededError, ContractViolation, DisconnectedGraphError, InvalidInputError
from random_cc.graphs.graph import Graph, GraphModelSpec, generate
from random_cc.oracles.oracles import (
    TransferCurrentOracle,
    TreeCountReport,
    contracted_tree_count,
    enumerate_spanning_trees,
    exhaustive_cycle_census,
    induced_cycle_frequencies,
    induces,
    rejection_sample_cells,
    rho_exact_matrix_tree,
    rho_monte_carlo,
    spanning_tree_count,
    tree_count_report,
    tree_frequency_rho,
)
from random_cc.probability.occurrence import rho_exact_lrw
from random_cc.sampling.cycle_census import enumerate_simple_cycles, exact_counts
from random_cc.trees.spanning_forest import Cycle, tree_from_edges

PATH = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
C5 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])


class TestSpanningTreeCount:
    """Tests for matrix-tree counts"""

    def test_cayley(self, k4, k5):
        assert spanning_tree_count(k4) == 16
        assert spanning_tree_count(k5) == 125

    def test_path(self):
        assert spanning_tree_count(PATH) == 1

    def test_cycle_graph(self):
        assert spanning_tree_count(C5) == 5

    def test_disconnected(self):
        assert spanning_tree_count(Graph.from_edges(4, [(0, 1), (2, 3)])) == 0

    def test_single_node(self):
        assert spanning_tree_count(Graph.from_edges(1, [])) == 1

    def test_petersen(self):
        assert spanning_tree_count(Graph.from_networkx(nx.petersen_graph())) == 2000

    def test_big_integer(self):
        """Test exact counts beyond 64 bits"""
        k30 = generate(GraphModelSpec.complete(30))
        assert spanning_tree_count(k30) == 30 ** 28


class TestContraction:
    """Tests for contracted tree counts"""

    def test_single_edge(self, k4):
        """Test trees through a fixed edge of K_4: 16 * 3 / 6"""
        assert contracted_tree_count(k4, [(0, 1)]) == 8

    def test_forest_with_cycle(self, k4):
        assert contracted_tree_count(k4, [(0, 1), (1, 2), (0, 2)]) == 0

    def test_non_edge(self, square):
        with pytest.raises(ContractViolation):
            contracted_tree_count(square, [(0, 2)])

    def test_report(self, k4):
        report = tree_count_report(k4, Cycle((0, 1, 2)))
        assert report == TreeCountReport(total_trees=16, trees_containing=9)
        assert report.rho == Fraction(9, 16)

    def test_report_bounds(self):
        with pytest.raises(ContractViolation):
            TreeCountReport(total_trees=3, trees_containing=4)


class TestRhoExact:
    """Tests for exact occurrence probabilities"""

    def test_triangle_in_k3(self, triangle):
        assert rho_exact_matrix_tree(triangle, Cycle((0, 1, 2))) == 1

    def test_triangle_in_k4(self, k4):
        assert rho_exact_matrix_tree(k4, Cycle((0, 1, 2))) == Fraction(9, 16)

    def test_hamiltonian_cycle_in_cycle_graph(self):
        assert rho_exact_matrix_tree(C5, Cycle((0, 1, 2, 3, 4))) == 1

    def test_enumeration_agrees(self, k4):
        assert tree_frequency_rho(k4, Cycle((0, 1, 2))) == Fraction(9, 16)

    def test_transfer_current_agrees(self, golden_graph):
        oracle = TransferCurrentOracle(golden_graph)
        for cycle in enumerate_simple_cycles(golden_graph):
            exact = rho_exact_matrix_tree(golden_graph, cycle)
            assert oracle.rho(cycle) == pytest.approx(float(exact), abs=1e-9)

    def test_transfer_current_edge_marginal(self, k4):
        """Test P[e in T] = (n-1)/m on an edge-transitive graph"""
        assert TransferCurrentOracle(k4).edge_set_probability([(0, 1)]) == pytest.approx(0.5)

    def test_transfer_current_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            TransferCurrentOracle(Graph.from_edges(4, [(0, 1), (2, 3)]))

    def test_rho_sum_equals_mean_induced_cycles(self, golden_graph):
        """Test sum of rho over all cycles equals m - n + 1"""
        total = sum(rho_exact_matrix_tree(golden_graph, c) for c in enumerate_simple_cycles(golden_graph))
        assert total == golden_graph.cycle_space_dimension()


class TestMonteCarlo:
    """Tests for Monte Carlo occurrence probabilities"""

    def test_triangle_in_k3(self, triangle):
        estimate = rho_monte_carlo(triangle, Cycle((0, 1, 2)), trials=500, seed=1)
        assert estimate.estimate == 1.0
        assert estimate.standard_error == 0.0
        assert estimate.hits == 500

    def test_triangle_in_k4(self, k4):
        estimate = rho_monte_carlo(k4, Cycle((0, 1, 2)), trials=20_000, seed=3)
        sd = math.sqrt(0.5625 * 0.4375 / 20_000)
        assert abs(estimate.estimate - 0.5625) < 4 * sd

    def test_workers_do_not_change_result(self, golden_graph):
        cycle = Cycle((0, 3, 1, 4))
        one = rho_monte_carlo(golden_graph, cycle, trials=3000, seed=9, workers=1)
        four = rho_monte_carlo(golden_graph, cycle, trials=3000, seed=9, workers=4)
        assert one == four

    def test_invalid_trials(self, k4):
        with pytest.raises(InvalidInputError):
            rho_monte_carlo(k4, Cycle((0, 1, 2)), trials=0, seed=0)


class TestRejectionSampling:
    """Tests for permutation rejection sampling of cells"""

    def test_complete_graph_accepts_everything(self, k5):
        sample = rejection_sample_cells(k5, 3, count=50, seed=1)
        assert sample.accepted == 50
        assert sample.attempts == 50
        assert sample.acceptance_rate == 1.0

    def test_triangle(self, triangle):
        sample = rejection_sample_cells(triangle, 3, count=1, seed=0)
        assert sample.cycles == [Cycle((0, 1, 2))]

    def test_shortfall(self):
        """Test an exhausted budget reports a shortfall instead of raising"""
        tree_like = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        sample = rejection_sample_cells(tree_like, 3, count=2, seed=0, max_attempts=100)
        assert sample.shortfall
        assert sample.attempts == 100
        assert sample.accepted == 0

    def test_invalid_length(self, k4):
        with pytest.raises(InvalidInputError):
            rejection_sample_cells(k4, 5, count=1, seed=0)

    def test_accepted_cells_are_cycles(self, golden_graph):
        sample = rejection_sample_cells(golden_graph, 4, count=30, seed=4)
        for cycle in sample.cycles:
            cycle.validate(golden_graph)
            assert cycle.length == 4

    def test_uniform_over_cycles(self, golden_graph):
        """Test chi-square uniformity over the triangles of a small graph"""
        triangles = [c for c in enumerate_simple_cycles(golden_graph) if c.length == 3]
        sample = rejection_sample_cells(golden_graph, 3, count=200 * len(triangles), seed=8)
        counts = Counter(sample.cycles)
        assert set(counts) == set(triangles)
        _, p_value = stats.chisquare([counts[t] for t in triangles])
        assert p_value > 0.001

    @pytest.mark.slow
    def test_acceptance_rate_on_er(self, connected_er):
        """Test the acceptance rate is 2l N_l / (n! / (n-l)!) on ER(12, 0.5)"""
        g = connected_er(12, 0.5, seed=3)
        l = 4
        expected = 2 * l * exact_counts(g)[l] / math.perm(12, l)
        sample = rejection_sample_cells(g, l, count=2000, seed=6)
        assert sample.accepted == 2000
        assert sample.acceptance_rate == pytest.approx(expected, rel=0.1)


class TestEnumeration:
    """Tests for exhaustive spanning tree enumeration"""

    def test_counts(self, triangle, k4, square):
        assert len(enumerate_spanning_trees(triangle)) == 3
        assert len(enumerate_spanning_trees(k4)) == 16
        assert len(enumerate_spanning_trees(square)) == 4

    def test_distinct(self, golden_graph):
        trees = enumerate_spanning_trees(golden_graph)
        assert len({tuple(t.edges()) for t in trees}) == len(trees) == spanning_tree_count(golden_graph)

    def test_budget(self, k5):
        with pytest.raises(BudgetExceededError):
            enumerate_spanning_trees(k5, budget=100)

    def test_disconnected_has_no_trees(self):
        assert enumerate_spanning_trees(Graph.from_edges(4, [(0, 1), (2, 3)])) == []

    def test_induces(self, square):
        tree = tree_from_edges(square, [(0, 1), (1, 2), (2, 3)])
        assert induces(tree, Cycle((0, 1, 2, 3)))

    def test_frequencies(self, k4):
        frequencies = induced_cycle_frequencies(enumerate_spanning_trees(k4))
        assert frequencies[Cycle((0, 1, 2))] == 9
        assert sum(frequencies.values()) == 16 * 3

    def test_exhaustive_census_counts_every_cycle(self, k5):
        """Test the counting identity reproduces exact cycle counts"""
        assert exhaustive_cycle_census(k5) == {3: 10, 4: 15, 5: 12}


def _small_connected_graphs(max_nodes: int):
    for graph in nx.graph_atlas_g():
        n = graph.number_of_nodes()
        if 3 <= n <= max_nodes and graph.number_of_edges() >= n and nx.is_connected(graph):
            yield Graph.from_networkx(graph)


@pytest.mark.slow
class TestExhaustiveEquivalence:
    """Cross-checks over every connected graph with at most six nodes"""

    def test_oracles_agree(self):
        """Test matrix-tree, tree frequency and LRW give the same rho"""
        for g in _small_connected_graphs(6):
            for cycle in enumerate_simple_cycles(g):
                exact = rho_exact_matrix_tree(g, cycle)
                assert tree_frequency_rho(g, cycle) == exact
                assert rho_exact_lrw(cycle, g) == pytest.approx(float(exact), abs=1e-9)

    def test_counting_identity(self):
        """Test the exhaustive census equals exact cycle counts"""
        for g in _small_connected_graphs(6):
            exact = exact_counts(g)
            assert exhaustive_cycle_census(g) == {l: Fraction(c) for l, c in exact.items()}

    def test_cycle_enumeration_matches_networkx(self):
        for g in itertools.islice(_small_connected_graphs(6), 200):
            ours = sorted(c.length for c in enumerate_simple_cycles(g))
            # each undirected cycle appears once per direction in the directed graph
            directed = nx.DiGraph(g.to_networkx())
            theirs = sorted(len(c) for c in nx.simple_cycles(directed) if len(c) >= 3)
            assert sorted(ours + ours) == theirs

"""Unit tests for the lifting sampler"""

import math
from dataclasses import replace

import numpy as np
import pytest

from random_cc.errors import DisconnectedGraphError, DomainError, InvalidInputError, NoEligibleLengthsError
from random_cc.graphs.graph import Graph, GraphModelSpec, generate
from random_cc.monitoring.logging_config import metrics
from random_cc.sampling.cycle_census import CycleCensus
from random_cc.sampling.induced_cycles import Approximation
from random_cc.sampling.lifting_sampler import (
    SamplingConfig,
    SamplingMode,
    linial_meshulam,
    parse_length_probabilities,
    plan_expected_cells,
    sample_lifting,
    sample_random_cell_complex,
    selection_probability,
)
from random_cc.trees.spanning_forest import Cycle
from random_cc.utils.seeding import make_rng

DIAMOND = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])


class TestSelectionProbability:
    """Tests for the per-tree selection probability"""

    def test_zero_target(self):
        assert selection_probability(0.0, 0.3, 10) == 0.0

    def test_single_tree(self):
        assert selection_probability(0.4, 0.8, 1) == pytest.approx(0.5)

    def test_worked_value(self):
        assert selection_probability(0.5, 0.1, 10) == pytest.approx(0.66967, abs=1e-5)

    def test_overall_inclusion(self):
        """Test ten exposures with this selection give inclusion 0.5"""
        rho, trials = 0.1, 200_000
        select = selection_probability(0.5, rho, 10)
        rng = make_rng(1)
        picked = (rng.random((trials, 10)) < rho) & (rng.random((trials, 10)) < select)
        inclusion = picked.any(axis=1).mean()
        assert abs(inclusion - 0.5) < 4 * math.sqrt(0.25 / trials)

    def test_undersampling_not_clamped(self):
        assert selection_probability(0.9, 0.01, 1) > 1.0

    def test_invalid_rho(self):
        with pytest.raises(DomainError):
            selection_probability(0.5, 0.0, 10)

    def test_invalid_target(self):
        with pytest.raises(InvalidInputError):
            selection_probability(1.5, 0.5, 10)


class TestPlanExpectedCells:
    """Tests for the ExpectedCells plan"""

    def test_single_length(self):
        census = CycleCensus(node_count=8, estimates={5: 50.0}, occurrences={5: 9})
        assert plan_expected_cells(census, 5.0, 4) == {5: pytest.approx(0.1)}

    def test_zero_nu(self):
        census = CycleCensus(node_count=8, estimates={3: 10.0, 4: 20.0}, occurrences={3: 9, 4: 9})
        assert plan_expected_cells(census, 0.0, 4) == {3: 0.0, 4: 0.0}

    def test_two_lengths(self):
        census = CycleCensus(node_count=8, estimates={3: 100.0, 4: 300.0}, occurrences={3: 30, 4: 30})
        plan = plan_expected_cells(census, 40.0, 4)
        assert plan[3] == pytest.approx(0.2)
        assert plan[4] == pytest.approx(0.0667, abs=1e-4)

    def test_capped_at_one(self):
        census = CycleCensus(node_count=8, estimates={3: 2.0}, occurrences={3: 30})
        assert plan_expected_cells(census, 10.0, 4) == {3: 1.0}

    def test_threshold_excludes_rare_lengths(self):
        census = CycleCensus(node_count=8, estimates={3: 10.0, 6: 3.0}, occurrences={3: 20, 6: 4})
        assert set(plan_expected_cells(census, 4.0, 4)) == {3}

    def test_no_eligible_lengths(self):
        census = CycleCensus(node_count=8, estimates={3: 10.0}, occurrences={3: 2})
        with pytest.raises(NoEligibleLengthsError, match="no length exceeded occurrence threshold"):
            plan_expected_cells(census, 4.0, 4)


class TestSamplingConfig:
    """Tests for sampling configuration"""

    def test_parse_length_probabilities(self):
        assert parse_length_probabilities("3:0.5, 4:0.1") == {3: 0.5, 4: 0.1}
        assert parse_length_probabilities("") == {}

    def test_parse_malformed(self):
        with pytest.raises(InvalidInputError):
            parse_length_probabilities("3=0.5")
        with pytest.raises(InvalidInputError):
            parse_length_probabilities("x:0.5")

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            SamplingConfig(trees=0)
        with pytest.raises(InvalidInputError):
            SamplingConfig(target_probabilities={2: 0.5})
        with pytest.raises(InvalidInputError):
            SamplingConfig(target_probabilities={3: 1.5})
        with pytest.raises(InvalidInputError):
            SamplingConfig(edge_probability=0.0)

    def test_to_dict(self):
        cfg = SamplingConfig(trees=5, target_probabilities={4: 0.2, 3: 0.1})
        data = cfg.to_dict()
        assert data["mode"] == "uniform"
        assert data["approximation"] == "fast"
        assert list(data["target_probabilities"]) == ["3", "4"]


class TestSampleLifting:
    """Tests for lifting skeletons to cell complexes"""

    def test_triangle_single_tree(self, triangle):
        """Test K_3 with P_3 = 1 and one tree gives the triangle"""
        cc, report = sample_lifting(triangle, SamplingConfig(trees=1, target_probabilities={3: 1.0}))
        assert cc.cells == (Cycle((0, 1, 2)),)
        assert not report.undersampled
        assert report.cells_selected == 1

    def test_zero_targets(self, golden_graph):
        cc, report = sample_lifting(golden_graph, SamplingConfig(trees=10, target_probabilities={3: 0.0}))
        assert cc.cell_count == 0
        assert report.cycles_evaluated == 0

    def test_unlisted_lengths_excluded(self, golden_graph):
        cfg = SamplingConfig(trees=30, target_probabilities={4: 1.0}, edge_probability=0.5)
        cc, _ = sample_lifting(golden_graph, cfg)
        assert all(cell.length == 4 for cell in cc.cells)

    def test_cells_are_valid(self, golden_graph):
        cfg = SamplingConfig(trees=20, target_probabilities={3: 0.8, 4: 0.5, 5: 0.3}, edge_probability=0.5)
        cc, report = sample_lifting(golden_graph, cfg)
        for cell in cc.cells:
            cell.validate(golden_graph)
        assert cc.cell_count == report.cells_selected
        assert report.cycles_evaluated == 20 * golden_graph.cycle_space_dimension()

    def test_deterministic_across_workers(self, golden_graph):
        cfg = SamplingConfig(trees=25, target_probabilities={3: 0.6, 4: 0.4}, seed=3, edge_probability=0.5)
        one, report_one = sample_lifting(golden_graph, cfg)
        four, report_four = sample_lifting(golden_graph, replace(cfg, workers=4))
        assert one == four
        assert report_one.to_dict() == report_four.to_dict()

    def test_undersampling_reported(self, k4):
        """Test rho' above 1 is clamped and reported"""
        cc, report = sample_lifting(k4, SamplingConfig(trees=1, target_probabilities={3: 1.0}))
        assert report.undersampled
        assert report.undersampled_lengths == [3]
        assert report.undersampled_edges >= 1
        assert cc.cell_count >= 1
        assert metrics.counter("undersampled_edges") == report.undersampled_edges

    def test_duplicates_stored_once(self, triangle):
        cc, report = sample_lifting(triangle, SamplingConfig(trees=5, target_probabilities={3: 1.0}))
        assert cc.cell_count == 1
        assert report.duplicate_hits == report.cycles_evaluated - 1 >= 0

    def test_disconnected(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        with pytest.raises(DisconnectedGraphError):
            sample_lifting(g, SamplingConfig(trees=2, target_probabilities={3: 0.5}))

    def test_expected_cells_mode(self, k5):
        cfg = SamplingConfig(trees=100, mode=SamplingMode.EXPECTED_CELLS, expected_cells=6.0, threshold=4)
        cc, report = sample_lifting(k5, cfg)
        assert report.census is not None
        assert set(report.target_probabilities) == set(report.census.eligible_lengths(4))
        assert report.to_dict()["mode"] == "expected_cells"

    def test_expected_cells_no_eligible(self, k5):
        cfg = SamplingConfig(trees=3, mode=SamplingMode.EXPECTED_CELLS, expected_cells=6.0, threshold=10_000)
        with pytest.raises(NoEligibleLengthsError):
            sample_lifting(k5, cfg)

    def test_exact_approximation(self):
        cfg = SamplingConfig(trees=10, target_probabilities={3: 0.5, 4: 0.5}, approximation=Approximation.EXACT)
        cc, report = sample_lifting(DIAMOND, cfg)
        assert report.approximation == "exact"
        assert not report.undersampled


class TestModelPipeline:
    """Tests for the ER pipeline and the Linial-Meshulam special case"""

    def test_random_cell_complex(self):
        cfg = SamplingConfig(trees=30, target_probabilities={3: 0.3}, seed=4)
        g, cc, _ = sample_random_cell_complex(12, 0.8, cfg)
        again, cc_again, _ = sample_random_cell_complex(12, 0.8, cfg)
        assert g == again
        assert cc == cc_again
        assert cc.skeleton == g
        assert all(cell.length == 3 for cell in cc.cells)

    def test_known_edge_probability_is_used(self):
        cfg = SamplingConfig(trees=5, target_probabilities={3: 0.3}, seed=4)
        sample_random_cell_complex(12, 0.8, cfg)
        assert metrics.get_summary()["gauges"]["edge_probability"] == 0.8

    def test_explicit_edge_probability_wins(self):
        cfg = SamplingConfig(trees=5, target_probabilities={3: 0.3}, seed=4, edge_probability=0.5)
        sample_random_cell_complex(12, 0.8, cfg)
        assert metrics.get_summary()["gauges"]["edge_probability"] == 0.5

    def test_linial_meshulam_extremes(self):
        assert linial_meshulam(6, 0.0, seed=1).cell_count == 0
        full = linial_meshulam(6, 1.0, seed=1)
        assert full.cell_count == 20
        assert full.skeleton.edge_count == 15

    def test_linial_meshulam_deterministic(self):
        assert linial_meshulam(7, 0.4, seed=5) == linial_meshulam(7, 0.4, seed=5)

    def test_linial_meshulam_invalid(self):
        with pytest.raises(InvalidInputError):
            linial_meshulam(5, 1.2, seed=0)


@pytest.mark.slow
class TestSamplingFidelity:
    """Statistical checks of the two-step sampling"""

    def test_inclusion_frequency_with_exact_rho(self):
        """Test a fixed cycle is included with probability P_l"""
        runs = 2000
        target = Cycle((0, 1, 2))
        hits = 0
        for seed in range(runs):
            cfg = SamplingConfig(
                trees=5,
                target_probabilities={3: 0.5},
                approximation=Approximation.EXACT,
                seed=seed,
            )
            cc, _ = sample_lifting(DIAMOND, cfg)
            hits += target in cc.cells
        assert abs(hits / runs - 0.5) < 4 * math.sqrt(0.25 / runs)

    def test_expected_cell_count(self):
        """Test the mean cell count matches nu on a complete graph"""
        k7 = generate(GraphModelSpec.complete(7))
        counts = []
        for seed in range(30):
            cfg = SamplingConfig(
                trees=300,
                mode=SamplingMode.EXPECTED_CELLS,
                expected_cells=20.0,
                threshold=4,
                seed=seed,
            )
            cc, _ = sample_lifting(k7, cfg)
            counts.append(cc.cell_count)
        assert np.mean(counts) == pytest.approx(20.0, rel=0.15)

    def test_expected_cell_count_on_er(self, connected_er):
        """Test the mean cell count matches nu = 300 on ER(30, 0.3)"""
        counts = []
        for seed in range(8):
            g = connected_er(30, 0.3, seed=100 * seed)
            cfg = SamplingConfig(
                trees=1000,
                mode=SamplingMode.EXPECTED_CELLS,
                expected_cells=300.0,
                threshold=4,
                seed=seed,
                edge_probability=0.3,
            )
            cc, _ = sample_lifting(g, cfg)
            counts.append(cc.cell_count)
        assert np.mean(counts) == pytest.approx(300.0, rel=0.15)

"""Unit tests for cell complexes and their topology"""

import json

import numpy as np
import pytest

from random_cc.errors import InvalidInputError, ValidationError
from random_cc.graphs.graph import Graph, GraphModelSpec, generate
from random_cc.sampling.lifting_sampler import SamplingConfig, linial_meshulam, sample_lifting
from random_cc.topology.complex_analysis import (
    Betti,
    CellComplex2,
    analysis_record,
    boundary_matrices,
    cohomology_dims,
    dump_complex,
    euler_characteristic,
    find_orientation,
    is_orientable,
    load_complex,
    read_complex,
    write_complex,
)
from random_cc.trees.spanning_forest import Cycle

TETRAHEDRON = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
MOBIUS_STRIP = [(0, 1, 2), (1, 2, 3), (2, 3, 4), (0, 3, 4), (0, 1, 4)]


def make_complex(g, cells):
    return CellComplex2(g, tuple(Cycle.canonical(c) for c in cells))


class TestCellComplex:
    """Tests for the CellComplex2 container"""

    def test_cells_sorted(self, k4):
        cc = make_complex(k4, [(1, 2, 3), (0, 1, 2)])
        assert [c.nodes for c in cc.cells] == [(0, 1, 2), (1, 2, 3)]

    def test_duplicate_cell_rejected(self, triangle):
        with pytest.raises(ValidationError, match="duplicate"):
            make_complex(triangle, [(0, 1, 2), (2, 1, 0)])

    def test_cell_on_non_edge_rejected(self, square):
        with pytest.raises(ValidationError):
            make_complex(square, [(0, 1, 3)])

    def test_counts(self, k4):
        cc = make_complex(k4, TETRAHEDRON)
        assert (cc.node_count, cc.edge_count, cc.cell_count) == (4, 6, 4)


class TestBoundaryMatrices:
    """Tests for the signed incidence and cell boundary matrices"""

    def test_shapes_and_dtype(self, golden_graph):
        cc = make_complex(golden_graph, [(0, 3, 1, 4), (0, 3, 5)])
        b1, b2 = boundary_matrices(cc)
        assert b1.shape == (8, 15)
        assert b2.shape == (15, 2)
        assert b1.dtype.kind == "i"

    def test_incidence_columns(self, triangle):
        b1, _ = boundary_matrices(CellComplex2(triangle))
        # edges (0, 1), (0, 2), (1, 2): -1 at the smaller end, +1 at the larger
        assert b1.toarray().tolist() == [[-1, -1, 0], [1, 0, -1], [0, 1, 1]]

    def test_square_cell_signs(self, square):
        _, b2 = boundary_matrices(make_complex(square, [(0, 1, 2, 3)]))
        # edge order (0, 1), (0, 3), (1, 2), (2, 3); the closing edge runs 3 -> 0
        assert b2.toarray()[:, 0].tolist() == [1, -1, 1, 1]

    def test_boundary_of_boundary(self, golden_graph):
        cells = [(0, 3, 1, 4), (0, 3, 5), (1, 5, 2), (2, 4, 1), (3, 6, 2, 1)]
        b1, b2 = boundary_matrices(make_complex(golden_graph, cells))
        assert (b1 @ b2).count_nonzero() == 0

    def test_empty_complex(self, k4):
        _, b2 = boundary_matrices(CellComplex2(k4))
        assert b2.shape == (6, 0)


class TestCohomology:
    """Tests for Betti numbers and the Euler characteristic"""

    def test_bare_triangle(self, triangle):
        assert cohomology_dims(CellComplex2(triangle)) == Betti(1, 1, 0)

    def test_filled_triangle(self, triangle):
        assert cohomology_dims(make_complex(triangle, [(0, 1, 2)])) == Betti(1, 0, 0)

    def test_tetrahedron_boundary_is_sphere(self, k4):
        assert cohomology_dims(make_complex(k4, TETRAHEDRON)) == Betti(1, 0, 1)

    def test_mobius_strip(self, k5):
        assert cohomology_dims(make_complex(k5, MOBIUS_STRIP)) == Betti(1, 1, 0)

    def test_disconnected_skeleton(self):
        g = Graph.from_edges(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        assert cohomology_dims(make_complex(g, [(0, 1, 2)])) == Betti(3, 1, 0)

    def test_sparse_rank_path(self):
        """Test the full 2-skeleton of a 20-node simplex takes the sparse route"""
        cc = linial_meshulam(20, 1.0, seed=0)
        assert cohomology_dims(cc) == Betti(1, 0, 969)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_euler_identity(self, seed):
        cc = linial_meshulam(8, 0.3, seed=seed)
        betti = cohomology_dims(cc)
        assert euler_characteristic(cc) == betti.b0 - betti.b1 + betti.b2

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(100))
    def test_sampled_complexes_match_numpy_rank(self, seed, connected_er):
        """Test Betti numbers of sampled complexes against floating-point ranks"""
        g = connected_er(10, 0.5, seed=1000 + 10 * seed)
        cfg = SamplingConfig(
            trees=5, target_probabilities={3: 0.6, 4: 0.4, 5: 0.3}, seed=seed, edge_probability=0.5
        )
        cc, _ = sample_lifting(g, cfg)
        matrices = boundary_matrices(cc)
        rank_b1 = np.linalg.matrix_rank(matrices.b1.toarray())
        rank_b2 = np.linalg.matrix_rank(matrices.b2.toarray()) if cc.cell_count else 0
        expected = Betti(
            b0=cc.node_count - rank_b1,
            b1=cc.edge_count - rank_b1 - rank_b2,
            b2=cc.cell_count - rank_b2,
        )
        betti = cohomology_dims(cc)
        assert betti == expected
        assert euler_characteristic(cc) == betti.b0 - betti.b1 + betti.b2


class TestOrientability:
    """Tests for the orientation search"""

    def test_no_cells(self, k4):
        assert is_orientable(CellComplex2(k4))

    def test_single_cell(self, triangle):
        assert find_orientation(make_complex(triangle, [(0, 1, 2)])) == {0: 1}

    def test_two_cells_sharing_an_edge(self, k4):
        orientation = find_orientation(make_complex(k4, [(0, 1, 2), (0, 1, 3)]))
        # both canonical traversals run 0 -> 1, so one of them flips
        assert orientation == {0: 1, 1: -1}

    def test_edge_in_three_cells(self, k4):
        assert not is_orientable(make_complex(k4, [(0, 1, 2), (0, 1, 3), (0, 1, 2, 3)]))

    def test_sphere(self, k4):
        assert is_orientable(make_complex(k4, TETRAHEDRON))

    def test_mobius_strip(self, k5):
        assert not is_orientable(make_complex(k5, MOBIUS_STRIP))


class TestComplexDocuments:
    """Tests for the JSON complex document"""

    def test_round_trip(self, golden_graph):
        cc = make_complex(golden_graph, [(0, 3, 5), (0, 3, 1, 4)])
        loaded, meta = load_complex(dump_complex(cc, {"seed": 3}))
        assert loaded == cc
        assert meta == {"seed": 3}

    def test_document_layout(self, triangle):
        data = json.loads(dump_complex(make_complex(triangle, [(2, 0, 1)])))
        assert data == {"n": 3, "edges": [[0, 1], [0, 2], [1, 2]], "cells": [[0, 1, 2]], "meta": {}}

    def test_cells_canonicalized_on_load(self, square):
        text = json.dumps({"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [0, 3]], "cells": [[2, 1, 0, 3]]})
        cc, meta = load_complex(text)
        assert cc.cells == (Cycle((0, 1, 2, 3)),)
        assert meta == {}

    def test_not_json(self):
        with pytest.raises(InvalidInputError):
            load_complex("{not json")

    def test_missing_keys(self):
        with pytest.raises(InvalidInputError, match="cells"):
            load_complex(json.dumps({"n": 3, "edges": []}))

    def test_invalid_cell(self):
        text = json.dumps({"n": 3, "edges": [[0, 1], [1, 2]], "cells": [[0, 1, 2]]})
        with pytest.raises(ValidationError):
            load_complex(text)

    def test_file_round_trip(self, tmp_path, k4):
        cc = make_complex(k4, TETRAHEDRON)
        path = write_complex(cc, str(tmp_path / "nested" / "cc.json"), {"run": "x"})
        assert path.exists()
        assert read_complex(str(path)) == (cc, {"run": "x"})


class TestAnalysisRecord:
    """Tests for the analyze record"""

    def test_tetrahedron(self, k4):
        record = analysis_record(make_complex(k4, TETRAHEDRON))
        assert record == {"b0": 1, "b1": 0, "b2": 1, "orientable": True, "n": 4, "m": 6, "k": 4}

    def test_complete_graph_without_cells(self):
        record = analysis_record(CellComplex2(generate(GraphModelSpec.complete(6))))
        assert record["b1"] == 10
        assert record["orientable"]

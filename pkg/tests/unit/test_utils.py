"""Unit tests for exact linear algebra, seeding and the ordered pool"""

import threading

import numpy as np
import pytest

from random_cc.monitoring.logging_config import run_id, set_run_id
from random_cc.utils.exact_linalg import bareiss_determinant, bareiss_rank, sparse_column_rank
from random_cc.utils.parallel import ordered_map
from random_cc.utils.seeding import SeedStream, derive_seed, make_rng


class TestBareissDeterminant:
    """Tests for the fraction-free determinant"""

    def test_empty(self):
        assert bareiss_determinant([]) == 1

    def test_small(self):
        assert bareiss_determinant([[2, 1], [1, 3]]) == 5

    def test_needs_row_swap(self):
        assert bareiss_determinant([[0, 1], [1, 0]]) == -1

    def test_singular(self):
        assert bareiss_determinant([[1, 2, 3], [2, 4, 6], [1, 0, 1]]) == 0

    def test_large_exact(self):
        """Test an upper triangular matrix with huge entries stays exact"""
        big = 10**30
        matrix = [[big, 1, 2], [0, big, 3], [0, 0, big]]
        assert bareiss_determinant(matrix) == big**3

    def test_matches_numpy(self):
        rng = make_rng(3)
        matrix = rng.integers(-5, 6, size=(6, 6))
        assert bareiss_determinant(matrix.tolist()) == round(np.linalg.det(matrix))

    def test_not_square(self):
        with pytest.raises(ValueError):
            bareiss_determinant([[1, 2], [3, 4], [5, 6]])


class TestRank:
    """Tests for the dense and sparse rank routines"""

    def test_dense_rank(self):
        assert bareiss_rank([[1, 2, 3], [2, 4, 6], [1, 0, 1]]) == 2
        assert bareiss_rank([[0, 0], [0, 0]]) == 0
        assert bareiss_rank([]) == 0

    def test_skipped_pivot_column(self):
        assert bareiss_rank([[0, 1, 2], [0, 2, 5], [0, 3, 7]]) == 2

    def test_sparse_rank(self):
        columns = [{0: 1, 1: -1}, {1: 1, 2: -1}, {0: 1, 2: -1}]
        assert sparse_column_rank(columns) == 2

    def test_sparse_ignores_zeros(self):
        assert sparse_column_rank([{0: 0}, {}, {3: 2}]) == 1

    @pytest.mark.parametrize("seed", range(5))
    def test_dense_and_sparse_agree(self, seed):
        rng = make_rng(seed)
        matrix = rng.integers(-2, 3, size=(8, 12)) * (rng.random((8, 12)) < 0.3)
        columns = [
            {r: int(matrix[r, c]) for r in range(8) if matrix[r, c]} for c in range(12)
        ]
        expected = int(np.linalg.matrix_rank(matrix))
        assert bareiss_rank(matrix.tolist()) == expected
        assert sparse_column_rank(columns) == expected


class TestSeeding:
    """Tests for seed derivation"""

    def test_deterministic(self):
        assert derive_seed(7, SeedStream.SAMPLING_TREES, 3) == derive_seed(7, SeedStream.SAMPLING_TREES, 3)

    def test_streams_differ(self):
        seeds = {derive_seed(7, stream) for stream in SeedStream}
        assert len(seeds) == len(SeedStream)

    def test_tree_indices_differ(self):
        seeds = {derive_seed(7, SeedStream.SAMPLING_TREES, i) for i in range(100)}
        assert len(seeds) == 100

    def test_make_rng_reproducible(self):
        assert make_rng(11).random(4).tolist() == make_rng(11).random(4).tolist()


class TestOrderedMap:
    """Tests for the ordered thread-pool map"""

    def test_sequential(self):
        assert ordered_map(lambda x: x * x, range(5)) == [0, 1, 4, 9, 16]

    def test_pool_keeps_order(self):
        assert ordered_map(lambda x: x * x, range(50), workers=4) == [x * x for x in range(50)]

    def test_context_follows_work(self):
        set_run_id("ctx-test")
        seen = ordered_map(lambda _: (run_id.get(), threading.get_ident()), range(8), workers=3)
        assert {rid for rid, _ in seen} == {"ctx-test"}

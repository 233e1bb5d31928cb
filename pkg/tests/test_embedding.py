import numpy as np
import pytest

from cvqudit import tensor_core as tc
from cvqudit.embedding import (block_generators, block_projector,
                               build_embedded, used_subspace_projector,
                               verify_embedded)
from cvqudit.su_algebra import build_generators


class TestBlockProjector:
    def test_off_diagonal_entry(self):
        p = block_projector(6, 2, 1, 1, 2)
        assert tc.triples_from_sparse(p) == [(2, 3, 1.0)]

    def test_diagonal_entry(self):
        p = block_projector(6, 2, 0, 1, 1)
        assert tc.triples_from_sparse(p) == [(0, 0, 1.0)]

    def test_block_out_of_range(self):
        # floor(7/3) = 2 blocks, so m <= 1
        with pytest.raises(ValueError):
            block_projector(7, 3, 2, 1, 2)

    def test_label_out_of_range(self):
        with pytest.raises(ValueError):
            block_projector(6, 2, 0, 0, 1)
        with pytest.raises(ValueError):
            block_projector(6, 2, 0, 1, 3)


class TestBuildEmbedded:
    def test_u12_positions_three_blocks(self):
        eg = build_embedded(6, 2)
        triples = tc.triples_from_sparse(eg.generators[0])
        assert [(r, c) for r, c, _ in triples] == [
            (0, 1), (1, 0), (2, 3), (3, 2), (4, 5), (5, 4)]
        assert all(v == 1.0 for _, _, v in triples)

    def test_unused_tail_dimension(self):
        eg = build_embedded(7, 3)
        assert eg.blocks == 2
        assert eg.tail == 1
        for g in eg.generators:
            dense = g.toarray()
            assert np.abs(dense[6, :]).max() == 0.0
            assert np.abs(dense[:, 6]).max() == 0.0

    def test_trace_relation_example(self):
        eg = build_embedded(6, 2)
        for i, a in enumerate(eg.generators):
            for j, b in enumerate(eg.generators):
                want = 6.0 if i == j else 0.0
                assert abs(tc.trace_product(a, b) - want) < 1e-12

    def test_bad_dimensions_rejected(self):
        with pytest.raises(ValueError):
            build_embedded(3, 4)
        with pytest.raises(ValueError):
            build_embedded(6, 1)

    def test_block_restriction_equals_small_generator(self):
        for N, n in [(6, 2), (10, 3), (9, 4)]:
            eg = build_embedded(N, n)
            small = build_generators(n).generators
            for g, s in zip(eg.generators, small):
                dense = g.toarray()
                for m in range(eg.blocks):
                    block = dense[n * m: n * (m + 1), n * m: n * (m + 1)]
                    assert np.array_equal(block, s)

    def test_pseudospin_structure_n2(self):
        # every S acts as the same 2x2 operator on every pair <2m, 2m+1>
        eg = build_embedded(12, 2)
        small = build_generators(2).generators
        for g, s in zip(eg.generators, small):
            dense = g.toarray()
            for m in range(6):
                assert np.array_equal(dense[2 * m: 2 * m + 2, 2 * m: 2 * m + 2], s)
        # and nothing off the block diagonal
        mask = np.ones((12, 12), dtype=bool)
        for m in range(6):
            mask[2 * m: 2 * m + 2, 2 * m: 2 * m + 2] = False
        for g in eg.generators:
            assert np.abs(g.toarray()[mask]).max() == 0.0

    def test_matches_per_block_sum(self):
        eg = build_embedded(10, 3)
        for j, g in enumerate(eg.generators):
            total = sum(block_generators(10, 3, m)[j] for m in range(eg.blocks))
            assert np.array_equal(g.toarray(), total.toarray())


class TestVerifyEmbedded:
    def test_two_pauli_blocks(self):
        assert verify_embedded(build_embedded(4, 2)) < 1e-14

    def test_qutrit_blocks(self):
        assert verify_embedded(build_embedded(9, 3)) < 1e-12

    def test_qutrit_with_tail(self):
        eg = build_embedded(10, 3)
        assert verify_embedded(eg) < 1e-12
        for g in eg.generators:
            assert np.abs(g.toarray()[9, :]).max() == 0.0

    @pytest.mark.parametrize("n", range(2, 7))
    def test_grid_residuals_and_traces(self, n):
        for N in range(n, 25, 3):
            eg = build_embedded(N, n)
            dense = np.stack([g.toarray() for g in eg.generators])
            gram = np.einsum("jab,kba->jk", dense, dense).real
            assert np.abs(gram - 2 * eg.blocks * np.eye(eg.dim)).max() < 1e-12
            assert np.abs(np.einsum("jaa->j", dense)).max() < 1e-12
            assert verify_embedded(eg) < 1e-12


class TestUsedSubspaceProjector:
    def test_divisible_case(self):
        assert np.array_equal(used_subspace_projector(6, 2).toarray(), np.eye(6))

    def test_tail_case(self):
        assert np.array_equal(np.diag(used_subspace_projector(7, 3).toarray()),
                              [1, 1, 1, 1, 1, 1, 0])

    def test_large_tail(self):
        assert np.array_equal(np.diag(used_subspace_projector(5, 4).toarray()),
                              [1, 1, 1, 1, 0])

    def test_rejects_like_build(self):
        with pytest.raises(ValueError):
            used_subspace_projector(3, 4)


def test_cross_block_commutators_vanish():
    g0 = block_generators(8, 2, 0)
    g3 = block_generators(8, 2, 3)
    for a in g0:
        for b in g3:
            assert (a @ b - b @ a).nnz == 0

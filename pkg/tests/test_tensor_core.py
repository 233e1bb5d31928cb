import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from cvqudit import tensor_core as tc

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)


def _complex_matrix(dim):
    elems = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
    return hnp.arrays(np.complex128, (dim, dim), elements=elems)


class TestKron:
    def test_identity_case(self):
        assert np.array_equal(tc.kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_sigma_x_with_identity(self):
        out = tc.kron(SX, np.eye(2))
        expected = np.zeros((4, 4))
        for i, j in [(0, 2), (1, 3), (2, 0), (3, 1)]:
            expected[i, j] = 1
        assert np.array_equal(out, expected)

    def test_trace_multiplicative(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        # independent oracle: direct dense computation
        assert abs(np.trace(tc.kron(a, b)) - np.trace(a) * np.trace(b)) < 1e-12

    @settings(max_examples=25, deadline=None)
    @given(_complex_matrix(2), _complex_matrix(2), _complex_matrix(3))
    def test_associative(self, a, b, c):
        # entry products are reassociated, so up to rounding only
        left = tc.kron(tc.kron(a, b), c)
        right = tc.kron(a, tc.kron(b, c))
        assert np.abs(left - right).max() < 1e-12

    def test_associative_exact_on_generators(self):
        from cvqudit.su_algebra import build_generators
        g = build_generators(2).generators
        left = tc.kron(tc.kron(g[0], g[1]), g[2])
        right = tc.kron(g[0], tc.kron(g[1], g[2]))
        assert np.array_equal(left, right)

    def test_sparse_inputs_give_sparse(self):
        out = tc.kron(tc.to_sparse(SX), tc.to_sparse(SX))
        assert sp.issparse(out)
        assert np.allclose(out.toarray(), np.kron(SX, SX))


class TestCommutator:
    def test_self_commutation(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert np.abs(tc.commutator(a, a)).max() == 0.0

    def test_pauli_xy(self):
        # hand multiplication: [sx, sy] = 2i sz
        out = tc.commutator(SX, SY)
        assert np.allclose(out, np.array([[2j, 0], [0, -2j]]), atol=1e-15)

    def test_pauli_x_with_v_generator(self):
        # v = -sy, so the bracket flips sign relative to [sx, sy]
        v = np.array([[0, 1j], [-1j, 0]])
        out = tc.commutator(SX, v)
        assert np.allclose(out, np.array([[-2j, 0], [0, 2j]]), atol=1e-15)

    def test_identity_commutes(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert np.abs(tc.commutator(a, np.eye(3, dtype=complex))).max() == 0.0

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            tc.commutator(np.eye(2, dtype=complex), np.eye(3, dtype=complex))

    @settings(max_examples=25, deadline=None)
    @given(_complex_matrix(3), _complex_matrix(3))
    def test_antisymmetric(self, a, b):
        assert np.array_equal(tc.commutator(a, b), -tc.commutator(b, a))


class TestTraceProduct:
    def test_identity(self):
        for n in (2, 3, 5):
            assert tc.trace_product(np.eye(n, dtype=complex), np.eye(n, dtype=complex)) == n

    def test_sigma_x_squared(self):
        assert abs(tc.trace_product(SX, SX) - 2.0) < 1e-15

    def test_matches_dense_product(self):
        rng = np.random.default_rng(13)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert abs(tc.trace_product(a, b) - np.trace(a @ b)) < 1e-12

    @settings(max_examples=25, deadline=None)
    @given(_complex_matrix(4), _complex_matrix(4))
    def test_symmetric(self, a, b):
        assert abs(tc.trace_product(a, b) - tc.trace_product(b, a)) < 1e-9 * (
            1 + abs(tc.trace_product(a, b)))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            tc.trace_product(np.eye(2, dtype=complex), np.eye(3, dtype=complex))


class TestExpectation:
    def test_ground_state_identity(self):
        ket = np.array([1, 0], dtype=complex)
        assert tc.expectation(ket, np.eye(2, dtype=complex)) == 1.0

    def test_maximally_mixed_traceless(self):
        assert tc.expectation(np.eye(2, dtype=complex) / 2, SX) == 0.0

    def test_bell_state_xx(self):
        phi = np.zeros(4, dtype=complex)
        phi[0] = phi[3] = 1 / np.sqrt(2)
        # hand computation: XX|phi+> = |phi+>
        assert abs(tc.expectation(phi, tc.kron(SX, SX)) - 1.0) < 1e-12

    def test_non_hermitian_rejected(self):
        ket = np.array([1, 0], dtype=complex)
        with pytest.raises(ValueError, match="Hermitian"):
            tc.expectation(ket, np.array([[0, 1], [0, 0]], dtype=complex))

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError, match="normalized"):
            tc.expectation(np.array([1, 1], dtype=complex), SX)
        with pytest.raises(ValueError, match="unit trace"):
            tc.expectation(np.eye(2, dtype=complex), SX)

    def test_sparse_observable(self):
        ket = np.array([1, 0], dtype=complex)
        assert tc.expectation(ket, tc.to_sparse(np.eye(2))) == 1.0


class TestSparse:
    def test_triple_round_trip(self):
        triples = [(0, 1, 1 + 2j), (2, 0, -1j), (3, 3, 0.5)]
        m = tc.sparse_from_triples(4, triples)
        assert tc.triples_from_sparse(m) == sorted(triples)

    def test_duplicate_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            tc.sparse_from_triples(2, [(0, 0, 1.0), (0, 0, 2.0)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            tc.sparse_from_triples(2, [(0, 2, 1.0)])

    def test_sparse_and_dense_application_agree(self):
        rng = np.random.default_rng(17)
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert np.abs(tc.to_sparse(a) @ v - a @ v).max() < 1e-12

"""Minimal complex linear algebra shared by every other module.

Dense operators are plain numpy arrays (complex128); the sparse
representation is scipy CSR built from (row, col, value) triples. All
functions are pure: inputs are never mutated, results are freshly
allocated, and everything is safe to share across threads.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

# Absolute tolerances: algebraic identities vs. expectation-value residues.
ALGEBRA_TOL = 1e-12
EXPECTATION_TOL = 1e-10


def as_matrix(entries) -> np.ndarray:
    """Coerce to a square complex matrix, rejecting anything non-square."""
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def as_vector(entries) -> np.ndarray:
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 1 or a.shape[0] < 1:
        raise ValueError(f"expected a vector, got shape {a.shape}")
    return a


def is_hermitian(a, tol: float = ALGEBRA_TOL) -> bool:
    if sp.issparse(a):
        d = a - a.conjugate().T
        return abs(d).max() <= tol if d.nnz else True
    a = np.asarray(a)
    return bool(np.abs(a - a.conj().T).max() <= tol)


def _check_same_dim(a, b) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def kron(a, b):
    """Kronecker product; sparse inputs give a sparse (CSR) result."""
    if sp.issparse(a) or sp.issparse(b):
        return sp.kron(a, b, format="csr")
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def commutator(a, b):
    """ab - ba for equal-dimension square matrices (dense or sparse)."""
    _check_same_dim(a, b)
    return a @ b - b @ a


def trace_product(a, b) -> complex:
    """Tr(ab) via sum_{j,k} a[j,k] b[k,j], without forming the product."""
    _check_same_dim(a, b)
    if sp.issparse(a) or sp.issparse(b):
        if not sp.issparse(a):
            a = sp.csr_matrix(a)
        return complex(a.multiply(b.T).sum())
    return complex(np.sum(a * b.T))


def expectation(state, obs) -> float:
    """Expectation value Tr(rho * obs) or <psi|obs|psi>.

    ``state`` is either a density matrix with unit trace or a normalized
    ket. ``obs`` must be Hermitian; a dense or sparse matrix is accepted.
    The imaginary residue is checked against EXPECTATION_TOL and then
    discarded.
    """
    if not is_hermitian(obs):
        raise ValueError("observable is not Hermitian")
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        if abs(np.linalg.norm(state) - 1.0) > ALGEBRA_TOL:
            raise ValueError("ket state is not normalized")
        if state.shape[0] != obs.shape[0]:
            raise ValueError("state/observable dimension mismatch")
        val = complex(np.vdot(state, obs @ state))
    elif state.ndim == 2:
        if abs(np.trace(state) - 1.0) > ALGEBRA_TOL:
            raise ValueError("density matrix does not have unit trace")
        if sp.issparse(obs):
            val = complex(obs.multiply(state.T).sum())
        else:
            val = trace_product(state, obs)
    else:
        raise ValueError("state must be a ket or a density matrix")
    if abs(val.imag) >= EXPECTATION_TOL:
        raise RuntimeError(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def sparse_from_triples(dim: int, triples) -> sp.csr_matrix:
    """Build a dim x dim CSR matrix from (row, col, value) triples.

    Duplicate (row, col) pairs are rejected rather than summed, so the
    triple list is a faithful representation of the entry set.
    """
    rows, cols, vals = [], [], []
    seen = set()
    for r, c, v in triples:
        if not (0 <= r < dim and 0 <= c < dim):
            raise ValueError(f"index ({r},{c}) out of range for dim {dim}")
        if (r, c) in seen:
            raise ValueError(f"duplicate entry at ({r},{c})")
        seen.add((r, c))
        rows.append(r)
        cols.append(c)
        vals.append(v)
    m = sp.coo_matrix((np.asarray(vals, dtype=complex), (rows, cols)),
                      shape=(dim, dim))
    return m.tocsr()


def triples_from_sparse(a) -> list[tuple[int, int, complex]]:
    """Entry set of a sparse matrix as sorted (row, col, value) triples."""
    coo = sp.coo_matrix(a)
    items = sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))
    return [(int(r), int(c), complex(v)) for r, c, v in items if v != 0]


def to_sparse(a) -> sp.csr_matrix:
    return a.tocsr() if sp.issparse(a) else sp.csr_matrix(np.asarray(a, dtype=complex))


def frozen(a: np.ndarray) -> np.ndarray:
    """Return a read-only view-owning copy; guards value semantics."""
    out = np.array(a)
    out.setflags(write=False)
    return out

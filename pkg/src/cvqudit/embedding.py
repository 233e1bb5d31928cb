"""Block embedding of the SU(n) algebra into an N-dimensional space.

The ambient space splits into floor(N/n) consecutive n-dimensional blocks
|nm>, ..., |nm+n-1>. Each block carries a copy of the n-dimensional
generators; their direct sum S_j acts on the full space and closes under
the same structure constants. When n does not divide N the trailing
N - n*floor(N/n) dimensions are annihilated by every S_j.

Embedded operators are stored sparsely (CSR): a bipartite lift at N = 128
would otherwise be a dense 16384^2 array.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import tensor_core as tc
from .su_algebra import GeneratorSet, algebra_residual, build_generators


@dataclass(frozen=True)
class EmbeddedGeneratorSet:
    """Direct-sum generators S_j on an N-dimensional ambient space."""
    N: int
    n: int
    blocks: int
    generators: tuple[sp.csr_matrix, ...]
    f: np.ndarray
    base: GeneratorSet

    @property
    def dim(self) -> int:
        return self.n * self.n - 1

    @property
    def tail(self) -> int:
        """Unused trailing dimensions (zero rows/columns of every S_j)."""
        return self.N - self.n * self.blocks


def _check_dims(N: int, n: int) -> int:
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n > N:
        raise ValueError(f"need n <= N, got n={n}, N={N}")
    return N // n


def block_projector(N: int, n: int, m: int, j: int, k: int) -> sp.csr_matrix:
    """Projector |nm+j><nm+k| on the N-dimensional space (1-based j, k).

    Diagonal entries j = k are permitted; the w-type block generators
    need them.
    """
    blocks = _check_dims(N, n)
    if not (0 <= m <= blocks - 1):
        raise ValueError(f"block index m={m} out of 0..{blocks - 1}")
    if not (1 <= j <= n and 1 <= k <= n):
        raise ValueError(f"labels ({j},{k}) out of 1..{n}")
    return tc.sparse_from_triples(N, [(n * m + j - 1, n * m + k - 1, 1.0)])


def block_generators(N: int, n: int, m: int) -> list[sp.csr_matrix]:
    """The n^2 - 1 generators of block m, canonical order, dim N."""
    blocks = _check_dims(N, n)
    if not (0 <= m <= blocks - 1):
        raise ValueError(f"block index m={m} out of 0..{blocks - 1}")
    small = build_generators(n).generators
    out = []
    for s in small:
        rows, cols = np.nonzero(s)
        triples = [(int(r) + n * m, int(c) + n * m, s[r, c]) for r, c in zip(rows, cols)]
        out.append(tc.sparse_from_triples(N, triples))
    return out


def build_embedded(N: int, n: int) -> EmbeddedGeneratorSet:
    """Direct sum S_j = sum_m s_j(m) over all floor(N/n) blocks."""
    blocks = _check_dims(N, n)
    base = build_generators(n)
    offsets = n * np.arange(blocks)
    gens = []
    for s in base.generators:
        rows, cols = np.nonzero(s)
        vals = s[rows, cols]
        all_rows = (rows[None, :] + offsets[:, None]).ravel()
        all_cols = (cols[None, :] + offsets[:, None]).ravel()
        all_vals = np.tile(vals, blocks)
        m = sp.coo_matrix((all_vals, (all_rows, all_cols)), shape=(N, N))
        gens.append(m.tocsr())
    return EmbeddedGeneratorSet(N=N, n=n, blocks=blocks,
                                generators=tuple(gens), f=base.f, base=base)


def used_subspace_projector(N: int, n: int) -> sp.csr_matrix:
    """Diagonal projector onto the n*floor(N/n) dimensions the blocks use."""
    blocks = _check_dims(N, n)
    diag = np.zeros(N)
    diag[: n * blocks] = 1.0
    return sp.diags(diag, format="csr")


def verify_embedded(eg: EmbeddedGeneratorSet) -> float:
    """Max residual of the commutator algebra for the embedded set.

    Also checks that generators of distinct blocks commute exactly
    (disjoint support). Densifies internally, so meant for moderate N.
    """
    dense = np.stack([g.toarray() for g in eg.generators])
    residual = algebra_residual(dense, np.asarray(eg.f))
    if eg.blocks >= 2:
        d = eg.dim
        for m, r in ((0, 1), (0, eg.blocks - 1)):
            gm = block_generators(eg.N, eg.n, m)
            gr = block_generators(eg.N, eg.n, r)
            for j in (0, d // 2, d - 1):
                for k in (0, d - 1):
                    cross = tc.commutator(gm[j], gr[k])
                    if cross.nnz:
                        residual = max(residual, float(abs(cross).max()))
    return residual

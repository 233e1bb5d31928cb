"""Truncated continuous-variable states in the Fock basis.

Covers the two-mode squeezed vacuum (squeezing parameter r, amplitudes
tanh^k r / cosh r on the diagonal |kk>), per-block maximally entangled
pair states, and the block mixture built from them. The idealized
perfectly correlated two-mode state is unnormalizable and is represented
here only through its regularizations: the squeezed state at large r and
the uniform finite-dimensional ket.

Default truncation is 64 Fock levels per mode, which keeps the lost tail
weight below 1e-3 up to r ~ 2.2; every constructed ket records its exact
tail mass so convergence can be audited.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tensor_core as tc

DEFAULT_TRUNC = 64


class EmptyProjectionError(ValueError):
    """Raised when a block projection of a ket carries zero weight."""


@dataclass(frozen=True)
class FockKet:
    """Normalized amplitude vector over a truncated multimode Fock basis.

    Two-mode entries are row-major in the first mode's photon number:
    index k1 * trunc + k2. ``tail_mass`` is the weight the untruncated
    state carries at or beyond the truncation, recorded before any
    renormalization.
    """
    modes: int
    trunc: int
    entries: np.ndarray
    tail_mass: float

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise ValueError(f"modes must be 1 or 2, got {self.modes}")
        if self.entries.shape != (self.trunc**self.modes,):
            raise ValueError(f"entry shape {self.entries.shape} does not match"
                             f" trunc={self.trunc}, modes={self.modes}")
        if abs(np.linalg.norm(self.entries) - 1.0) > tc.ALGEBRA_TOL:
            raise ValueError("ket is not normalized")
        if self.tail_mass < 0:
            raise ValueError("tail mass cannot be negative")
        self.entries.setflags(write=False)


@dataclass(frozen=True)
class BlockMixture:
    """Mixture of per-block maximally entangled pair states.

    ``weights[m]`` multiplies |psi(m)><psi(m)| with |psi(m)> the uniform
    n-term ket on block m of both modes. ``renorm_deficit`` records how
    much weight the truncation of the weight sequence discarded before
    renormalization. The full density matrix is never materialized;
    expectations are taken blockwise.
    """
    n: int
    weights: np.ndarray
    trunc: int
    renorm_deficit: float

    def __post_init__(self):
        if np.any(self.weights < 0):
            raise ValueError("weights must be nonnegative")
        if abs(self.weights.sum() - 1.0) > tc.ALGEBRA_TOL:
            raise ValueError("weights must sum to 1")
        if self.n * len(self.weights) > self.trunc:
            raise ValueError(f"{len(self.weights)} blocks of size {self.n}"
                             f" exceed truncation {self.trunc}")
        self.weights.setflags(write=False)

    def block_ket(self, m: int) -> np.ndarray:
        """|psi(m)> as a dense trunc^2 vector."""
        return max_entangled_block(self.n, m, self.trunc).entries


def nopa(r: float, trunc: int = DEFAULT_TRUNC, renormalize: bool = True) -> FockKet:
    """Two-mode squeezed vacuum, truncated at ``trunc`` levels per mode.

    Amplitudes tanh^k r / cosh r sit on the diagonal |kk>. The discarded
    tail has weight tanh^{2 trunc} r exactly (geometric series); with
    ``renormalize`` the kept amplitudes are rescaled to unit norm, which
    makes expectation values of bounded lifted operators converge
    monotonically in ``trunc``.
    """
    if r < 0:
        raise ValueError(f"squeezing parameter must be nonnegative, got {r}")
    if trunc < 1:
        raise ValueError(f"truncation must be at least 1, got {trunc}")
    t = np.tanh(r)
    k = np.arange(trunc)
    lam = t**k / np.cosh(r)
    tail = t**(2 * trunc)
    entries = np.zeros(trunc * trunc, dtype=complex)
    entries[k * trunc + k] = lam
    norm = np.linalg.norm(entries)
    if renormalize:
        entries /= norm
    elif abs(norm - 1.0) > tc.ALGEBRA_TOL:
        raise ValueError("truncated state is not normalized; pass renormalize=True")
    return FockKet(modes=2, trunc=trunc, entries=entries, tail_mass=float(tail))


def max_entangled_block(n: int, m: int, trunc: int) -> FockKet:
    """Uniform pair ket (1/sqrt(n)) sum_j |nm+j>|nm+j> on block m."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if m < 0 or n * (m + 1) > trunc:
        raise ValueError(f"block m={m} of size {n} does not fit in trunc={trunc}")
    entries = np.zeros(trunc * trunc, dtype=complex)
    j = n * m + np.arange(n)
    entries[j * trunc + j] = 1.0 / np.sqrt(n)
    return FockKet(modes=2, trunc=trunc, entries=entries, tail_mass=0.0)


def geometric_weights(lam: float, nblocks: int) -> np.ndarray:
    """First ``nblocks`` terms of p(m) = (1 - lam) lam^m, unnormalized."""
    if not (0 <= lam < 1):
        raise ValueError(f"need 0 <= lam < 1, got {lam}")
    return (1 - lam) * lam ** np.arange(nblocks)


def block_mixture_w(n: int, p, trunc: int = DEFAULT_TRUNC) -> BlockMixture:
    """Mixture of block pair states with weights ``p`` (renormalized)."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or len(p) < 1:
        raise ValueError("weight sequence must be a nonempty 1-d array")
    if np.any(p < 0):
        raise ValueError("weights must be nonnegative")
    total = p.sum()
    if total <= 0:
        raise ValueError("weights must not all vanish")
    return BlockMixture(n=n, weights=p / total, trunc=trunc,
                        renorm_deficit=float(1.0 - total))


def project_block(ket: FockKet, n: int, m1: int, m2: int) -> tuple[np.ndarray, float]:
    """Project a two-mode ket onto block (m1, m2) of size n x n.

    Returns the renormalized n^2 amplitude vector (row-major in the first
    mode) and the pre-normalization weight. A block with no weight raises
    EmptyProjectionError.
    """
    if ket.modes != 2:
        raise ValueError("block projection needs a two-mode ket")
    for m in (m1, m2):
        if m < 0 or n * (m + 1) > ket.trunc:
            raise ValueError(f"block m={m} of size {n} does not fit in trunc={ket.trunc}")
    grid = ket.entries.reshape(ket.trunc, ket.trunc)
    sub = grid[n * m1: n * (m1 + 1), n * m2: n * (m2 + 1)]
    weight = float(np.sum(np.abs(sub) ** 2))
    if weight == 0.0:
        raise EmptyProjectionError(f"no weight in block ({m1},{m2})")
    return sub.ravel() / np.sqrt(weight), weight

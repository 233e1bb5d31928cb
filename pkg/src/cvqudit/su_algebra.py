"""SU(n) generators in the transition-projector construction.

The n^2 - 1 generators come in three groups built from the projectors
|j><k| (1-based labels j, k mapped to 0-based indices internally):

    u_jk = |j><k| + |k><j|                       for j < k
    v_jk = i(|j><k| - |k><j|)                    for j < k
    w_l  = -sqrt(2/(l(l+1))) (|1><1| + ... + |l><l| - l |l+1><l+1|)

Canonical ordering is all u_jk by lexicographic (j, k), then all v_jk,
then w_1 .. w_{n-1}. For n = 2 this gives (sigma_x, -sigma_y, -sigma_z);
the signs are kept exactly as the construction produces them, since the
commutator algebra closes either way.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import tensor_core as tc


@dataclass(frozen=True)
class GeneratorSet:
    """The n^2 - 1 generators plus their structure constants.

    ``generators`` is a (n^2-1, n, n) complex array in canonical order;
    ``f`` the real (d, d, d) table with [s_j, s_k] = 2i f_jkl s_l.
    """
    n: int
    generators: np.ndarray
    f: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        self.generators.setflags(write=False)
        self.f.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.n * self.n - 1


def projector(n: int, j: int, k: int) -> np.ndarray:
    """Transition projector |j><k| with 1-based labels, n-dimensional."""
    if not (1 <= j <= n and 1 <= k <= n):
        raise ValueError(f"labels ({j},{k}) out of 1..{n}")
    p = np.zeros((n, n), dtype=complex)
    p[j - 1, k - 1] = 1.0
    return p


def _canonical_matrices(n: int) -> tuple[np.ndarray, tuple[str, ...]]:
    mats, labels = [], []
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            mats.append(projector(n, j, k) + projector(n, k, j))
            labels.append(f"u_{j}{k}")
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            mats.append(1j * (projector(n, j, k) - projector(n, k, j)))
            labels.append(f"v_{j}{k}")
    for l in range(1, n):
        w = np.zeros((n, n), dtype=complex)
        for i in range(1, l + 1):
            w += projector(n, i, i)
        w -= l * projector(n, l + 1, l + 1)
        mats.append(-np.sqrt(2.0 / (l * (l + 1))) * w)
        labels.append(f"w_{l}")
    return np.stack(mats), tuple(labels)


def structure_constants(gens) -> np.ndarray:
    """f_jkl = -(i/4) Tr([s_j, s_k] s_l), real part after a residue check."""
    g = gens.generators if isinstance(gens, GeneratorSet) else np.asarray(gens)
    comms = np.einsum("jab,kbc->jkac", g, g) - np.einsum("kab,jbc->jkac", g, g)
    f = -0.25j * np.einsum("jkab,lba->jkl", comms, g)
    residue = np.abs(f.imag).max()
    if residue >= tc.ALGEBRA_TOL:
        raise RuntimeError(f"structure constants have imaginary residue {residue:.3e}")
    return f.real


@lru_cache(maxsize=None)
def build_generators(n: int) -> GeneratorSet:
    """Construct the canonical generator set for dimension n >= 2."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    mats, labels = _canonical_matrices(n)
    return GeneratorSet(n=n, generators=mats, f=structure_constants(mats), labels=labels)


def algebra_residual(g: np.ndarray, f: np.ndarray) -> float:
    """Max entrywise |[s_j, s_k] - 2i sum_l f_jkl s_l| over all pairs."""
    comms = np.einsum("jab,kbc->jkac", g, g) - np.einsum("kab,jbc->jkac", g, g)
    recon = 2j * np.einsum("jkl,lab->jkab", f, g)
    return float(np.abs(comms - recon).max())


def verify_algebra(gens: GeneratorSet) -> float:
    return algebra_residual(np.asarray(gens.generators), np.asarray(gens.f))

"""Generalized Bloch decomposition and the qudit <-> big-space state map.

A Hermitian operator on L parties of dimension n expands over tensor
products of {identity, generators}; the real coefficient tensor t_{x1..xL}
(identity slot x = 0) is the generalized Bloch tensor. Observables carry
the same expansion restricted to all-generator indices; lifting replaces
each generator by its block-embedded counterpart S_x, which preserves all
expectation values against the class of big-space states sharing the
scaled coefficients T = t / blocks^L.

The inverse direction (induced qudit state of a big-space state) averages
the blocks: full-correlation components are <S_{x1} x ... x S_{xL}> / 2^L,
and identity slots use the used-subspace projector divided by n per slot.
That normalization is the unique one that makes block-diagonal class
members map back to their source state exactly; see the round-trip tests.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.sparse as sp

from . import tensor_core as tc
from .embedding import EmbeddedGeneratorSet, build_embedded, used_subspace_projector
from .su_algebra import build_generators

TAIL_WEIGHT_WARN = 1e-6

STATE = "state"
OBSERVABLE = "observable"


@dataclass(frozen=True)
class BlochTensor:
    """Real coefficient tensor of an L-party operator, shape (n^2,) * L.

    Index 0 of every axis is the identity slot. ``kind`` is "state" or
    "observable"; states satisfy coeffs[0,...,0] = 1/n^L.
    """
    n: int
    L: int
    kind: str
    coeffs: np.ndarray

    def __post_init__(self):
        if self.kind not in (STATE, OBSERVABLE):
            raise ValueError(f"unknown kind {self.kind!r}")
        expected = (self.n * self.n,) * self.L
        if self.coeffs.shape != expected:
            raise ValueError(f"coefficient shape {self.coeffs.shape} != {expected}")
        self.coeffs.setflags(write=False)

    def correlation_part(self) -> np.ndarray:
        """The all-generator block coeffs[1:, ..., 1:]."""
        return self.coeffs[(slice(1, None),) * self.L]

    def has_identity_components(self, tol: float = tc.ALGEBRA_TOL) -> bool:
        full = np.zeros_like(self.coeffs)
        full[(slice(1, None),) * self.L] = self.correlation_part()
        return bool(np.abs(self.coeffs - full).max() > tol)


@dataclass(frozen=True)
class ClassCoefficients:
    """Scaled all-generator coefficients T = t / blocks^L of a state class."""
    n: int
    L: int
    N: int
    T: np.ndarray

    def __post_init__(self):
        self.T.setflags(write=False)

    @property
    def blocks(self) -> int:
        return self.N // self.n


@dataclass(frozen=True)
class InducedState:
    """Result of mapping a big-space state down to n^L dimensions."""
    rho: np.ndarray
    min_eigenvalue: float
    unused_weight: float


def _basis_with_identity(n: int) -> np.ndarray:
    gens = build_generators(n).generators
    return np.concatenate([np.eye(n, dtype=complex)[None], gens])


def _kron_chain(mats):
    return reduce(tc.kron, mats)


def decompose(op, n: int, L: int, kind: str) -> BlochTensor:
    """Bloch tensor of a Hermitian operator on (C^n)^{x L}.

    Generator slots divide by 2, identity slots by n; that is forced by
    trace orthogonality of the basis, and makes reconstruct a two-sided
    inverse. For kind="state" the operator must additionally have unit
    trace.
    """
    op = tc.as_matrix(op)
    d = n**L
    if op.shape[0] != d:
        raise ValueError(f"operator dim {op.shape[0]} != n^L = {d}")
    if not tc.is_hermitian(op):
        raise ValueError("operator is not Hermitian")
    if kind == STATE and abs(np.trace(op) - 1.0) > tc.ALGEBRA_TOL:
        raise ValueError("state does not have unit trace")
    basis = _basis_with_identity(n)
    coeffs = np.empty((n * n,) * L)
    for idx in itertools.product(range(n * n), repeat=L):
        val = tc.trace_product(op, _kron_chain([basis[x] for x in idx]))
        norm = np.prod([n if x == 0 else 2 for x in idx])
        if abs(val.imag) >= tc.ALGEBRA_TOL * norm:
            raise RuntimeError(f"coefficient {idx} has imaginary residue {val.imag:.3e}")
        coeffs[idx] = val.real / norm
    return BlochTensor(n=n, L=L, kind=kind, coeffs=coeffs)


def reconstruct(t: BlochTensor) -> np.ndarray:
    """Sum of coeff * (basis tensor products); Hermitian by construction."""
    n, L = t.n, t.L
    basis = _basis_with_identity(n)
    out = np.zeros((n**L, n**L), dtype=complex)
    for idx in itertools.product(range(n * n), repeat=L):
        c = t.coeffs[idx]
        if c != 0.0:
            out += c * _kron_chain([basis[x] for x in idx])
    return out


def bloch_expectation(state: BlochTensor, obs: BlochTensor) -> float:
    """2^L sum over all-generator indices of t * a."""
    if (state.n, state.L) != (obs.n, obs.L):
        raise ValueError("state/observable shape mismatch")
    if state.kind != STATE or obs.kind != OBSERVABLE:
        raise ValueError("expected a state tensor and an observable tensor")
    return float(2**state.L * np.sum(state.correlation_part() * obs.correlation_part()))


def lift_observable(obs: BlochTensor, embedded: EmbeddedGeneratorSet) -> sp.csr_matrix:
    """Same coefficients over the embedded generators, as a sparse operator."""
    if obs.kind != OBSERVABLE:
        raise ValueError("only observables lift")
    if obs.n != embedded.n:
        raise ValueError(f"observable n={obs.n} vs embedding n={embedded.n}")
    if obs.has_identity_components():
        raise ValueError("identity-slot coefficients present; lift is all-generator only")
    N, L = embedded.N, obs.L
    corr = obs.correlation_part()
    out = sp.csr_matrix((N**L, N**L), dtype=complex)
    for idx in itertools.product(range(embedded.dim), repeat=L):
        a = corr[idx]
        if a != 0.0:
            out = out + a * _kron_chain([embedded.generators[x] for x in idx])
    return out


def class_coefficients(t: BlochTensor, N: int) -> ClassCoefficients:
    """T = t / floor(N/n)^L on the all-generator indices."""
    if t.kind != STATE:
        raise ValueError("class coefficients are defined for states")
    blocks = N // t.n
    if blocks < 1:
        raise ValueError(f"need N >= n, got N={N}, n={t.n}")
    return ClassCoefficients(n=t.n, L=t.L, N=N,
                             T=t.correlation_part() / blocks**t.L)


def class_expectation(T: ClassCoefficients, obs: BlochTensor) -> float:
    """(2 blocks)^L sum of T * a; equals the qudit-level expectation."""
    if (T.n, T.L) != (obs.n, obs.L):
        raise ValueError("class/observable shape mismatch")
    if obs.kind != OBSERVABLE:
        raise ValueError("expected an observable tensor")
    return float((2 * T.blocks)**T.L * np.sum(T.T * obs.correlation_part()))


def block_class_member(rho, n: int, N: int, weights) -> np.ndarray:
    """Explicit class member: weighted block copies of an L-party state.

    Places a copy of ``rho`` (dim n^L) into block (m, ..., m) of the
    N^L-dimensional space for each m, weighted by ``weights``. Any state
    built this way shares every lifted-observable expectation value with
    ``rho``.
    """
    rho = tc.as_matrix(rho)
    L = round(np.log(rho.shape[0]) / np.log(n))
    if n**L != rho.shape[0]:
        raise ValueError(f"state dim {rho.shape[0]} is not a power of n={n}")
    blocks = N // n
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1 or len(weights) > blocks:
        raise ValueError(f"need at most {blocks} weights, got {weights.shape}")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > tc.ALGEBRA_TOL:
        raise ValueError("weights must be nonnegative and sum to 1")
    out = np.zeros((N**L, N**L), dtype=complex)
    for m, p in enumerate(weights):
        if p == 0.0:
            continue
        iso = np.zeros((N, n), dtype=complex)
        iso[n * m: n * (m + 1), :] = np.eye(n)
        big_iso = _kron_chain([iso] * L) if L > 1 else iso
        out += p * (big_iso @ rho @ big_iso.conj().T)
    return out


def _raw_expectation(omega, op) -> float:
    """<op> without normalization checks; omega is a ket or density matrix."""
    if omega.ndim == 1:
        val = complex(np.vdot(omega, op @ omega))
    else:
        val = complex((op @ omega).diagonal().sum())
    if abs(val.imag) >= tc.EXPECTATION_TOL:
        raise RuntimeError(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def induced_qudit_state(omega, n: int, ambient_dim: int | None = None,
                        parties: int | None = None) -> InducedState:
    """Map a big-space state onto its n-dimensional qudit counterpart.

    ``omega`` may be a FockKet, a BlockMixture, a ket of dim N^L, or a
    density matrix on N^L; for raw arrays ``ambient_dim`` (per-party N)
    must be given and L is inferred. The minimum eigenvalue of the result
    is reported, not policed: the correspondence guarantees expectation
    values, not positivity for arbitrary input states. Weight outside the
    used block subspace (possible when n does not divide N) is recorded
    and warned about beyond 1e-6; the output is deliberately left
    subnormalized by exactly that weight.
    """
    from .cv_states import BlockMixture, FockKet  # circular at import time

    if isinstance(omega, BlockMixture):
        return _induced_from_mixture(omega, n)
    if isinstance(omega, FockKet):
        ambient_dim, parties = omega.trunc, omega.modes
        omega = omega.entries
    omega = np.asarray(omega, dtype=complex)
    if ambient_dim is None:
        raise ValueError("ambient_dim is required for raw array input")
    N = ambient_dim
    total = omega.shape[0]
    L = parties if parties is not None else round(np.log(total) / np.log(N))
    if N**L != total:
        raise ValueError(f"state dim {total} is not {N}^L for any integer L")
    if not (2 <= n <= N):
        raise ValueError(f"need 2 <= n <= N, got n={n}, N={N}")

    eg = build_embedded(N, n)
    pi = used_subspace_projector(N, n)
    slot_ops = [pi] + list(eg.generators)
    coeffs = np.empty((n * n,) * L)
    for idx in itertools.product(range(n * n), repeat=L):
        op = _kron_chain([slot_ops[x] for x in idx])
        norm = np.prod([n if x == 0 else 2 for x in idx])
        coeffs[idx] = _raw_expectation(omega, op) / norm
    rho = reconstruct(BlochTensor(n=n, L=L, kind=STATE, coeffs=coeffs))
    unused = 1.0 - _raw_expectation(omega, _kron_chain([pi] * L) if L > 1 else pi)
    unused = max(unused, 0.0)
    if unused > TAIL_WEIGHT_WARN:
        warnings.warn(f"state has weight {unused:.3e} outside the used block subspace;"
                      " induced state is subnormalized by that amount")
    return InducedState(rho=rho, min_eigenvalue=float(np.linalg.eigvalsh(rho).min()),
                        unused_weight=float(unused))


def _induced_from_mixture(mixture, n: int) -> InducedState:
    """Blockwise path: every block of the mixture is the same maximally
    entangled pair state, so the induced tensor is their weighted sum."""
    if mixture.n != n:
        raise ValueError(f"mixture has n={mixture.n}, requested {n}")
    phi = np.zeros((n * n,), dtype=complex)
    phi[:: n + 1] = 1.0 / np.sqrt(n)
    rho_block = np.outer(phi, phi.conj())
    t = decompose(rho_block, n, 2, STATE)
    coeffs = float(mixture.weights.sum()) * t.coeffs
    rho = reconstruct(BlochTensor(n=n, L=2, kind=STATE, coeffs=coeffs))
    return InducedState(rho=rho, min_eigenvalue=float(np.linalg.eigvalsh(rho).min()),
                        unused_weight=0.0)


def fidelity_with_pure(rho: np.ndarray, ket) -> float:
    """<psi|rho|psi> after trace-normalizing rho; comparison metric only."""
    ket = tc.as_vector(ket)
    ket = ket / np.linalg.norm(ket)
    tr = np.trace(rho).real
    if tr <= 0:
        raise ValueError("state has nonpositive trace")
    return float(np.real(np.vdot(ket, rho @ ket)) / tr)

"""Bell-inequality pipelines.

Two routes are implemented. For qutrits, the closed-form maximum of the
symmetric-beam-splitter Bell expression for a Schmidt-coefficient triple,

    B_max = 4 a1 a2 + (4/sqrt(3)) (a1 a3 + a2 a3),   a1 >= a2 >= a3,

applied to the coefficients the two-mode squeezed state induces; sweeping
the squeezing parameter reproduces the no-violation window below
r ~ 0.487, the maximum B = 2.9011 at r = 1.4998, and the large-r limit
2.872934 (the maximally entangled value). For qubits, the standard
two-setting CHSH operator over the canonical generator triple is lifted
into the truncated two-mode space and evaluated there.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tensor_core as tc
from .bloch_map import OBSERVABLE, BlochTensor, lift_observable
from .cv_states import BlockMixture, FockKet
from .embedding import build_embedded
from .su_algebra import GeneratorSet, build_generators

LOCAL_BOUND = 2.0
TSIRELSON = 2.0 * np.sqrt(2.0)
# Fu validity ceiling sqrt(6 + 3 sqrt(3)) / 2 ~ 1.673; any unit-norm
# triple is below it.
_FU_COEFF_CEILING = np.sqrt(6.0 + 3.0 * np.sqrt(3.0)) / 2.0
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def fu_bell_max(a) -> float:
    """Closed-form Bell maximum for a two-qutrit Schmidt triple.

    Magnitudes are sorted descending before the formula is applied, so the
    result is invariant under permutations and sign flips.
    """
    a = np.abs(np.asarray(a, dtype=float))
    if a.shape != (3,):
        raise ValueError(f"expected 3 Schmidt coefficients, got shape {a.shape}")
    if abs(np.linalg.norm(a) - 1.0) > 1e-12:
        raise ValueError("Schmidt coefficients must have unit 2-norm")
    a = np.sort(a)[::-1]
    if a[0] > _FU_COEFF_CEILING:
        raise RuntimeError("coefficient outside the formula's validity range")
    return float(4.0 * a[0] * a[1] + 4.0 / np.sqrt(3.0) * (a[0] * a[2] + a[1] * a[2]))


def nopa_qutrit_coeffs(r: float) -> np.ndarray:
    """(1, t, t^2)/sqrt(1 + t^2 + t^4) with t = tanh r."""
    if r < 0:
        raise ValueError(f"squeezing parameter must be nonnegative, got {r}")
    t = np.tanh(r)
    v = np.array([1.0, t, t * t])
    return v / np.linalg.norm(v)


def bell_value(r: float) -> float:
    """B(r) for the squeezed state's induced qutrit triple."""
    return fu_bell_max(nopa_qutrit_coeffs(r))


@dataclass(frozen=True)
class BellCurve:
    """B(r) sampled on a uniform grid."""
    r: np.ndarray
    b: np.ndarray
    grid: tuple[float, float, int]

    def __post_init__(self):
        self.r.setflags(write=False)
        self.b.setflags(write=False)


def bell_curve(r_min: float, r_max: float, steps: int) -> BellCurve:
    if not (0 <= r_min < r_max):
        raise ValueError(f"need 0 <= r_min < r_max, got [{r_min}, {r_max}]")
    if steps < 2:
        raise ValueError(f"need at least 2 grid points, got {steps}")
    r = np.linspace(r_min, r_max, steps)
    b = np.array([bell_value(ri) for ri in r])
    return BellCurve(r=r, b=b, grid=(float(r_min), float(r_max), int(steps)))


def find_max_violation(r_lo: float = 0.5, r_hi: float = 4.0) -> tuple[float, float]:
    """Locate the maximum of B(r) inside [r_lo, r_hi].

    A 200-point pre-scan must find an interior maximum (otherwise the
    bracket is rejected); golden-section refinement then narrows r to
    better than 1e-5.
    """
    if not (0 <= r_lo < r_hi):
        raise ValueError(f"invalid bracket [{r_lo}, {r_hi}]")
    grid = np.linspace(r_lo, r_hi, 200)
    values = np.array([bell_value(r) for r in grid])
    i = int(np.argmax(values))
    if i == 0 or i == len(grid) - 1:
        raise ValueError(f"no interior maximum of B in [{r_lo}, {r_hi}]")
    a, b = grid[i - 1], grid[i + 1]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = bell_value(c), bell_value(d)
    while b - a > 1e-5:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = bell_value(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = bell_value(d)
    r_star = 0.5 * (a + b)
    return float(r_star), float(bell_value(r_star))


def violation_threshold() -> float:
    """Squeezing at which B(r) crosses the local bound 2 (bisection).

    Resolved to 1e-11 in r so that B at the returned point matches the
    bound to better than 1e-9 (the expression's slope there is ~3.2).
    """
    lo, hi = 0.3, 0.7
    while hi - lo > 1e-11:
        mid = 0.5 * (lo + hi)
        if bell_value(mid) < LOCAL_BOUND:
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))


@dataclass(frozen=True)
class ChshSettings:
    """Four measurement directions over the canonical generator triple."""
    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    def __post_init__(self):
        for name, v in self.as_dict().items():
            if v.shape != (3,):
                raise ValueError(f"setting {name} must be a 3-vector")
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ValueError(f"setting {name} is not unit norm")
            v.setflags(write=False)

    def as_dict(self) -> dict[str, np.ndarray]:
        return {"a": self.a, "a_prime": self.a_prime,
                "b": self.b, "b_prime": self.b_prime}


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def textbook_settings() -> ChshSettings:
    """a = z, a' = x, b = (z+x)/sqrt2, b' = (z-x)/sqrt2 in canonical axes."""
    z = np.array([0.0, 0.0, 1.0])
    x = np.array([1.0, 0.0, 0.0])
    return ChshSettings(a=z, a_prime=x, b=_unit(z + x), b_prime=_unit(z - x))


def planar_settings(theta_a: float, theta_ap: float,
                    theta_b: float, theta_bp: float) -> ChshSettings:
    """Settings in the u-w plane, parametrized by angle from the w axis."""
    def vec(th):
        return np.array([np.sin(th), 0.0, np.cos(th)])
    return ChshSettings(a=vec(theta_a), a_prime=vec(theta_ap),
                        b=vec(theta_b), b_prime=vec(theta_bp))


def chsh_operator(settings: ChshSettings, gens: GeneratorSet) -> BlochTensor:
    """Coefficient tensor of the two-setting CHSH combination.

    (a.s)x(b.s) + (a.s)x(b'.s) + (a'.s)x(b.s) - (a'.s)x(b'.s) over the
    canonical qubit generator triple.
    """
    if gens.n != 2:
        raise ValueError(f"CHSH needs the n=2 generator set, got n={gens.n}")
    s = settings
    corr = (np.outer(s.a, s.b) + np.outer(s.a, s.b_prime)
            + np.outer(s.a_prime, s.b) - np.outer(s.a_prime, s.b_prime))
    coeffs = np.zeros((4, 4))
    coeffs[1:, 1:] = corr
    return BlochTensor(n=2, L=2, kind=OBSERVABLE, coeffs=coeffs)


def _two_mode_ket(omega: FockKet, trunc: int) -> np.ndarray:
    if omega.modes != 2:
        raise ValueError("CHSH evaluation needs a two-mode state")
    if omega.trunc > trunc:
        raise ValueError(f"truncation {trunc} too small for a ket on {omega.trunc} levels")
    if omega.trunc == trunc:
        return omega.entries
    padded = np.zeros((trunc, trunc), dtype=complex)
    padded[: omega.trunc, : omega.trunc] = omega.entries.reshape(omega.trunc, omega.trunc)
    return padded.ravel()


def chsh_cv_expectation(omega, settings: ChshSettings, trunc: int) -> float:
    """CHSH expectation of the lifted operator in a two-mode state.

    Pure kets are handled by sparse application; block mixtures blockwise,
    one sparse quadratic form per block.
    """
    eg = build_embedded(trunc, 2)
    lifted = lift_observable(chsh_operator(settings, build_generators(2)), eg)
    if isinstance(omega, BlockMixture):
        if omega.n != 2:
            raise ValueError(f"mixture has n={omega.n}, CHSH needs n=2")
        if omega.trunc > trunc:
            raise ValueError(f"truncation {trunc} too small for mixture on {omega.trunc} levels")
        total = 0.0
        for m, p in enumerate(omega.weights):
            ket = _two_mode_ket(FockKet(2, omega.trunc, omega.block_ket(m), 0.0), trunc)
            total += p * np.vdot(ket, lifted @ ket).real
        return float(total)
    ket = _two_mode_ket(omega, trunc)
    val = complex(np.vdot(ket, lifted @ ket))
    if abs(val.imag) >= tc.EXPECTATION_TOL:
        raise RuntimeError(f"CHSH expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def chsh_correlation_matrix(omega, trunc: int) -> np.ndarray:
    """E[x, y] = <S_x (x) S_y> for the n=2 embedding; feeds the optimizer."""
    eg = build_embedded(trunc, 2)
    out = np.empty((3, 3))
    if isinstance(omega, BlockMixture):
        kets = [FockKet(2, omega.trunc, omega.block_ket(m), 0.0)
                for m in range(len(omega.weights))]
        weights = omega.weights
    else:
        kets, weights = [omega], np.ones(1)
    for x in range(3):
        for y in range(3):
            op = tc.kron(eg.generators[x], eg.generators[y])
            out[x, y] = sum(p * np.vdot(_two_mode_ket(k, trunc),
                                        op @ _two_mode_ket(k, trunc)).real
                            for k, p in zip(kets, weights))
    return out


def _best_planar(corr: np.ndarray, grids) -> tuple[np.ndarray, float]:
    """Exhaustive CHSH maximization over four planar angle grids."""
    m = corr[np.ix_([0, 2], [0, 2])]  # u-w plane block

    def comps(th):
        return np.stack([np.sin(th), np.cos(th)], axis=1)

    ga, gap, gb, gbp = grids
    ea = comps(ga) @ m @ comps(gb).T       # (len a, len b)
    eabp = comps(ga) @ m @ comps(gbp).T
    eapb = comps(gap) @ m @ comps(gb).T
    eapbp = comps(gap) @ m @ comps(gbp).T
    total = (ea[:, None, :, None] + eabp[:, None, None, :]
             + eapb[None, :, :, None] - eapbp[None, :, None, :])
    flat = int(np.argmax(total))
    idx = np.unravel_index(flat, total.shape)
    angles = np.array([ga[idx[0]], gap[idx[1]], gb[idx[2]], gbp[idx[3]]])
    return angles, float(total[idx])


def optimize_planar_settings(omega, trunc: int,
                             coarse_deg: float = 15.0,
                             fine_deg: float = 1.0) -> tuple[ChshSettings, float]:
    """Two-stage planar angle search for the CHSH settings.

    Coarse full-circle scan followed by a fine scan around the winner.
    Deterministic (pure grid argmax); adequate because the correlations of
    the states in scope live in the u-w plane.
    """
    corr = chsh_correlation_matrix(omega, trunc)
    coarse = np.deg2rad(np.arange(0.0, 360.0, coarse_deg))
    angles, _ = _best_planar(corr, (coarse,) * 4)
    half = np.deg2rad(coarse_deg)
    step = np.deg2rad(fine_deg)
    fine_grids = tuple(np.arange(c - half, c + half + step / 2, step) for c in angles)
    angles, value = _best_planar(corr, fine_grids)
    return planar_settings(*angles), value

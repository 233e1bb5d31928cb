"""Command-line interface.

Subcommands: ``gens`` (generator dumps), ``verify`` (invariant suites),
``sweep`` (Bell-expression curve over squeezing), ``map-nopa`` (squeezed
state to qudit report), ``chsh`` (lifted CHSH evaluation).

Exit codes: 0 success, 1 invariant failure, 2 usage error, 3 I/O error.
Data goes to the output file (or standard output); diagnostics and
summaries that would contaminate piped data go to standard error.
"""
from __future__ import annotations

import argparse
import json
import multiprocessing
import sys

import numpy as np

from . import bell, bloch_map, cv_states, embedding, su_algebra
from . import tensor_core as tc

_ORDERING_NOTE = ("u_jk by lexicographic (j,k), then v_jk, then w_1..w_{n-1}")


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _dense_json(m: np.ndarray) -> list:
    return [[_pair(z) for z in row] for row in m]


def _sparse_json(m) -> dict:
    return {"dim": int(m.shape[0]),
            "triples": [[r, c, _pair(v)] for r, c, v in tc.triples_from_sparse(m)]}


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_gens(args) -> int:
    if args.n < 2:
        raise ValueError(f"need n >= 2, got {args.n}")
    gens = su_algebra.build_generators(args.n)
    doc: dict = {"metadata": {"n": args.n, "N": None, "blocks": None,
                              "ordering": _ORDERING_NOTE}}
    if args.big_n is not None:
        eg = embedding.build_embedded(args.big_n, args.n)
        doc["metadata"]["N"] = eg.N
        doc["metadata"]["blocks"] = eg.blocks
        doc["matrices"] = [_sparse_json(g) for g in eg.generators]
    else:
        doc["matrices"] = [_dense_json(g) for g in gens.generators]
    doc["labels"] = list(gens.labels)
    doc["f"] = np.asarray(gens.f).tolist()
    _write_text(args.out, json.dumps(doc) + "\n")
    return 0


def _random_hermitian(rng, d: int) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (a + a.conj().T)


def _random_state(rng, d: int) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def cmd_verify(args) -> int:
    if args.max_n < 2 or args.max_big_n < 2:
        raise ValueError("bounds must be at least 2")
    rows: list[tuple[str, float, float]] = []

    for n in range(2, args.max_n + 1):
        g = su_algebra.build_generators(n)
        mats = np.asarray(g.generators)
        if args.corrupt:
            mats = mats.copy()
            mats[0, 0, 0] += 1e-3
        d = n * n - 1
        herm = float(np.abs(mats - mats.conj().transpose(0, 2, 1)).max())
        traces = float(np.abs(np.einsum("jaa->j", mats)).max())
        gram = np.einsum("jab,kba->jk", mats, mats).real
        gram_dev = float(np.abs(gram - 2.0 * np.eye(d)).max())
        algebra = su_algebra.algebra_residual(mats, np.asarray(g.f))
        rows += [(f"su(n={n}) hermiticity", herm, tc.ALGEBRA_TOL),
                 (f"su(n={n}) tracelessness", traces, tc.ALGEBRA_TOL),
                 (f"su(n={n}) trace orthonormality", gram_dev, tc.ALGEBRA_TOL),
                 (f"su(n={n}) algebra residual", algebra, tc.ALGEBRA_TOL)]

    for n in range(2, args.max_n + 1):
        for N in range(n, args.max_big_n + 1):
            eg = embedding.build_embedded(N, n)
            dense = np.stack([g.toarray() for g in eg.generators])
            d = eg.dim
            gram = np.einsum("jab,kba->jk", dense, dense).real
            gram_dev = float(np.abs(gram - 2.0 * eg.blocks * np.eye(d)).max())
            residual = embedding.verify_embedded(eg)
            tail_dev = 0.0
            if eg.tail:
                tail_dev = float(np.abs(dense[:, eg.n * eg.blocks:, :]).max())
                tail_dev = max(tail_dev, float(np.abs(dense[:, :, eg.n * eg.blocks:]).max()))
            rows += [(f"embed(N={N},n={n}) trace relation", gram_dev, tc.ALGEBRA_TOL),
                     (f"embed(N={N},n={n}) algebra residual", residual, tc.ALGEBRA_TOL),
                     (f"embed(N={N},n={n}) unused tail", tail_dev, tc.ALGEBRA_TOL)]

    rng = np.random.default_rng(20260810)
    for n in (2, 3):
        for L in (1, 2):
            h = _random_hermitian(rng, n**L)
            t = bloch_map.decompose(h, n, L, bloch_map.OBSERVABLE)
            rt = float(np.abs(bloch_map.reconstruct(t) - h).max())
            rows.append((f"bloch(n={n},L={L}) round trip", rt, tc.ALGEBRA_TOL))
            N = 2 * n + 1
            rho = _random_state(rng, n**L)
            raw = rng.random(n * n - 1) if L == 1 else rng.random((n * n - 1,) * 2)
            a = np.zeros((n * n,) * L)
            a[(slice(1, None),) * L] = raw
            obs = bloch_map.BlochTensor(n=n, L=L, kind=bloch_map.OBSERVABLE, coeffs=a)
            w = rng.random(N // n)
            omega = bloch_map.block_class_member(rho, n, N, w / w.sum())
            lhs = float(np.trace(rho @ bloch_map.reconstruct(obs)).real)
            lifted = bloch_map.lift_observable(obs, embedding.build_embedded(N, n))
            rhs = float((lifted @ omega).diagonal().sum().real)
            rows.append((f"correspondence(n={n},L={L},N={N})", abs(lhs - rhs), tc.EXPECTATION_TOL))

    ok = True
    width = max(len(name) for name, _, _ in rows)
    for name, residual, tol in rows:
        good = residual < tol
        ok = ok and good
        print(f"{name:<{width}}  {residual:12.3e}  tol {tol:8.1e}  "
              f"{'PASS' if good else 'FAIL'}")
    print(f"{'all checks passed' if ok else 'INVARIANT FAILURE'}")
    return 0 if ok else 1


def _sweep_grid(r_min: float, r_max: float, steps: int) -> np.ndarray:
    if not (0 <= r_min < r_max):
        raise ValueError(f"need 0 <= rmin < rmax, got [{r_min}, {r_max}]")
    if steps < 2:
        raise ValueError(f"need at least 2 steps, got {steps}")
    return np.linspace(r_min, r_max, steps)


def cmd_sweep(args) -> int:
    grid = _sweep_grid(args.rmin, args.rmax, args.steps)
    if args.jobs > 1:
        with multiprocessing.Pool(args.jobs) as pool:
            values = pool.map(bell.bell_value, grid.tolist(), chunksize=64)
    else:
        values = [bell.bell_value(r) for r in grid]
    if args.format == "json":
        doc = {"metadata": {"rmin": args.rmin, "rmax": args.rmax, "steps": args.steps},
               "points": [[float(r), float(b)] for r, b in zip(grid, values)]}
        _write_text(args.out, json.dumps(doc) + "\n")
    else:
        lines = ["r,B"] + [f"{r:.6f},{b:.6f}" for r, b in zip(grid, values)]
        _write_text(args.out, "\n".join(lines) + "\n")
    r_star, b_star = bell.find_max_violation()
    threshold = bell.violation_threshold()
    summary = (f"summary: max B={b_star:.6f} at r={r_star:.6f}; "
               f"B=2 threshold at r={threshold:.6f}\n")
    (sys.stdout if args.out else sys.stderr).write(summary)
    return 0


def _schmidt_coefficients(rho: np.ndarray, n: int) -> np.ndarray:
    """Schmidt triple of the dominant pure component of a two-party state."""
    vals, vecs = np.linalg.eigh(rho / np.trace(rho).real)
    psi = vecs[:, -1].reshape(n, n)
    sv = np.linalg.svd(psi, compute_uv=False)
    return sv / np.linalg.norm(sv)


def cmd_map_nopa(args) -> int:
    if args.r < 0 or args.n < 2 or args.trunc < args.n:
        raise ValueError("need r >= 0, n >= 2, trunc >= n")
    ket = cv_states.nopa(args.r, args.trunc)
    induced = bloch_map.induced_qudit_state(ket, args.n)
    projected, weight = cv_states.project_block(ket, args.n, 0, 0)
    fid = bloch_map.fidelity_with_pure(induced.rho, projected)
    coeffs = _schmidt_coefficients(induced.rho, args.n)
    print(f"r={args.r:g} n={args.n} trunc={args.trunc}")
    print("schmidt coefficients:", " ".join(f"{c:.6f}" for c in coeffs))
    print(f"fidelity vs block projection: {fid:.12f}")
    print(f"block-0 projection weight: {weight:.6e}")
    print(f"tail mass: {ket.tail_mass:.6e}")
    print(f"unused-subspace weight: {induced.unused_weight:.6e}")
    print(f"min eigenvalue of induced state: {induced.min_eigenvalue:.3e}")
    if args.n == 3:
        print(f"qutrit Bell expression: {bell.fu_bell_max(coeffs):.6f}")
    return 0


def _parse_mixture(spec: str, nblocks: int, trunc: int) -> cv_states.BlockMixture:
    kind, _, param = spec.partition(":")
    if kind != "geometric" or not param:
        raise ValueError(f"unsupported mixture spec {spec!r}; use geometric:LAMBDA")
    lam = float(param)
    return cv_states.block_mixture_w(2, cv_states.geometric_weights(lam, nblocks), trunc)


def cmd_chsh(args) -> int:
    if (args.r is None) == (args.mixture is None):
        raise ValueError("give exactly one of --r or --mixture")
    if args.r is not None:
        state = cv_states.nopa(args.r, args.trunc)
        label = f"NOPA r={args.r:g}"
        print(f"state: {label} (tail mass {state.tail_mass:.3e})")
    else:
        state = _parse_mixture(args.mixture, args.blocks, args.trunc)
        label = f"mixture {args.mixture} over {args.blocks} blocks"
        print(f"state: {label} (renorm deficit {state.renorm_deficit:.3e})")
    settings = bell.textbook_settings()
    value = bell.chsh_cv_expectation(state, settings, args.trunc)
    print(f"CHSH at textbook settings: {value:.6f}")
    refined, refined_value = bell.optimize_planar_settings(state, args.trunc)
    best = bell.chsh_cv_expectation(state, refined, args.trunc)
    print(f"CHSH after planar refinement: {best:.6f}")
    print(f"Tsirelson bound 2*sqrt(2) = {bell.TSIRELSON:.6f}")
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cvqudit",
                                description="qudit structure in truncated CV systems")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gens", help="dump generators (optionally block-embedded)")
    g.add_argument("--n", type=int, required=True, help="qudit dimension (>= 2)")
    g.add_argument("--N", dest="big_n", type=int, default=None,
                   help="ambient dimension for the embedded set")
    g.add_argument("--out", default=None, help="output path (default stdout)")
    g.set_defaults(func=cmd_gens)

    v = sub.add_parser("verify", help="run the invariant suites")
    v.add_argument("--max-n", type=int, default=6)
    v.add_argument("--max-N", dest="max_big_n", type=int, default=24)
    v.add_argument("--corrupt-for-test", dest="corrupt", action="store_true",
                   help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="Bell expression over a squeezing grid")
    s.add_argument("--rmin", type=float, default=0.0)
    s.add_argument("--rmax", type=float, default=6.0)
    s.add_argument("--steps", type=int, default=601)
    s.add_argument("--out", default=None, help="output path (default stdout)")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("map-nopa", help="map the squeezed state onto a qudit pair")
    m.add_argument("--r", type=float, required=True)
    m.add_argument("--n", type=int, default=3)
    m.add_argument("--trunc", type=int, default=cv_states.DEFAULT_TRUNC)
    m.set_defaults(func=cmd_map_nopa)

    c = sub.add_parser("chsh", help="lifted CHSH evaluation")
    c.add_argument("--r", type=float, default=None, help="squeezed-state parameter")
    c.add_argument("--mixture", default=None, help="e.g. geometric:0.5")
    c.add_argument("--blocks", type=int, default=16, help="mixture block count")
    c.add_argument("--trunc", type=int, default=cv_states.DEFAULT_TRUNC)
    c.set_defaults(func=cmd_chsh)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, cv_states.EmptyProjectionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

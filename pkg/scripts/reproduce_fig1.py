#!/usr/bin/env python3
"""Reproduce the Bell-expression-vs-squeezing figure.

Writes the two panels as CSV (low-squeezing window and full range) and
prints the three quantitative landmarks: the no-violation window, the
maximum, and the large-squeezing asymptote. Pass --plot to also render a
PNG with matplotlib.
"""
import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from cvqudit import bell  # noqa: E402


def write_panel(path: pathlib.Path, r_min: float, r_max: float, steps: int) -> None:
    curve = bell.bell_curve(r_min, r_max, steps)
    lines = ["r,B"] + [f"{r:.6f},{b:.6f}" for r, b in zip(curve.r, curve.b)]
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path} ({steps} points on [{r_min}, {r_max}])")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=pathlib.Path, default=pathlib.Path("fig1_data"))
    ap.add_argument("--plot", action="store_true", help="also render fig1.png")
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    write_panel(args.outdir / "fig1a.csv", 0.0, 0.5, 251)
    write_panel(args.outdir / "fig1b.csv", 0.0, 6.0, 601)

    threshold = bell.violation_threshold()
    r_star, b_star = bell.find_max_violation()
    asymptote = bell.bell_value(12.0)
    print(f"violation threshold: B crosses 2 at r = {threshold:.6f}")
    print(f"maximum:             B = {b_star:.6f} at r = {r_star:.6f}")
    print(f"asymptote (r=12):    B = {asymptote:.6f}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
        for ax, (lo, hi, steps) in ((ax1, (0.0, 0.5, 251)), (ax2, (0.0, 6.0, 601))):
            curve = bell.bell_curve(lo, hi, steps)
            ax.plot(curve.r, curve.b)
            ax.axhline(2.0, color="gray", lw=0.8, ls="--")
            ax.set_xlabel("squeezing r")
            ax.set_ylabel("B")
        ax2.plot([r_star], [b_star], "ro", ms=4)
        fig.tight_layout()
        fig.savefig(args.outdir / "fig1.png", dpi=150)
        print(f"wrote {args.outdir / 'fig1.png'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

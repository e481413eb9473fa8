"""Uncertainty product of the lambda = (2,2) coherent states over one period.

Writes one CSV per alpha (same schema as ``ecstates uncertainty``) and, with
--plot, a PNG of product(t) for every alpha (needs matplotlib).
"""
import argparse
import math
from pathlib import Path

from ecstates.cli import csv_name, write_csv
from ecstates.coherent import time_grid, uncertainty
from ecstates.partition_maya import Partition


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, nargs="+", default=[4.0, 8.0, 16.0])
    ap.add_argument("--points", type=int, default=201)
    ap.add_argument("--out", default="uncertainty_out")
    ap.add_argument("--plot", action="store_true")
    args = ap.parse_args()

    lam = Partition((2, 2))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    grid = time_grid(0.0, math.pi, args.points)
    reports = []
    for a in args.alpha:
        rep = uncertainty(lam, a, grid, sigma=2)
        write_csv(rep, out / csv_name(lam, a))
        reports.append(rep)
        print(f"alpha={a:g}  min={min(rep.product):.10f}  max={max(rep.product):.10f}  sup|p-1/4|={rep.max_deviation():.3e}")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4))
        for rep in reports:
            ax.plot(rep.time_grid, rep.product, label=f"alpha = {rep.alpha:g}")
        ax.axhline(0.25, color="k", lw=0.5)
        ax.set_xlabel("t")
        ax.set_ylabel("var_x * var_p")
        ax.legend()
        fig.tight_layout()
        fig.savefig(out / "uncertainty_lambda-2-2.png", dpi=150)
        print(f"plot -> {out / 'uncertainty_lambda-2-2.png'}")


if __name__ == "__main__":
    main()

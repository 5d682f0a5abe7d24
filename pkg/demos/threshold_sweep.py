"""A scaled-down threshold sweep: three code sizes, a coarse grid, and
enough trials to see the curves cross.

Run:  python3 demos/threshold_sweep.py          (about a minute)

The full-scale reproduction (four codes, p = 0.04..0.11 in steps of
0.005, 10000 trials per point, about six minutes) is:

    tgre simulate --code xz:3:1,xz:4:1,xz:5:1,xz:6:2 \
        --p 0.04:0.11:0.005 --trials 10000 --seed 42 --out sweep.csv

and lands the median pairwise crossing near 0.08.
"""

from __future__ import annotations

from tgre import DecoderConfig, build_xztgre, sweep_threshold


def main():
    codes = [build_xztgre(3, 1), build_xztgre(4, 1), build_xztgre(5, 1)]
    p_grid = [0.04, 0.055, 0.07, 0.085, 0.10]
    config = DecoderConfig(prior_p=0.05)

    report = sweep_threshold(codes, p_grid, config, trials=2000, seed=9)

    header = "p      " + "  ".join(f"{spec:>12s}" for spec in report.specs)
    print(header)
    for i, p in enumerate(report.p_grid):
        row = "  ".join(f"{report.curves[j][i].ler_slq_avg:12.4f}" for j in range(len(codes)))
        print(f"{p:.3f}  {row}")

    print()
    for small, big, crossing in report.crossings:
        where = "no crossing on this grid" if crossing is None else f"cross near p={crossing:.4f}"
        print(f"{small} vs {big}: {where}")
    if report.threshold is not None:
        print(f"\nmedian crossing (threshold estimate): {report.threshold:.4f}")
    else:
        print("\nno usable crossings -- widen the grid or raise trials")


if __name__ == "__main__":
    main()

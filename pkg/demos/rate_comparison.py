"""How much encoding rate the mixed family buys over planar surface codes
of comparable length -- the constant-rate family vs the 1/N family.

Run:  python3 demos/rate_comparison.py
CLI equivalent:  tgre rate --max-L 12
"""

from __future__ import annotations

from tgre import a_schedule, code_params
from tgre.cli import surface_comparator


def main():
    print("   L  a     N     k   rate   surface [[n,1,d]]  rate ratio")
    for L in range(2, 13):
        a = a_schedule(L)
        n, k, rate, _ = code_params("xztgre", L, a)
        d, size, srate = surface_comparator(n)
        ratio = rate / srate
        print(f"  {L:2d} {a:2d} {n:6d} {k:5d}  {str(rate):>5s}   "
              f"[[{size},1,{d}]]{'':6s} {str(ratio):>8s} ({float(ratio):6.1f}x)")

    # The schedule widens a as L grows, so the rate steps down (1/5, 1/9,
    # 1/17, ...) yet stays constant within each band, while any surface
    # code's rate decays like 1/N.  The last column therefore climbs.


if __name__ == "__main__":
    main()

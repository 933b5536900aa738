"""Walk through the staircase counterexample construction.

Builds the nested interval families, lifts the piecewise-linear square
pattern to a horizontal curve, and shows why no C^2 horizontal curve can
agree with it on a large set: the area-to-velocity ratio across deeper
and deeper components grows without bound instead of vanishing.

Run with:  python3 demos/demo_counterexample.py
"""

from fractions import Fraction as F

from heislusin import (
    build_curve,
    component_increments,
    default_params,
    good_pair_search,
    measure_report,
    straddle_ratio,
)
from heislusin.intervalsets import IntervalSet, rational_to_str


def main():
    depth = 10
    C = build_curve(default_params(depth))
    p = C.params

    print("== construction at depth %d ==" % depth)
    for n, lev in enumerate(C.I_levels, start=1):
        print(
            "level %2d: %4d components of width %s"
            % (n, len(lev.intervals), rational_to_str(2 * p.w(n)))
        )
    rep = measure_report(C)
    print(
        "total measure %s  (weighted-width budget %s <= 1/31)"
        % (rational_to_str(rep["measure_I"]), rational_to_str(rep["sum_2n_wn"]))
    )

    print("\n== exact vertical jumps ==")
    incs = component_increments(C)
    for n in (1, 2, 3):
        v = next(val for lev, _, val in incs if lev == n)
        print("level %d component: h-increment %s = 4 h_%d^2" % (n, v, n))

    print("\n== the divergence that kills C^2 approximation ==")
    print("ratio(n) = area discrepancy / velocity across a straddled")
    print("level-(n+1) component; extendable data would send it to 0.")
    for n in range(4, 10):
        r = straddle_ratio(C, n)
        flag = "  <-- first time 4^n h_(n+1) >= 2, so ratio >= 16" if (
            4**n * p.h(n + 1) >= 2 > 4 ** (n - 1) * p.h(n)
        ) else ""
        print("  n=%d: ratio %s ~ %.3f%s" % (n, r, float(r), flag))

    print("\n== straddling pairs exist at every level ==")
    for n in (1, 4, 8):
        x, y = good_pair_search(IntervalSet.unit(), C, n)
        print(
            "  n=%d: x=%s, y=%s, gap %s <= 2^-%d"
            % (n, rational_to_str(x), rational_to_str(y),
               rational_to_str(y - x), n)
        )
    print("\nsanity constant: 2/3 + 4/31 =", F(2, 3) + F(4, 31), "<= 4/5")


if __name__ == "__main__":
    main()

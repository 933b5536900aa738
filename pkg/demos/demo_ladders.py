"""Remainder ladders, approximate differentiability, and the sieve.

The counterexample's first component function f is twice differentiable
in the L^p sense at points like x = 1/3 — its normalized remainders
collapse along the scale ladder — and the Whitney sieve retains a set
of definite measure while excluding every construction component.

Run with:  python3 demos/demo_ladders.py
"""

from fractions import Fraction as F

from heislusin import (
    Polynomial,
    approx_density,
    build_curve,
    default_params,
    lp_remainder_ladder,
    whitney_sieve,
)
from heislusin.intervalsets import rational_to_str


def main():
    C = build_curve(default_params(12))
    f = C.curve.f
    x = F(1, 3)

    print("== L^p remainder ladder for f at x = 1/3 (m = 2, P = 0) ==")
    scales = [C.params.lam(n) for n in range(6, 11)]
    for p in (1, 2):
        rep = lp_remainder_ladder(f, Polynomial.zero(), x, 2, p, scales)
        print("p = %d:" % p)
        for s, v in zip(rep.scales, rep.values):
            print("  rho = %-14s value %.3e" % (rational_to_str(s), v))

    print("\n== approximate differentiability density at x = 1/3 ==")
    for eps in (F(1), F(1, 10), F(1, 100)):
        d = approx_density(f.derivative(), Polynomial.zero(), x, 1,
                           eps, C.params.lam(7))
        print("  eps = %-6s density %s ~ %.9f"
              % (rational_to_str(eps), rational_to_str(d), float(d)))

    print("\n== Whitney sieve on f (m = 2) ==")
    C10 = build_curve(default_params(10))
    centers = [
        (iv.lo + iv.hi) / 2
        for lev in C10.I_levels for iv in lev.intervals
    ]
    res = whitney_sieve(C10.curve.f, 2, F(2, 10), grid=2**12,
                        extra_points=centers)
    print("  retained measure:", rational_to_str(res.retained.measure()))
    print("  disjoint from all components:",
          not res.retained.intersects(C10.I_union))
    for n, excluded, budget in res.defects:
        print("  stage %d: newly excluded %.4f (budget %s)"
              % (n, float(excluded), rational_to_str(budget)))


if __name__ == "__main__":
    main()

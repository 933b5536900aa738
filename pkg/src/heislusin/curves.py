"""Piecewise-polynomial curves in the first Heisenberg group.

The vertical component of a horizontal curve is determined by the
horizontal pair through the signed-area integral
h(t) = h(a) + 2 int_a^t (f'g - g'f); `lift` realizes this exactly for
piecewise-polynomial inputs, and the residual functions quantify how far
an arbitrary curve is from satisfying it (to every derivative order).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .intervalsets import rational_to_str
from .jets import DEFAULT_LADDER, Jet, JetTriple
from .polynomials import (
    DEFAULT_TOL,
    CertifiedValue,
    Polynomial,
    abs_integral,
    sup_norm,
)


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class PiecewisePolynomial:
    """One real-valued piecewise polynomial on [breakpoints[0], breakpoints[-1]].

    Evaluation at an interior breakpoint uses the right piece; continuity
    is the caller's business (checked by `is_continuous`).
    """

    __slots__ = ("breakpoints", "pieces")

    def __init__(self, breakpoints: Sequence, pieces: Sequence[Polynomial]):
        bps = tuple(_q(t) for t in breakpoints)
        if len(bps) < 2 or any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing, >= 2")
        if len(pieces) != len(bps) - 1:
            raise ValueError("need exactly one piece per breakpoint gap")
        self.breakpoints = bps
        self.pieces = tuple(pieces)

    @property
    def domain(self):
        return self.breakpoints[0], self.breakpoints[-1]

    def piece_index(self, t) -> int:
        t = _q(t)
        lo, hi = self.domain
        if not lo <= t <= hi:
            raise ValueError("%s outside domain [%s, %s]" % (t, lo, hi))
        i = bisect.bisect_right(self.breakpoints, t) - 1
        return min(i, len(self.pieces) - 1)

    def __call__(self, t) -> Fraction:
        return self.pieces[self.piece_index(t)](t)

    def is_continuous(self) -> bool:
        for i, t in enumerate(self.breakpoints[1:-1], start=1):
            if self.pieces[i - 1](t) != self.pieces[i](t):
                return False
        return True

    def derivative(self, k: int = 1) -> "PiecewisePolynomial":
        return PiecewisePolynomial(
            self.breakpoints, [p.derivative(k) for p in self.pieces]
        )

    def integral(self, a, b) -> Fraction:
        a, b = _q(a), _q(b)
        if a > b:
            return -self.integral(b, a)
        total = Fraction(0)
        for i, p in enumerate(self.pieces):
            lo = max(a, self.breakpoints[i])
            hi = min(b, self.breakpoints[i + 1])
            if lo < hi:
                total += p.integral(lo, hi)
        return total

    def abs_power_integral(self, q: Polynomial, a, b, p: int,
                           tol: Fraction = DEFAULT_TOL) -> CertifiedValue:
        """integral over [a,b] of |self - q|^p, p a positive integer."""
        a, b = _q(a), _q(b)
        if p < 1:
            raise ValueError("p must be a positive integer")
        total = Fraction(0)
        exact = True
        error = Fraction(0)
        n = len(self.pieces)
        for i, piece in enumerate(self.pieces):
            lo = max(a, self.breakpoints[i])
            hi = min(b, self.breakpoints[i + 1])
            if lo >= hi:
                continue
            d = (piece - q) ** p
            if p % 2 == 0:
                total += d.integral(lo, hi)
            else:
                part = abs_integral(d, lo, hi, tol=tol / n)
                total += part.value
                exact = exact and part.exact
                error += part.error
        return CertifiedValue(total, exact, error)

    def refine_to(self, breakpoints) -> "PiecewisePolynomial":
        """Re-express on a finer breakpoint grid covering the same domain."""
        bps = tuple(_q(t) for t in breakpoints)
        if bps[0] != self.breakpoints[0] or bps[-1] != self.breakpoints[-1]:
            raise ValueError("refinement must preserve the domain")
        pieces = []
        for lo, hi in zip(bps, bps[1:]):
            mid = (lo + hi) / 2
            pieces.append(self.pieces[self.piece_index(mid)])
        return PiecewisePolynomial(bps, pieces)


def _merged_breakpoints(u: PiecewisePolynomial, v: PiecewisePolynomial):
    if u.domain != v.domain:
        raise ValueError("domains differ")
    return tuple(sorted(set(u.breakpoints) | set(v.breakpoints)))


@dataclass(frozen=True)
class PiecewiseCurve:
    """Curve (f, g, h) with shared breakpoints and polynomial pieces."""

    breakpoints: tuple
    f_pieces: tuple
    g_pieces: tuple
    h_pieces: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "breakpoints", tuple(_q(t) for t in self.breakpoints)
        )
        for name in ("f_pieces", "g_pieces", "h_pieces"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        n = len(self.breakpoints) - 1
        if not all(
            len(getattr(self, name)) == n
            for name in ("f_pieces", "g_pieces", "h_pieces")
        ):
            raise ValueError("component piece counts must match breakpoints")
        for comp in (self.f, self.g, self.h):
            if not comp.is_continuous():
                raise ValueError("curve components must be continuous")

    @property
    def f(self) -> PiecewisePolynomial:
        return PiecewisePolynomial(self.breakpoints, self.f_pieces)

    @property
    def g(self) -> PiecewisePolynomial:
        return PiecewisePolynomial(self.breakpoints, self.g_pieces)

    @property
    def h(self) -> PiecewisePolynomial:
        return PiecewisePolynomial(self.breakpoints, self.h_pieces)

    @property
    def domain(self):
        return self.breakpoints[0], self.breakpoints[-1]

    def __call__(self, t):
        i = self.f.piece_index(t)
        t = _q(t)
        return (
            self.f_pieces[i](t),
            self.g_pieces[i](t),
            self.h_pieces[i](t),
        )


def lift(f: PiecewisePolynomial, g: PiecewisePolynomial, h0=0) -> PiecewiseCurve:
    """Horizontal lift: h' = 2 (f'g - g'f) with h(t0) = h0, exactly."""
    if not f.is_continuous() or not g.is_continuous():
        raise ValueError("lift requires continuous horizontal components")
    bps = _merged_breakpoints(f, g)
    fr, gr = f.refine_to(bps), g.refine_to(bps)
    h_pieces = []
    acc = _q(h0)
    for i, (fp, gp) in enumerate(zip(fr.pieces, gr.pieces)):
        integrand = 2 * (fp.derivative() * gp - gp.derivative() * fp)
        A = integrand.antiderivative()
        lo = bps[i]
        h_pieces.append(A - A(lo) + Polynomial.constant(acc))
        acc = h_pieces[-1](bps[i + 1])
    return PiecewiseCurve(bps, fr.pieces, gr.pieces, tuple(h_pieces))


def _max_piece_sup(curve: PiecewiseCurve, defect_for_piece,
                   tol: Fraction = DEFAULT_TOL) -> Fraction:
    best = Fraction(0)
    for i in range(len(curve.breakpoints) - 1):
        d = defect_for_piece(i)
        if d.is_zero:
            continue
        sv = sup_norm(d, curve.breakpoints[i], curve.breakpoints[i + 1], tol=tol)
        best = max(best, sv.value + sv.error)
    return best


def horizontality_residual(curve: PiecewiseCurve,
                           tol: Fraction = DEFAULT_TOL) -> Fraction:
    """Max sup-norm over pieces of h' - 2(f'g - g'f); 0 iff horizontal."""

    def defect(i):
        fp, gp, hp = curve.f_pieces[i], curve.g_pieces[i], curve.h_pieces[i]
        return hp.derivative() - 2 * (fp.derivative() * gp - gp.derivative() * fp)

    return _max_piece_sup(curve, defect, tol)


def higher_horizontality_residual(curve: PiecewiseCurve, k: int,
                                  tol: Fraction = DEFAULT_TOL) -> Fraction:
    """Defect of the order-k differentiated horizontality identity."""
    if k < 1:
        raise ValueError("require k >= 1")

    def defect(i):
        fp, gp, hp = curve.f_pieces[i], curve.g_pieces[i], curve.h_pieces[i]
        acc = Polynomial.zero()
        for j in range(k):
            acc = acc + math.comb(k - 1, j) * (
                fp.derivative(k - j) * gp.derivative(j)
                - gp.derivative(k - j) * fp.derivative(j)
            )
        return hp.derivative(k) - 2 * acc

    return _max_piece_sup(curve, defect, tol)


# ---------------------------------------------------------------------------
# area discrepancy / velocity and the extendability report
# ---------------------------------------------------------------------------


def area_discrepancy(triple: JetTriple, a, b) -> Fraction:
    """Vertical gap A(a,b) between the prescribed H-increment and the
    signed area swept by the Taylor polynomials of F and G."""
    a, b = _q(a), _q(b)
    if a == b:
        raise ValueError("require distinct sites")
    TF = triple.F.taylor_poly(a)
    TG = triple.G.taylor_poly(a)
    swept = (TF.derivative() * TG - TG.derivative() * TF).integral(a, b)
    return (
        triple.H.value(b, 0)
        - triple.H.value(a, 0)
        - 2 * swept
        + 2 * triple.F.value(a, 0) * (triple.G.value(b, 0) - TG(b))
        - 2 * triple.G.value(a, 0) * (triple.F.value(b, 0) - TF(b))
    )


def velocity(triple: JetTriple, a, b, tol: Fraction = DEFAULT_TOL) -> Fraction:
    """Normalizer V(a,b) = (b-a)^{2m} + (b-a)^m int_a^b (|TF'| + |TG'|)."""
    a, b = _q(a), _q(b)
    if a >= b:
        raise ValueError("require a < b")
    m = triple.m
    TF = triple.F.taylor_poly(a)
    TG = triple.G.taylor_poly(a)
    total = (
        abs_integral(TF.derivative(), a, b, tol).value
        + abs_integral(TG.derivative(), a, b, tol).value
    )
    return (b - a) ** (2 * m) + (b - a) ** m * total


@dataclass
class ExtendabilityReport:
    """Finite-scale evidence for the three horizontal-extension conditions."""

    ladder: tuple
    whitney_profiles: dict  # component -> list of modulus values along ladder
    max_ode_residual: Fraction
    ratio_profile: list  # max A/V over pairs with gap <= delta (None if no pair)
    whitney_pass: bool
    ode_pass: bool
    ratio_pass: bool

    @property
    def verdict(self) -> bool:
        return self.whitney_pass and self.ode_pass and self.ratio_pass

    def to_json_obj(self) -> dict:
        def profile(vals):
            return [
                {
                    "delta": rational_to_str(d),
                    "value": None if v is None else repr(float(v)),
                }
                for d, v in zip(self.ladder, vals)
            ]

        return {
            "whitney": {k: profile(v) for k, v in self.whitney_profiles.items()},
            "max_ode_residual": repr(float(self.max_ode_residual)),
            "area_velocity_ratio": profile(self.ratio_profile),
            "conditions": {
                "whitney_fields": self.whitney_pass,
                "ode_constraints": self.ode_pass,
                "ratio_vanishes": self.ratio_pass,
            },
            "verdict": "pass" if self.verdict else "fail",
        }


def extendability_report(
    triple: JetTriple,
    ladder=DEFAULT_LADDER,
    tolerance: Fraction = Fraction(1, 10**6),
    tol: Fraction = DEFAULT_TOL,
) -> ExtendabilityReport:
    """Check the three jet conditions for extension to a C^m horizontal curve.

    Condition profiles are evaluated over a geometric delta-ladder; the
    uniform-vanishing condition on A/V passes when the ratio at the
    smallest populated scale is below `tolerance` and the profile is
    non-increasing over its last three populated steps.
    """
    ladder = tuple(_q(d) for d in ladder)
    if len(triple.sites) < 2:
        raise ValueError("need at least two sites")
    profiles = {
        "F": [triple.F.whitney_modulus(d) for d in ladder],
        "G": [triple.G.whitney_modulus(d) for d in ladder],
        "H": [triple.H.whitney_modulus(d) for d in ladder],
    }
    ode_max = triple.max_ode_residual()

    pairs = []
    for i, a in enumerate(triple.sites):
        for b in triple.sites[i + 1:]:
            av = area_discrepancy(triple, a, b)
            vv = velocity(triple, a, b, tol)
            pairs.append((b - a, abs(av) / vv))
    ratio_profile = []
    for d in ladder:
        vals = [r for gap, r in pairs if gap <= d]
        ratio_profile.append(max(vals) if vals else None)

    populated = [v for v in ratio_profile if v is not None]
    if populated:
        tail = populated[-3:]
        ratio_pass = populated[-1] <= tolerance and all(
            x >= y for x, y in zip(tail, tail[1:])
        )
    else:
        ratio_pass = True
    whitney_pass = all(
        profile[-1] <= tolerance for profile in profiles.values()
    )
    ode_pass = ode_max <= tolerance
    return ExtendabilityReport(
        ladder, profiles, ode_max, ratio_profile,
        whitney_pass, ode_pass, ratio_pass,
    )


# ---------------------------------------------------------------------------
# Hermite gap fill and horizontal repair
# ---------------------------------------------------------------------------


def hermite_two_point(a, va: Sequence, b, vb: Sequence) -> Polynomial:
    """Unique degree-(2m+1) polynomial with derivatives va at a, vb at b.

    va, vb list the derivative values of orders 0..m. Newton form on the
    repeated-node sequence (a,...,a,b,...,b), exact.
    """
    a, b = _q(a), _q(b)
    m = len(va) - 1
    if len(vb) != m + 1:
        raise ValueError("endpoint data must have equal length")
    nodes = [a] * (m + 1) + [b] * (m + 1)
    n = len(nodes)
    # divided-difference table with repeated nodes
    dd = [[Fraction(0)] * n for _ in range(n)]
    vals = [_q(v) for v in va] + [_q(v) for v in vb]
    for i in range(n):
        dd[i][0] = vals[0] if nodes[i] == a else vals[m + 1]
    dd0 = [vals[0] if nodes[i] == a else vals[m + 1] for i in range(n)]
    for i in range(n):
        dd[i][0] = dd0[i]
    for j in range(1, n):
        for i in range(n - j):
            if nodes[i + j] == nodes[i]:
                src = vals[j] if nodes[i] == a else vals[m + 1 + j]
                dd[i][j] = src / math.factorial(j)
            else:
                dd[i][j] = (dd[i + 1][j - 1] - dd[i][j - 1]) / (
                    nodes[i + j] - nodes[i]
                )
    poly = Polynomial.zero()
    basis = Polynomial.constant(1)
    for j in range(n):
        poly = poly + basis * dd[0][j]
        basis = basis * Polynomial((-nodes[j], 1))
    return poly


def hermite_gap_fill(triple: JetTriple) -> PiecewiseCurve:
    """Fill the gaps between consecutive sites with degree-(2m+1) Hermite
    interpolants of the F and G data, then lift the vertical component.

    The result is exactly horizontal and matches the F, G jets at every
    site; it generally misses the prescribed H jets, which is the whole
    obstruction the area discrepancy measures.
    """
    sites = triple.sites
    if len(sites) < 2:
        raise ValueError("need at least two sites")
    f_pieces, g_pieces = [], []
    for a, b in zip(sites, sites[1:]):
        f_pieces.append(
            hermite_two_point(
                a, triple.F.values[sites.index(a)],
                b, triple.F.values[sites.index(b)],
            )
        )
        g_pieces.append(
            hermite_two_point(
                a, triple.G.values[sites.index(a)],
                b, triple.G.values[sites.index(b)],
            )
        )
    f = PiecewisePolynomial(sites, f_pieces)
    g = PiecewisePolynomial(sites, g_pieces)
    return lift(f, g, triple.H.value(sites[0], 0))


def horizontal_repair_gap(triple: JetTriple, a, b) -> Fraction:
    """Vertical mismatch H(b) - h_lift(b) across one gap of the Hermite fill.

    h_lift starts from H(a); the mismatch is the part of the prescribed
    vertical increment the horizontal motion cannot supply.
    """
    a, b = _q(a), _q(b)
    sites = triple.sites
    ia = sites.index(a)
    if ia + 1 >= len(sites) or sites[ia + 1] != b:
        raise ValueError("a, b must be consecutive sites")
    fp = hermite_two_point(a, triple.F.values[ia], b, triple.F.values[ia + 1])
    gp = hermite_two_point(a, triple.G.values[ia], b, triple.G.values[ia + 1])
    integrand = 2 * (fp.derivative() * gp - gp.derivative() * fp)
    h_lift_b = triple.H.value(a, 0) + integrand.integral(a, b)
    return triple.H.value(b, 0) - h_lift_b

"""Dense univariate polynomials over exact rationals.

Root-dependent quantities (integral of |P|, sup norm on an interval) are
computed on an exact path when the relevant roots are rational, and
otherwise fall back to certified enclosures with a configurable absolute
error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .intervalsets import IntervalSet, rational_to_str

DEFAULT_TOL = Fraction(1, 10**12)


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Polynomial:
    """Polynomial with Fraction coefficients, index = power.

    Trailing zero coefficients are stripped; the zero polynomial has
    degree -1 by convention. Immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(())

    @staticmethod
    def constant(c) -> "Polynomial":
        return Polynomial((c,))

    @staticmethod
    def identity() -> "Polynomial":
        return Polynomial((0, 1))

    @staticmethod
    def from_roots(leading, roots) -> "Polynomial":
        p = Polynomial.constant(leading)
        for r in roots:
            p = p * Polynomial((-_q(r), 1))
        return p

    @staticmethod
    def from_taylor(coeffs, center) -> "Polynomial":
        """Expand sum c_k (y - center)^k into the monomial basis."""
        center = _q(center)
        p = Polynomial.zero()
        shift = Polynomial((-center, 1))
        power = Polynomial.constant(1)
        for c in coeffs:
            p = p + power * _q(c)
            power = power * shift
        return p

    # -- basic structure ------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "Polynomial(0)"
        terms = ["%s*y^%d" % (c, k) for k, c in enumerate(self.coeffs) if c != 0]
        return "Polynomial(%s)" % " + ".join(terms)

    def __call__(self, x):
        x = _q(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _q(other)
            return Polynomial(a * c for a in self.coeffs)
        if self.is_zero or other.is_zero:
            return Polynomial.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus -------------------------------------------------------

    def derivative(self, k: int = 1) -> "Polynomial":
        p = self
        for _ in range(k):
            p = Polynomial(c * i for i, c in enumerate(p.coeffs) if i >= 1)
        return p

    def antiderivative(self) -> "Polynomial":
        return Polynomial(
            [Fraction(0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)]
        )

    def integral(self, a, b) -> Fraction:
        F = self.antiderivative()
        return F(b) - F(a)

    def taylor_coeffs(self, x) -> list:
        """Coefficients c_k with P(y) = sum c_k (y - x)^k, by synthetic division."""
        x = _q(x)
        cs = list(self.coeffs)
        out = []
        while cs:
            quot = [Fraction(0)] * (len(cs) - 1)
            acc = cs[-1]
            for i in range(len(cs) - 2, -1, -1):
                quot[i] = acc
                acc = cs[i] + x * acc
            out.append(acc)
            cs = quot
        return out

    def divmod(self, other: "Polynomial"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(0, len(rem) - d)
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            f = rem[-1] / lead
            quot[k] = f
            for i in range(d + 1):
                rem[k + i] -= f * other.coeffs[i]
            rem.pop()
        return Polynomial(quot), Polynomial(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    # -- serialization --------------------------------------------------

    def to_json_obj(self) -> list:
        return [rational_to_str(c) for c in self.coeffs]

    @staticmethod
    def from_json_obj(obj) -> "Polynomial":
        return Polynomial(Fraction(c) for c in obj)


# ---------------------------------------------------------------------------
# root isolation
# ---------------------------------------------------------------------------


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a * (Fraction(1) / a.coeffs[-1])


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.degree <= 0:
        return p
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p
    return p // g


def _sturm_chain(s: Polynomial):
    chain = [s, s.derivative()]
    while not chain[-1].is_zero and chain[-1].degree > 0:
        chain.append(-(chain[-2] % chain[-1]))
    if chain[-1].is_zero:
        chain.pop()
    return chain


def _variations(chain, x) -> int:
    signs = []
    for p in chain:
        v = p(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def simplest_between(a: Fraction, b: Fraction) -> Fraction:
    """Fraction with the smallest denominator in the closed interval [a, b]."""
    a, b = _q(a), _q(b)
    if a > b:
        raise ValueError("empty interval")
    if a == b:
        return a
    if a <= 0 <= b:
        return Fraction(0)
    if b < 0:
        return -simplest_between(-b, -a)
    ca = math.ceil(a)
    if ca <= b:
        return Fraction(ca)
    # a and b share the same integer part
    fa = math.floor(a)
    return fa + 1 / simplest_between(1 / (b - fa), 1 / (a - fa))


@dataclass
class RootEnclosure:
    """One real root of a squarefree polynomial: exact or bracketed."""

    lo: Fraction
    hi: Fraction
    exact: Optional[Fraction] = None
    poly: Optional["Polynomial"] = None  # sign-changing witness for brackets

    @property
    def midpoint(self) -> Fraction:
        if self.exact is not None:
            return self.exact
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return Fraction(0) if self.exact is not None else self.hi - self.lo


def isolate_roots(p: Polynomial, a, b) -> list:
    """Isolate the distinct real roots of p in the open interval (a, b).

    Returns RootEnclosure items sorted left to right. Rational roots are
    detected exactly (endpoint hits, midpoint hits and simplest-fraction
    candidates during later refinement can sharpen the rest).
    """
    a, b = _q(a), _q(b)
    if p.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if a >= b or p.degree == 0:
        return []
    s = squarefree_part(p)
    # deflate rational roots at the endpoints so Sturm counts are clean
    found_interior = []
    for endpoint in (a, b):
        while s.degree >= 1 and s(endpoint) == 0:
            s = s // Polynomial((-endpoint, 1))
    while True:
        # any interior rational root hit mid-bisection triggers deflation
        hits, brackets = _isolate_squarefree(s, a, b)
        if hits:
            for r in hits:
                s = s // Polynomial((-r, 1))
                found_interior.append(r)
            continue
        # split any bracket straddling an already-deflated root so the
        # left-to-right order of enclosures is trustworthy
        for r in found_interior:
            split = []
            for lo, hi in brackets:
                if lo < r < hi:
                    side = (lo, r) if (s(lo) > 0) != (s(r) > 0) else (r, hi)
                    split.append(side)
                else:
                    split.append((lo, hi))
            brackets = split
        out = [RootEnclosure(r, r, r) for r in found_interior]
        out.extend(RootEnclosure(lo, hi, None, s) for lo, hi in brackets)
        out.sort(key=lambda e: e.midpoint)
        return out


def _isolate_squarefree(s: Polynomial, a: Fraction, b: Fraction):
    """One isolation pass; returns (exact_hits, brackets)."""
    if s.degree <= 0:
        return [], []
    chain = _sturm_chain(s)
    va, vb = _variations(chain, a), _variations(chain, b)
    hits, brackets = [], []
    stack = [(a, va, b, vb)]
    while stack:
        lo, vlo, hi, vhi = stack.pop()
        n = vlo - vhi
        if n <= 0:
            continue
        if n == 1:
            brackets.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if s(mid) == 0:
            hits.append(mid)
            return hits, []  # caller deflates and restarts
        vm = _variations(chain, mid)
        stack.append((lo, vlo, mid, vm))
        stack.append((mid, vm, hi, vhi))
    return hits, brackets


def refine_root(enc: RootEnclosure, width: Fraction) -> RootEnclosure:
    """Shrink a bracket below `width`, catching rational roots exactly.

    The bracket's witness polynomial changes sign exactly once inside it.
    """
    if enc.exact is not None:
        return enc
    s = enc.poly
    lo, hi = enc.lo, enc.hi
    sign_lo = s(lo) > 0
    while hi - lo > width:
        cand = simplest_between(lo, hi)
        if lo < cand < hi and s(cand) == 0:
            return RootEnclosure(cand, cand, cand)
        mid = (lo + hi) / 2
        fm = s(mid)
        if fm == 0:
            return RootEnclosure(mid, mid, mid)
        if (fm > 0) == sign_lo:
            lo = mid
        else:
            hi = mid
    return RootEnclosure(lo, hi, None, s)


def _coeff_bound(p: Polynomial, a: Fraction, b: Fraction) -> Fraction:
    """Cheap upper bound for |p| on [a, b]."""
    m = max(abs(a), abs(b), Fraction(1))
    bound = Fraction(0)
    power = Fraction(1)
    for c in p.coeffs:
        bound += abs(c) * power
        power *= m
    return bound


# ---------------------------------------------------------------------------
# certified quantities
# ---------------------------------------------------------------------------


@dataclass
class CertifiedValue:
    """A rational value plus an exactness flag and error bound."""

    value: Fraction
    exact: bool
    error: Fraction

    def __float__(self):
        return float(self.value)

    def to_json_obj(self) -> dict:
        return {
            "value": rational_to_str(self.value),
            "exact": self.exact,
            "error_bound": rational_to_str(self.error),
        }


def abs_integral(p: Polynomial, a, b, tol: Fraction = DEFAULT_TOL) -> CertifiedValue:
    """Integral of |p| over [a, b].

    Exact whenever the sign changes of p inside (a, b) happen at rational
    points; otherwise correct to within `tol`.
    """
    a, b = _q(a), _q(b)
    if a > b:
        raise ValueError("require a <= b")
    if p.is_zero or a == b:
        return CertifiedValue(Fraction(0), True, Fraction(0))
    roots = isolate_roots(p, a, b)
    bound = _coeff_bound(p, a, b)
    exact = True
    breaks = [a]
    error = Fraction(0)
    if roots:
        budget = tol / (2 * len(roots))
        width = budget / (2 * bound) if bound > 0 else Fraction(1)
        for enc in roots:
            enc = refine_root(enc, width)
            if enc.exact is None:
                exact = False
                error += 2 * enc.width * bound
            breaks.append(enc.midpoint)
    breaks.append(b)
    F = p.antiderivative()
    total = Fraction(0)
    for lo, hi in zip(breaks, breaks[1:]):
        total += abs(F(hi) - F(lo))
    return CertifiedValue(total, exact, error)


def sup_norm(p: Polynomial, a, b, tol: Fraction = DEFAULT_TOL) -> CertifiedValue:
    """max over [a, b] of |p|, via endpoints and critical points."""
    a, b = _q(a), _q(b)
    if a > b:
        raise ValueError("require a <= b")
    if p.is_zero:
        return CertifiedValue(Fraction(0), True, Fraction(0))
    candidates = [abs(p(a)), abs(p(b))]
    exact = True
    error = Fraction(0)
    dp = p.derivative()
    if not dp.is_zero and dp.degree >= 1 and a < b:
        crits = isolate_roots(dp, a, b)
        if crits:
            dbound = _coeff_bound(dp, a, b)
            width = tol / dbound if dbound > 0 else Fraction(1)
            for enc in crits:
                enc = refine_root(enc, width)
                if enc.exact is not None:
                    candidates.append(abs(p(enc.exact)))
                else:
                    exact = False
                    error = max(error, enc.width * dbound)
                    candidates.append(abs(p(enc.midpoint)))
    return CertifiedValue(max(candidates), exact, error)


def intmax_ratio(p: Polynomial, a, b, tol: Fraction = DEFAULT_TOL) -> CertifiedValue:
    """Ratio of the average of |p| on [a, b] to its sup norm there.

    For p of degree n the ratio lies in [1/(8 n^2), 1]; constants have
    ratio exactly 1.
    """
    a, b = _q(a), _q(b)
    if p.is_zero:
        raise ValueError("ratio undefined for the zero polynomial")
    if a >= b:
        raise ValueError("require a < b")
    num = abs_integral(p, a, b, tol=tol * (b - a) / 4)
    den = sup_norm(p, a, b, tol=tol / 4)
    mean = num.value / (b - a)
    ratio = mean / den.value
    exact = num.exact and den.exact
    if exact:
        err = Fraction(0)
    else:
        den_lo = den.value - den.error
        if den_lo <= 0:
            den_lo = den.value / 2
        err = (num.error / (b - a)) / den_lo + mean * den.error / (den_lo * den.value)
    return CertifiedValue(ratio, exact, err)


def truncate_shifted(p: Polynomial, x, m: int) -> Polynomial:
    """Degree-<=m polynomial agreeing with p's Taylor expansion at x.

    The difference p - result is divisible by (y - x)^(m+1).
    """
    if m < 0:
        return Polynomial.zero()
    x = _q(x)
    cs = p.taylor_coeffs(x)[: m + 1]
    return Polynomial.from_taylor(cs, x)


def degiorgi_ratio(
    p: Polynomial, x, r, E: IntervalSet, k: int, tol: Fraction = DEFAULT_TOL
) -> CertifiedValue:
    """Diagnostic r^(1+k) |D^k p(x)| / integral_E |p|.

    Boundedness of this quantity over polynomials of fixed degree, for
    subsets E of [x-r, x+r] of measure at least A*r, is the content of
    the one-dimensional De Giorgi inequality. The constant itself is not
    asserted; callers record empirical maxima.
    """
    x, r = _q(x), _q(r)
    if r <= 0:
        raise ValueError("require r > 0")
    ball = IntervalSet.closed(x - r, x + r)
    if E.subtract(ball).measure() != 0:
        raise ValueError("E must be contained in [x-r, x+r]")
    if E.measure() == 0:
        raise ValueError("E must have positive measure")
    total = Fraction(0)
    exact = True
    error = Fraction(0)
    n_parts = max(1, len(E.intervals))
    for iv in E.intervals:
        part = abs_integral(p, iv.lo, iv.hi, tol=tol / n_parts)
        total += part.value
        exact = exact and part.exact
        error += part.error
    if total == 0:
        raise ValueError("integral of |p| over E vanishes")
    num = r ** (1 + k) * abs(p.derivative(k)(x))
    ratio = num / total
    if exact:
        return CertifiedValue(ratio, True, Fraction(0))
    lo = total - error
    if lo <= 0:
        lo = total / 2
    return CertifiedValue(ratio, False, num * error / (lo * total))

"""Jets of finite order on finite point sets, and their Taylor calculus.

A jet stores candidate derivative values (F^0, ..., F^m) at each site.
Whitney-type decay of the Taylor remainders is reported as a modulus
profile over a ladder of scales: a finite data set cannot certify a
little-o limit, only exhibit decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .intervalsets import rational_to_str
from .polynomials import Polynomial, truncate_shifted

DEFAULT_LADDER = tuple(Fraction(1, 2**j) for j in range(13))


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Jet:
    """Values (F^k)_{k=0..m} at finitely many strictly increasing sites."""

    m: int
    sites: tuple
    values: tuple  # one (m+1)-tuple of Fractions per site

    def __post_init__(self):
        sites = tuple(_q(x) for x in self.sites)
        values = tuple(tuple(_q(v) for v in row) for row in self.values)
        if any(a >= b for a, b in zip(sites, sites[1:])):
            raise ValueError("sites must be strictly increasing")
        if any(len(row) != self.m + 1 for row in values):
            raise ValueError("each value vector must have length m+1")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "values", values)

    @staticmethod
    def from_polynomial(p: Polynomial, sites: Sequence, m: int) -> "Jet":
        values = []
        for x in sites:
            values.append(tuple(p.derivative(k)(x) for k in range(m + 1)))
        return Jet(m, tuple(_q(x) for x in sites), tuple(values))

    def _index(self, a) -> int:
        a = _q(a)
        try:
            return self.sites.index(a)
        except ValueError:
            raise ValueError("%s is not a site of this jet" % a) from None

    def value(self, a, k: int) -> Fraction:
        if not 0 <= k <= self.m:
            raise ValueError("order k out of range")
        return self.values[self._index(a)][k]

    def taylor_poly(self, a) -> Polynomial:
        """Taylor polynomial of order m at the site a."""
        row = self.values[self._index(a)]
        a = _q(a)
        return Polynomial.from_taylor(
            [row[k] / math.factorial(k) for k in range(self.m + 1)], a
        )

    def remainder(self, a, b, k: int) -> Fraction:
        """Taylor remainder of order k at b, expanded at a."""
        if not 0 <= k <= self.m:
            raise ValueError("order k out of range")
        ia, ib = self._index(a), self._index(b)
        a, b = self.sites[ia], self.sites[ib]
        acc = self.values[ib][k]
        for ell in range(self.m - k + 1):
            acc -= (
                self.values[ia][k + ell] * (b - a) ** ell / math.factorial(ell)
            )
        return acc

    def whitney_modulus(self, delta) -> Fraction:
        """max over k and site pairs with 0 < |b-a| <= delta of
        |remainder| / |b-a|^(m-k); 0 if no pair qualifies."""
        delta = _q(delta)
        if delta <= 0:
            raise ValueError("delta must be positive")
        best = Fraction(0)
        n = len(self.sites)
        for ia in range(n):
            for ib in range(n):
                if ia == ib:
                    continue
                gap = abs(self.sites[ib] - self.sites[ia])
                if gap > delta:
                    continue
                for k in range(self.m + 1):
                    r = abs(self.remainder(self.sites[ia], self.sites[ib], k))
                    val = r / gap ** (self.m - k)
                    if val > best:
                        best = val
        return best

    def modulus_profile(self, ladder=DEFAULT_LADDER) -> list:
        return [(d, self.whitney_modulus(d)) for d in ladder]

    def to_json_obj(self) -> dict:
        return {
            "m": self.m,
            "sites": [
                {
                    "x": rational_to_str(x),
                    "F": [rational_to_str(v) for v in row],
                }
                for x, row in zip(self.sites, self.values)
            ],
        }

    @staticmethod
    def from_json_obj(obj: dict, key: str = "F") -> "Jet":
        m = int(obj["m"])
        sites, values = [], []
        for rec in obj["sites"]:
            sites.append(Fraction(rec["x"]))
            values.append(tuple(Fraction(v) for v in rec[key]))
        return Jet(m, tuple(sites), tuple(values))


@dataclass(frozen=True)
class JetTriple:
    """Jets (F, G, H) of a horizontal-curve candidate; shared sites and order."""

    F: Jet
    G: Jet
    H: Jet

    def __post_init__(self):
        if not (self.F.m == self.G.m == self.H.m):
            raise ValueError("jets must share order m")
        if not (self.F.sites == self.G.sites == self.H.sites):
            raise ValueError("jets must share sites")

    @property
    def m(self) -> int:
        return self.F.m

    @property
    def sites(self) -> tuple:
        return self.F.sites

    def ode_residual(self, a, k: int) -> Fraction:
        """Defect of the order-k horizontality constraint at the site a.

        Zero iff H^k(a) = 2 sum_i C(k-1,i) (F^(k-i) G^i - G^(k-i) F^i)(a).
        """
        if not 1 <= k <= self.m:
            raise ValueError("require 1 <= k <= m")
        a = _q(a)
        acc = Fraction(0)
        for i in range(k):
            acc += math.comb(k - 1, i) * (
                self.F.value(a, k - i) * self.G.value(a, i)
                - self.G.value(a, k - i) * self.F.value(a, i)
            )
        return self.H.value(a, k) - 2 * acc

    def max_ode_residual(self) -> Fraction:
        best = Fraction(0)
        for a in self.sites:
            for k in range(1, self.m + 1):
                best = max(best, abs(self.ode_residual(a, k)))
        return best

    @staticmethod
    def from_curve_samples(f: Polynomial, g: Polynomial, h: Polynomial,
                           sites: Sequence, m: int) -> "JetTriple":
        return JetTriple(
            Jet.from_polynomial(f, sites, m),
            Jet.from_polynomial(g, sites, m),
            Jet.from_polynomial(h, sites, m),
        )

    def to_json_obj(self) -> dict:
        return {
            "m": self.m,
            "sites": [
                {
                    "x": rational_to_str(x),
                    "F": [rational_to_str(v) for v in self.F.values[i]],
                    "G": [rational_to_str(v) for v in self.G.values[i]],
                    "H": [rational_to_str(v) for v in self.H.values[i]],
                }
                for i, x in enumerate(self.sites)
            ],
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "JetTriple":
        return JetTriple(
            Jet.from_json_obj(obj, "F"),
            Jet.from_json_obj(obj, "G"),
            Jet.from_json_obj(obj, "H"),
        )


def integrate_jet(p: Polynomial, f_at_x, x) -> Polynomial:
    """Q(y) = f(x) + integral from x to y of p."""
    x = _q(x)
    F = p.antiderivative()
    return F - F(x) + Polynomial.constant(_q(f_at_x))


def vertical_jet(p: Polynomial, q: Polynomial, h_at_x, x, m: int) -> Polynomial:
    """Degree-<=m truncation at x of h(x) + 2 int_x^y (p'q - q'p).

    This is the vertical component forced on an order-m jet by the
    horizontal data (p, q).
    """
    x = _q(x)
    integrand = p.derivative() * q - q.derivative() * p
    r = integrate_jet(2 * integrand, _q(h_at_x), x)
    return truncate_shifted(r, x, m)

"""An exact horizontal curve with no C^2 horizontal Lusin approximation.

The curve (f, g, h) concentrates vertical motion on a nested family of
tiny dyadic-centered intervals: on each level-n component, f and g trace
a square of side h_n, contributing exactly 4 h_n^2 to h, while off the
components f = g = 0 and h is flat. As the components shrink much faster
than the vertical increments, the increment over a component dwarfs every
power of its length — which is what any C^2 horizontal approximation
would have to match.

Everything here is exact rational arithmetic to a finite generation
depth; the reports verify the quantitative facts that drive the
obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .curves import PiecewiseCurve, PiecewisePolynomial, lift
from .intervalsets import Interval, IntervalSet, rational_to_str
from .jets import Jet, JetTriple
from .polynomials import Polynomial


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class CounterexampleParams:
    """Scale sequences h_n (square side), lambda_n (dilation radius),
    w_n (component radius), and the generation depth."""

    h_seq: Callable[[int], Fraction]
    lambda_seq: Callable[[int], Fraction]
    w_seq: Callable[[int], Fraction]
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        for name, seq in (
            ("h", self.h_seq), ("lambda", self.lambda_seq), ("w", self.w_seq)
        ):
            prev = None
            for n in range(1, self.depth + 1):
                v = _q(seq(n))
                if v <= 0:
                    raise ValueError("%s_%d must be positive" % (name, n))
                if prev is not None and v >= prev:
                    raise ValueError("%s sequence must be strictly decreasing" % name)
                prev = v
        for n in range(1, self.depth + 1):
            if _q(self.w_seq(n)) > Fraction(1, 2 ** (6 * n)):
                raise ValueError("need w_n <= 2^(-6n)")

    def h(self, n: int) -> Fraction:
        return _q(self.h_seq(n))

    def lam(self, n: int) -> Fraction:
        return _q(self.lambda_seq(n))

    def w(self, n: int) -> Fraction:
        return _q(self.w_seq(n))


def default_params(depth: int = 10) -> CounterexampleParams:
    """h_n = 3^-n, lambda_n = (2/5)^n, w_n = 2^(-n(n+6)).

    w decays super-geometrically so that the tail-sum smallness ratios
    decay for every fixed integrability exponent p, not just small ones.
    """
    return CounterexampleParams(
        h_seq=lambda n: Fraction(1, 3**n),
        lambda_seq=lambda n: Fraction(2**n, 5**n),
        w_seq=lambda n: Fraction(1, 2 ** (n * (n + 6))),
        depth=depth,
    )


@dataclass(frozen=True)
class CounterexampleCurve:
    """The built curve with its interval levels."""

    params: CounterexampleParams
    I_levels: tuple  # IntervalSet per level 1..depth
    curve: PiecewiseCurve

    @property
    def I_union(self) -> IntervalSet:
        out = IntervalSet.empty()
        for lev in self.I_levels:
            out = out.union(lev)
        return out

    def __call__(self, t):
        return self.curve(t)


# ---------------------------------------------------------------------------
# parameter diagnostics
# ---------------------------------------------------------------------------


def _decreasing_from(vals) -> Optional[int]:
    """Smallest index i such that vals[i:] is strictly decreasing; None if
    the sequence never settles into decrease."""
    n = len(vals)
    for i in range(n):
        if all(a > b for a, b in zip(vals[i:], vals[i + 1:])):
            return i
    return None


def check_params(params: CounterexampleParams, p_max: int = 4,
                 tail_terms: int = 30) -> dict:
    """Exact values of every smallness condition on the scale sequences.

    Tail sums over k > n are truncated to `tail_terms` terms; with the
    default super-geometric w this is far below any tolerance of
    interest. Each entry carries the list of values for n = 1..depth and
    the first index past which the sequence is strictly monotone in the
    required direction.
    """
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    N = params.depth
    ns = range(1, N + 1)

    lam_partial = []
    acc = Fraction(0)
    for n in ns:
        acc += 2**n * params.lam(n)
        lam_partial.append(acc)

    h_over_lam = [params.h(n) / params.lam(n) for n in ns]
    four_pow_h = [Fraction(4**n) * params.h(n) for n in ns]

    def tail(n, term):
        return sum(
            (Fraction(2) ** (k - n) * term(k)
             for k in range(n + 1, n + 1 + tail_terms)),
            Fraction(0),
        )

    h_tail_ratio = [
        tail(n, lambda k: params.h(k) ** 2) / params.lam(n + 1) ** 2 for n in ns
    ]
    w_tail_ratios = {
        p: [
            tail(n, lambda k: params.w(k) * params.h(k) ** p)
            / params.lam(n + 1) ** (2 * p + 1)
            for n in ns
        ]
        for p in range(1, p_max + 1)
    }

    report = {
        "depth": N,
        "lambda_partial_sums": {
            "values": lam_partial,
            "bounded_by_4": lam_partial[-1] <= 4,
        },
        "h_over_lambda": {
            "values": h_over_lam,
            "decreasing_from": _decreasing_from(h_over_lam),
        },
        "four_pow_times_h": {
            "values": four_pow_h,
            "increasing_from": _decreasing_from([-v for v in four_pow_h]),
        },
        "h_tail_ratio": {
            "values": h_tail_ratio,
            "decreasing_from": _decreasing_from(h_tail_ratio),
        },
        "w_tail_ratios": {
            p: {
                "values": vals,
                "decreasing_from": _decreasing_from(vals),
            }
            for p, vals in w_tail_ratios.items()
        },
    }
    return report


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def build_intervals(params: CounterexampleParams) -> list:
    """I_1..I_depth: level n+1 keeps the open interval of radius w_{n+1}
    around each dyadic center k/2^{n+1} that misses all earlier levels."""
    import bisect

    levels = []
    # chosen components so far, kept sorted as (lo, hi) pairs
    chosen = [(Fraction(1, 2) - params.w(1), Fraction(1, 2) + params.w(1))]
    levels.append(IntervalSet([Interval(*chosen[0], False, False)]))
    for n in range(2, params.depth + 1):
        w = params.w(n)
        kept = []
        for k in range(1, 2**n):
            c = Fraction(k, 2**n)
            lo, hi = c - w, c + w
            i = bisect.bisect_left(chosen, (lo, lo))
            # open intervals overlap iff lo < other.hi and hi > other.lo
            if i < len(chosen) and hi > chosen[i][0]:
                continue
            if i > 0 and chosen[i - 1][1] > lo:
                continue
            kept.append((lo, hi))
        levels.append(
            IntervalSet(Interval(lo, hi, False, False) for lo, hi in kept)
        )
        chosen = sorted(chosen + kept)
    return levels


def _linear_through(x0, y0, x1, y1) -> Polynomial:
    s = (y1 - y0) / (x1 - x0)
    return Polynomial((y0 - s * x0, s))


def build_curve(params: CounterexampleParams) -> CounterexampleCurve:
    """Assemble (f, g, h) on [0,1]: the four-piece square pattern of side
    h_n on every level-n component, zero in the gaps, h by exact lift."""
    levels = build_intervals(params)
    components = []  # (lo, hi, level)
    for n, lev in enumerate(levels, start=1):
        for iv in lev.intervals:
            components.append((iv.lo, iv.hi, n))
    components.sort()

    bps = [Fraction(0)]
    f_pieces, g_pieces = [], []
    zero = Polynomial.zero()
    t = Fraction(0)
    for lo, hi, n in components:
        if lo > t:
            bps.append(lo)
            f_pieces.append(zero)
            g_pieces.append(zero)
        hn = params.h(n)
        quarter = (hi - lo) / 4
        p = [lo + i * quarter for i in range(1, 5)]
        bps.extend(p)
        f_pieces += [
            zero,
            _linear_through(p[0], 0, p[1], hn),
            Polynomial.constant(hn),
            _linear_through(p[2], hn, p[3], 0),
        ]
        g_pieces += [
            _linear_through(lo, 0, p[0], hn),
            Polynomial.constant(hn),
            _linear_through(p[1], hn, p[2], 0),
            zero,
        ]
        t = hi
    if t < 1:
        bps.append(Fraction(1))
        f_pieces.append(zero)
        g_pieces.append(zero)

    f = PiecewisePolynomial(bps, f_pieces)
    g = PiecewisePolynomial(bps, g_pieces)
    curve = lift(f, g, 0)
    return CounterexampleCurve(params, tuple(levels), curve)


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------


def component_increments(C: CounterexampleCurve) -> list:
    """(level, component index, h(b) - h(a)) per component; each increment
    equals 4 h_n^2 exactly."""
    h = C.curve.h
    out = []
    for n, lev in enumerate(C.I_levels, start=1):
        for i, iv in enumerate(lev.intervals):
            out.append((n, i, h(iv.hi) - h(iv.lo)))
    return out


def measure_report(C: CounterexampleCurve) -> dict:
    """Exact measures of the interval levels and of the dilation shells
    A_n = (lambda_n-neighborhood of I_1..I_n) minus I, with the
    2 lambda_n (2^n - 1) upper bound checked per level."""
    params = C.params
    N = params.depth
    I_all = C.I_union
    two_pow_w = sum(
        (Fraction(2) ** n * params.w(n) for n in range(1, N + 1)), Fraction(0)
    )
    shells = []
    partial = IntervalSet.empty()
    for n in range(1, N + 1):
        partial = partial.union(C.I_levels[n - 1])
        lam = params.lam(n)
        A_n = partial.dilate(lam).subtract(I_all)
        bound = 2 * lam * Fraction(2**n - 1)
        shells.append({
            "n": n,
            "measure": A_n.measure(),
            "bound": bound,
            "within_bound": A_n.measure() <= bound,
            "set": A_n,
        })
    return {
        "sum_2n_wn": two_pow_w,
        "sum_2n_wn_le_1_31": two_pow_w <= Fraction(1, 31),
        "measure_I": I_all.measure(),
        "measure_le_sum": I_all.measure() <= two_pow_w,
        "shells": shells,
    }


def good_pair_search(E: IntervalSet, C: CounterexampleCurve,
                     n: int):
    """Find x < y in E minus all components, within 2^-n of each other,
    on opposite sides of some level-(n+1) component.

    Components are scanned left to right; on each side the admissible
    point nearest the component is chosen (interval endpoint when closed,
    midpoint otherwise). Returns (x, y) or None when no component admits
    a pair.
    """
    if n + 1 > C.params.depth:
        raise ValueError("need n + 1 <= depth")
    free = E.subtract(C.I_union)
    half = Fraction(1, 2 ** (n + 1))
    for iv in C.I_levels[n].intervals:
        c = (iv.lo + iv.hi) / 2
        left = free.intersect(IntervalSet.closed(c - half, iv.lo))
        right = free.intersect(IntervalSet.closed(iv.hi, c + half))
        if not left or not right:
            continue
        liv = left.intervals[-1]
        x = liv.hi if liv.hi_closed else (liv.lo + liv.hi) / 2
        riv = right.intervals[0]
        y = riv.lo if riv.lo_closed else (riv.lo + riv.hi) / 2
        if y - x <= Fraction(1, 2**n):
            return x, y
    return None


def straddle_ratio(C: CounterexampleCurve, n: int) -> Fraction:
    """Area-discrepancy to velocity ratio of the zero-horizontal jet pair
    straddling the first level-(n+1) component: exactly 4 (4^n h_{n+1})^2
    with the default scales.

    The pair sits symmetric about the component center at distance
    2^-(n+1); the vertical jet records the h-increment across the
    component and the horizontal jets are identically zero, so the
    discrepancy is the full increment 4 h_{n+1}^2 while the velocity
    normalizer is just the gap to the fourth power.
    """
    from .curves import area_discrepancy, velocity

    if n + 1 > C.params.depth:
        raise ValueError("need n + 1 <= depth")
    iv = C.I_levels[n].intervals[0]
    c = (iv.lo + iv.hi) / 2
    half = Fraction(1, 2 ** (n + 1))
    x, y = c - half, c + half
    h = C.curve.h
    zeros = ((0, 0, 0), (0, 0, 0))
    F = Jet(2, (x, y), zeros)
    G = Jet(2, (x, y), zeros)
    H = Jet(2, (x, y), ((h(iv.lo), 0, 0), (h(iv.hi), 0, 0)))
    triple = JetTriple(F, G, H)
    return area_discrepancy(triple, x, y) / velocity(triple, x, y)

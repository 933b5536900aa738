import random
from fractions import Fraction as F

import pytest

from heislusin.curves import (
    PiecewiseCurve,
    PiecewisePolynomial,
    area_discrepancy,
    extendability_report,
    hermite_gap_fill,
    hermite_two_point,
    higher_horizontality_residual,
    horizontal_repair_gap,
    horizontality_residual,
    lift,
    velocity,
)
from heislusin.jets import Jet, JetTriple
from heislusin.polynomials import Polynomial


def poly(*cs):
    return Polynomial(cs)


def single(p, a=0, b=1):
    return PiecewisePolynomial([a, b], [p])


def lifted(f, g, h0=0, a=0, b=1):
    return lift(single(f, a, b), single(g, a, b), h0)


def sample(curve, sites, m):
    h = curve.h
    return JetTriple(
        Jet(m, sites, tuple(
            tuple(curve.f.derivative(k)(s) if k else curve.f(s)
                  for k in range(m + 1)) for s in sites)),
        Jet(m, sites, tuple(
            tuple(curve.g.derivative(k)(s) if k else curve.g(s)
                  for k in range(m + 1)) for s in sites)),
        Jet(m, sites, tuple(
            tuple(h.derivative(k)(s) if k else h(s)
                  for k in range(m + 1)) for s in sites)),
    )


class TestPiecewisePolynomial:
    def test_right_continuous_piece_selection(self):
        pp = PiecewisePolynomial([0, F(1, 2), 1], [poly(0), poly(1)])
        assert pp(F(1, 2)) == 1
        assert pp(1) == 1  # last piece covers the right endpoint

    def test_integral_across_pieces(self):
        pp = PiecewisePolynomial([0, F(1, 2), 1], [poly(1), poly(3)])
        assert pp.integral(0, 1) == 2
        assert pp.integral(1, 0) == -2

    def test_continuity_check(self):
        cont = PiecewisePolynomial([0, F(1, 2), 1], [poly(0, 1), poly(0, 1)])
        jump = PiecewisePolynomial([0, F(1, 2), 1], [poly(0), poly(1)])
        assert cont.is_continuous() and not jump.is_continuous()


class TestLift:
    def test_diagonal_gives_constant(self):
        c = lifted(poly(0, 1), poly(0, 1))
        assert all(p == Polynomial.zero() for p in c.h_pieces)

    def test_parabola(self):
        c = lifted(poly(0, 1), poly(0, 0, 1))
        assert c.h(1) == F(-2, 3)
        assert c.h_pieces[0] == poly(0, 0, 0, F(-2, 3))

    def test_zero_f_keeps_h_constant(self):
        c = lifted(Polynomial.zero(), poly(2, -3, 1), h0=F(5, 7))
        assert all(p == poly(F(5, 7)) for p in c.h_pieces)

    def test_discontinuous_rejected(self):
        jump = PiecewisePolynomial([0, F(1, 2), 1], [poly(0), poly(1)])
        with pytest.raises(ValueError):
            lift(jump, single(poly(0, 1)))


class TestResiduals:
    def test_lift_output_is_horizontal(self):
        c = lifted(poly(0, 1, 2), poly(1, 0, 0, 1))
        assert horizontality_residual(c) == 0

    def test_diagonal_line_curve(self):
        t = poly(0, 1)
        c = PiecewiseCurve((0, 1), (t,), (t,), (t,))
        assert horizontality_residual(c) == 1
        assert higher_horizontality_residual(c, 1) == 1

    def test_flat_f_and_constant_h(self):
        c = PiecewiseCurve((0, 1), (poly(0),), (poly(2, -1),), (poly(3),))
        assert horizontality_residual(c) == 0

    def test_higher_orders_vanish_on_lift(self):
        c = lifted(poly(0, 1), poly(0, 0, 1))
        for k in range(1, 5):
            assert higher_horizontality_residual(c, k) == 0


class TestAreaVelocity:
    def test_zero_jets(self):
        z = Jet(2, (0, 1), ((0, 0, 0), (0, 0, 0)))
        t = JetTriple(z, z, z)
        assert area_discrepancy(t, 0, 1) == 0
        assert velocity(t, 0, 1) == 1  # (b-a)^4 alone

    def test_lifted_curve_has_zero_discrepancy(self):
        c = lifted(poly(0, 1), poly(0, 0, 1))
        t = sample(c, (0, F(1, 3), F(2, 3), 1), 2)
        for i, a in enumerate(t.sites):
            for b in t.sites[i + 1:]:
                assert area_discrepancy(t, a, b) == 0

    def test_velocity_linear_example(self):
        Fj = Jet(1, (0, 1), ((0, 1), (1, 1)))
        z = Jet(1, (0, 1), ((0, 0), (0, 0)))
        t = JetTriple(Fj, z, z)
        assert velocity(t, 0, 1) == 2

    def test_vertical_shift_invariance(self):
        c = lifted(poly(1, 2), poly(0, 1, 1))
        t = sample(c, (0, F(1, 2), 1), 2)
        shifted = JetTriple(
            t.F, t.G,
            Jet(2, t.sites, tuple(
                (row[0] + F(9, 4),) + row[1:] for row in t.H.values)),
        )
        for i, a in enumerate(t.sites):
            for b in t.sites[i + 1:]:
                assert area_discrepancy(t, a, b) == area_discrepancy(shifted, a, b)
                assert velocity(t, a, b) == velocity(shifted, a, b)

    def test_equal_sites_rejected(self):
        z = Jet(2, (0, 1), ((0, 0, 0), (0, 0, 0)))
        t = JetTriple(z, z, z)
        with pytest.raises(ValueError):
            area_discrepancy(t, 0, 0)
        with pytest.raises(ValueError):
            velocity(t, 1, 0)


class TestExtendabilityReport:
    def test_lifted_curve_passes(self):
        c = lifted(poly(0, 1), poly(0, 0, 1))
        t = sample(c, (0, F(1, 4), F(1, 2), F(3, 4), 1), 3)
        rep = extendability_report(t)
        assert rep.verdict
        assert rep.max_ode_residual == 0
        assert all(v == 0 for prof in rep.whitney_profiles.values() for v in prof)
        assert all(v in (0, None) for v in rep.ratio_profile)

    def test_perturbed_h1_fails_only_ode(self):
        c = lifted(poly(0, 1), poly(0, 0, 1))
        t = sample(c, (0, F(1, 2), 1), 3)
        rows = [list(r) for r in t.H.values]
        rows[1][1] += F(1, 100)  # break the first-order constraint at 1/2
        bad = JetTriple(t.F, t.G, Jet(3, t.sites, tuple(tuple(r) for r in rows)))
        rep = extendability_report(bad)
        assert not rep.ode_pass and not rep.verdict
        assert rep.max_ode_residual == F(1, 100)

    def test_report_serializes(self):
        c = lifted(poly(0, 1), poly(0, 1))
        t = sample(c, (0, 1), 2)
        obj = extendability_report(t).to_json_obj()
        assert obj["verdict"] == "pass"
        assert set(obj["conditions"]) == {
            "whitney_fields", "ode_constraints", "ratio_vanishes"
        }


class TestHermite:
    def test_reproduces_cubic(self):
        q = poly(1, -2, 0, 5)
        got = hermite_two_point(
            0, [q(0), q.derivative()(0)], 1, [q(1), q.derivative()(1)]
        )
        assert got == q

    def test_smoothstep(self):
        got = hermite_two_point(0, [0, 0], 1, [1, 0])
        assert got == poly(0, 0, 3, -2)

    def test_gap_fill_matches_derivatives_at_sites(self):
        rng = random.Random(5)
        sites = (0, F(1, 3), 1)
        m = 2
        rows = lambda: tuple(
            tuple(F(rng.randint(-4, 4)) for _ in range(m + 1)) for _ in sites
        )
        t = JetTriple(
            Jet(m, sites, rows()), Jet(m, sites, rows()),
            Jet(m, sites, tuple((F(rng.randint(-4, 4)), 0, 0) for _ in sites)),
        )
        filled = hermite_gap_fill(t)
        for gap, a in enumerate(sites[:-1]):
            for k in range(m + 1):
                assert filled.f_pieces[gap].derivative(k)(a) == t.F.value(a, k)
                assert filled.g_pieces[gap].derivative(k)(a) == t.G.value(a, k)
            b = sites[gap + 1]
            for k in range(m + 1):
                assert filled.f_pieces[gap].derivative(k)(b) == t.F.value(b, k)
                assert filled.g_pieces[gap].derivative(k)(b) == t.G.value(b, k)
        assert horizontality_residual(filled) == 0

    def test_repair_gap_zero_on_lifted_curve(self):
        c = lifted(poly(1, 1, -1), poly(0, 2, 1))
        t = sample(c, (0, F(1, 2), 1), 2)
        assert horizontal_repair_gap(t, 0, F(1, 2)) == 0
        assert horizontal_repair_gap(t, F(1, 2), 1) == 0

    def test_repair_gap_is_h_increment_for_zero_jets(self):
        z = Jet(1, (0, 1), ((0, 0), (0, 0)))
        H = Jet(1, (0, 1), ((3, 0), (8, 0)))
        t = JetTriple(z, z, H)
        assert horizontal_repair_gap(t, 0, 1) == 5

    def test_non_consecutive_rejected(self):
        c = lifted(poly(0, 1), poly(0, 1))
        t = sample(c, (0, F(1, 2), 1), 1)
        with pytest.raises(ValueError):
            horizontal_repair_gap(t, 0, 1)

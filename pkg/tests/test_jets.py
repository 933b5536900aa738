import random
from fractions import Fraction as F

import pytest

from heislusin.jets import Jet, JetTriple, integrate_jet, vertical_jet
from heislusin.polynomials import Polynomial


def poly(*cs):
    return Polynomial(cs)


CUBE = poly(0, 0, 0, 1)  # y^3


class TestTaylorPoly:
    def test_linear_data(self):
        a = F(1, 4)
        j = Jet(2, (a,), ((0, 1, 0),))
        assert j.taylor_poly(a) == Polynomial.from_taylor([0, 1], a)

    def test_zero_data(self):
        j = Jet(2, (0,), ((0, 0, 0),))
        assert j.taylor_poly(0) == Polynomial.zero()

    def test_degree_two_reproduced(self):
        sq = poly(0, 0, 1)
        j = Jet.from_polynomial(sq, [F(1, 2)], 2)
        assert j.taylor_poly(F(1, 2)) == sq

    def test_non_site_rejected(self):
        j = Jet(1, (0, 1), ((0, 0), (0, 0)))
        with pytest.raises(ValueError):
            j.taylor_poly(F(1, 2))


class TestRemainder:
    def test_low_degree_vanishes(self):
        p = poly(1, -2, 3)
        j = Jet.from_polynomial(p, [0, F(1, 3), 1], 2)
        for a in j.sites:
            for b in j.sites:
                for k in range(3):
                    assert j.remainder(a, b, k) == 0

    def test_top_order_is_difference(self):
        j = Jet.from_polynomial(CUBE, [0, F(1, 2)], 2)
        assert j.remainder(0, F(1, 2), 2) == CUBE.derivative(2)(F(1, 2))

    def test_cubic_bottom_order(self):
        t = F(1, 2)
        j = Jet.from_polynomial(CUBE, [0, t], 2)
        assert j.remainder(0, t, 0) == t**3

    def test_two_route_consistency(self):
        rng = random.Random(3)
        for _ in range(25):
            p = Polynomial([F(rng.randint(-5, 5)) for _ in range(6)])
            j = Jet.from_polynomial(p, [0, F(1, 3), F(4, 5)], 3)
            for a in j.sites:
                T = j.taylor_poly(a)
                for b in j.sites:
                    for k in range(4):
                        direct = j.remainder(a, b, k)
                        assert direct == j.value(b, k) - T.derivative(k)(b)


class TestWhitneyModulus:
    def test_low_degree_zero(self):
        j = Jet.from_polynomial(poly(1, 1, 1), [0, F(1, 2), 1], 2)
        for d in (F(1, 8), F(1, 2), 1):
            assert j.whitney_modulus(d) == 0

    def test_cubic_three_sites(self):
        # max over all pairs AND all orders k; the k=2 pair (0,1)
        # dominates with |6b - 6a| / |b-a|^0 = 6
        j = Jet.from_polynomial(CUBE, [0, F(1, 2), 1], 2)
        assert j.whitney_modulus(1) == 6
        assert j.whitney_modulus(F(1, 2)) == 3

    def test_monotone_in_delta(self):
        j = Jet.from_polynomial(CUBE, [0, F(1, 3), F(2, 3), 1], 2)
        profile = [j.whitney_modulus(F(1, 2**i)) for i in range(5)]
        assert all(a >= b for a, b in zip(profile, profile[1:]))

    def test_no_pair_in_range(self):
        j = Jet.from_polynomial(CUBE, [0, 1], 2)
        assert j.whitney_modulus(F(1, 2)) == 0


class TestOdeResidual:
    def test_zero_horizontal_jets(self):
        Z = Jet(2, (0, 1), ((0, 0, 0), (0, 0, 0)))
        H = Jet(2, (0, 1), ((5, 7, 11), (13, 17, 19)))
        t = JetTriple(Z, Z, H)
        for a in (0, 1):
            for k in (1, 2):
                assert t.ode_residual(a, k) == H.value(a, k)

    def test_diagonal_curve(self):
        # f = g = t gives f'g - g'f = 0, so h is constant
        ident = poly(0, 1)
        t = JetTriple.from_curve_samples(
            ident, ident, poly(4), [0, F(1, 2), 1], 2
        )
        assert t.max_ode_residual() == 0

    def test_k1_formula(self):
        F1 = Jet(2, (0,), ((2, 3, 0),))
        G1 = Jet(2, (0,), ((5, 7, 0),))
        H1 = Jet(2, (0,), ((0, 1, 0),))
        t = JetTriple(F1, G1, H1)
        assert t.ode_residual(0, 1) == 1 - 2 * (3 * 5 - 7 * 2)

    def test_k0_rejected(self):
        t = JetTriple.from_curve_samples(
            poly(0, 1), poly(0, 1), poly(0), [0, 1], 2
        )
        with pytest.raises(ValueError):
            t.ode_residual(0, 0)


class TestJetConstructions:
    def test_integrate_jet_example(self):
        q = integrate_jet(poly(0, 2), 1, 0)
        assert q == poly(1, 0, 1)

    def test_integrate_jet_constant(self):
        assert integrate_jet(Polynomial.zero(), F(3, 7), F(1, 2)) == poly(F(3, 7))

    def test_integrate_then_differentiate(self):
        rng = random.Random(11)
        for _ in range(100):
            p = Polynomial([F(rng.randint(-9, 9), rng.randint(1, 4))
                            for _ in range(rng.randint(1, 7))])
            x = F(rng.randint(-3, 3), rng.randint(1, 5))
            q = integrate_jet(p, F(rng.randint(-5, 5)), x)
            assert q.derivative() == p

    def test_vertical_jet_antisymmetric_cancellation(self):
        x = F(1, 3)
        shift = Polynomial.from_taylor([0, 1], x)
        assert vertical_jet(shift, shift, F(2, 5), x, 3) == poly(F(2, 5))

    def test_vertical_jet_zero_pair(self):
        z = Polynomial.zero()
        assert vertical_jet(z, z, 4, 0, 2) == poly(4)

    def test_vertical_jet_low_degree_no_truncation(self):
        p, q = poly(1, 2), poly(-1, 3)
        x = F(1, 4)
        full = integrate_jet(
            2 * (p.derivative() * q - q.derivative() * p), F(1, 2), x
        )
        assert vertical_jet(p, q, F(1, 2), x, 3) == full


class TestSerialization:
    def test_jet_round_trip(self):
        j = Jet.from_polynomial(CUBE, [0, F(1, 3)], 2)
        assert Jet.from_json_obj(j.to_json_obj()) == j

    def test_triple_round_trip(self):
        t = JetTriple.from_curve_samples(
            poly(0, 1), poly(0, 0, 1), poly(0, 0, 0, F(-2, 3)), [0, 1], 2
        )
        assert JetTriple.from_json_obj(t.to_json_obj()) == t

    def test_shape_matches_documented_schema(self):
        t = JetTriple.from_curve_samples(
            poly(0, 1), poly(0), poly(0), [F(1, 2)], 1
        )
        obj = t.to_json_obj()
        assert obj["m"] == 1
        assert obj["sites"][0]["x"] == "1/2"
        assert obj["sites"][0]["F"] == ["1/2", "1/1"]
        assert set(obj["sites"][0]) == {"x", "F", "G", "H"}

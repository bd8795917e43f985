import random

import pytest
from fractions import Fraction

from enrsurf.exactalg import (
    BadReduction, CannotCertifyIrreducible, GF, Gauss, ParseError, Place,
    Poly, QI, QQ, RatFunc, ZeroInput, factor_support, parse_poly,
    parse_ratfunc, reduce_mod_p, squarefree_part, valuation,
)


def P(text, field=QQ):
    return parse_poly(text, field)


def R(text, field=QQ):
    return parse_ratfunc(text, field)


class TestValuation:
    def test_simple_root(self):
        assert valuation(R("s^2+s"), Place.at(QQ, 0)) == 1

    def test_infinity_degree_convention(self):
        assert valuation(R("s^3"), Place.infinity()) == -3

    def test_squared_factor_with_denominator(self):
        assert valuation(R("(s-1)^2/(s+2)"), Place.at(QQ, 1)) == 2

    def test_zero_input(self):
        with pytest.raises(ZeroInput):
            valuation(RatFunc.const(QQ, 0), Place.at(QQ, 0))

    def test_additivity_randomized(self):
        rng = random.Random(7)
        places = [Place.at(QQ, 0), Place.at(QQ, 2), Place.infinity(),
                  Place.finite(P("s^2+1"))]
        for _ in range(60):
            f = Poly.make(QQ, [QQ.random(rng, 4) for _ in range(rng.randint(1, 5))])
            g = Poly.make(QQ, [QQ.random(rng, 4) for _ in range(rng.randint(1, 5))])
            if f.is_zero() or g.is_zero():
                continue
            for v in places:
                assert valuation(f * g, v) == valuation(f, v) + valuation(g, v)


class TestFactorization:
    def test_cyclotomic_split(self):
        got = [(str(p), m) for p, m in factor_support(P("s^4-1"))]
        assert sorted(got) == [("s+1", 1), ("s-1", 1), ("s^2+1", 1)]

    def test_mod5_split_of_s2_plus_1(self):
        got = sorted(str(p) for p, _ in factor_support(P("s^2+1", GF(5))))
        assert got == ["s+2", "s+3"]

    def test_repeated_factors(self):
        got = sorted((str(p), m) for p, m in factor_support(P("(s^2+s)^3")))
        assert got == [("s", 3), ("s+1", 3)]

    def test_roundtrip_randomized(self):
        rng = random.Random(11)
        for _ in range(40):
            f = Poly.make(QQ, [Fraction(rng.randint(-6, 6), rng.randint(1, 3))
                               for _ in range(rng.randint(2, 6))])
            if f.degree() < 1:
                continue
            try:
                parts = factor_support(f)
            except CannotCertifyIrreducible:
                continue
            prod = Poly.const(QQ, 1)
            for place, m in parts:
                prod = prod * place.poly ** m
            assert prod == f.monic()

    def test_roundtrip_fp(self):
        rng = random.Random(13)
        field = GF(7)
        for _ in range(40):
            f = Poly.make(field, [field.random(rng) for _ in range(rng.randint(2, 8))])
            if f.degree() < 1:
                continue
            prod = Poly.const(field, 1)
            for place, m in factor_support(f):
                prod = prod * place.poly ** m
            assert prod == f.monic()

    def test_gaussian_split(self):
        got = sorted(str(p) for p, _ in factor_support(P("s^2+1/4", QI)))
        assert got == ["s+1/2*i", "s-1/2*i"]

    def test_quartic_two_quadratics(self):
        # (s^2+s+1)(s^2-s+1) = s^4+s^2+1, no rational roots
        got = sorted(str(p) for p, _ in factor_support(P("s^4+s^2+1")))
        assert got == ["s^2+s+1", "s^2-s+1"]

    def test_irreducible_quartic_stays_whole(self):
        got = [(str(p), m) for p, m in factor_support(P("s^4+s+1"))]
        assert got == [("s^4+s+1", 1)]

    def test_degree_six_certified(self):
        # irreducible mod 11, so the three-prime certificate accepts it
        got = [(str(p), m) for p, m in factor_support(P("s^6-s-1"))]
        assert got == [("s^6-s-1", 1)]

    def test_degree_six_uncertifiable(self):
        # irreducible over Q but reducible mod 5, 7 and 11: the modular
        # certificate refuses rather than guessing
        with pytest.raises(CannotCertifyIrreducible):
            factor_support(P("s^6+s+1"))

    def test_squarefree_part_char_p(self):
        f = P("s^2+s", GF(2)) ** 2 * P("s+1", GF(2))
        assert squarefree_part(f) == P("s^2+s", GF(2)).monic()


class TestReduction:
    def test_reduce_coefficients(self):
        assert str(reduce_mod_p(P("3s^2 + 1/2"), 5)) == "3*s^2+3"

    def test_reduce_identity(self):
        assert str(reduce_mod_p(P("s^2+s"), 2)) == "s^2+s"

    def test_bad_reduction(self):
        with pytest.raises(BadReduction):
            reduce_mod_p(P("1/5"), 5)

    def test_commutes_with_ring_ops(self):
        rng = random.Random(3)
        for _ in range(30):
            f = Poly.make(QQ, [Fraction(rng.randint(-9, 9), rng.choice([1, 2, 3]))
                               for _ in range(4)])
            g = Poly.make(QQ, [Fraction(rng.randint(-9, 9), rng.choice([1, 2, 3]))
                               for _ in range(4)])
            try:
                fp, gp = reduce_mod_p(f, 7), reduce_mod_p(g, 7)
            except BadReduction:
                continue
            assert reduce_mod_p(f + g, 7) == fp + gp
            assert reduce_mod_p(f * g, 7) == fp * gp


class TestRingAxioms:
    @pytest.mark.parametrize("field", [QQ, QI, GF(5), GF(2)])
    def test_poly_axioms(self, field):
        rng = random.Random(17)
        for _ in range(40):
            a, b, c = (Poly.make(field, [field.random(rng, 3)
                                         for _ in range(rng.randint(1, 4))])
                       for _ in range(3))
            assert (a + b) * c == a * c + b * c
            assert (a * b) * c == a * (b * c)
            assert a + b == b + a

    def test_ratfunc_cancellation(self):
        rng = random.Random(19)
        for _ in range(25):
            a = Poly.make(QQ, [QQ.random(rng, 3) for _ in range(3)])
            b = Poly.make(QQ, [QQ.random(rng, 3) for _ in range(3)])
            c = Poly.make(QQ, [QQ.random(rng, 3) for _ in range(2)])
            if b.is_zero() or c.is_zero():
                continue
            lhs = RatFunc.make(a * c, b * c)
            assert lhs == RatFunc.make(a, b)


class TestParser:
    def test_example_literal(self):
        f = parse_ratfunc("3*s^2 + 1/2*s - i", QI)
        assert f.num.degree() == 2

    def test_whitespace_insensitive(self):
        assert P("s ^ 2 + s") == P("s^2+s")

    def test_unary_minus_binds_loosely(self):
        assert P("-s^6") == -P("s^6")

    def test_byte_offset(self):
        with pytest.raises(ParseError) as err:
            parse_poly("s^2 + $", QQ)
        assert err.value.offset == 6

    def test_i_unavailable_over_q(self):
        with pytest.raises(ParseError):
            parse_poly("s + i", QQ)

    def test_i_available_mod_5(self):
        f = parse_poly("s + i", GF(5))
        # i^2 = -1 has the solutions 2, 3 mod 5
        assert str(f) in ("s+2", "s+3")

    def test_roundtrip_format(self):
        for text in ("s^4-1", "3*s^2+3", "(s^2+s)^3"):
            f = P(text)
            assert parse_poly(str(f), QQ) == f


class TestFieldBasics:
    def test_prime_field_requires_prime(self):
        with pytest.raises(ValueError):
            GF(6)

    def test_gauss_sqrt(self):
        z = Gauss(Fraction(0), Fraction(2))
        r = QI.sqrt(z)
        assert r is not None and r * r == z

    def test_fp_sqrt(self):
        f = GF(257)
        r = f.sqrt(f.coerce(2))
        assert r is not None and r * r == f.coerce(2)

    def test_poly_sqrt(self):
        assert P("s^4+2s^2+1").sqrt() == P("s^2+1")
        assert P("s^4+1").sqrt() is None

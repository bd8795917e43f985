"""Exact base fields, univariate polynomials, rational functions and places.

Everything downstream (fiber classification, heights, the quotient
construction) reduces to arithmetic in Q, Q(i) or F_p, polynomials in the
base parameter ``s`` over such a field, and valuations at places of the
projective s-line.  All values are immutable; all operations are pure.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union


class ZeroInput(ValueError):
    """An operation that requires a nonzero input received zero."""


class CannotCertifyIrreducible(ValueError):
    """A residual factor of degree > 4 failed the modular irreducibility check."""


class BadReduction(ValueError):
    """Reduction mod p hit a coefficient denominator divisible by p."""


class ParseError(ValueError):
    """Syntax error in a polynomial/section/model literal.

    ``offset`` is the byte offset of the offending character.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for 64-bit range
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# field elements


def _gauss_of(value) -> "Gauss":
    if isinstance(value, Gauss):
        return value
    return Gauss(Fraction(value), Fraction(0))


@dataclass(frozen=True)
class Gauss:
    """Element a + b*i of Q(i), with exact Fraction parts.

    Arithmetic coerces int/Fraction operands, so Gauss values mix freely
    with rationals.
    """

    re: Fraction
    im: Fraction

    def __add__(self, other) -> "Gauss":
        other = _gauss_of(other)
        return Gauss(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "Gauss":
        other = _gauss_of(other)
        return Gauss(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "Gauss":
        return _gauss_of(other) - self

    def __neg__(self) -> "Gauss":
        return Gauss(-self.re, -self.im)

    def __mul__(self, other) -> "Gauss":
        other = _gauss_of(other)
        return Gauss(self.re * other.re - self.im * other.im,
                     self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Gauss":
        other = _gauss_of(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return Gauss((self.re * other.re + self.im * other.im) / n,
                     (self.im * other.re - self.re * other.im) / n)

    def __rtruediv__(self, other) -> "Gauss":
        return _gauss_of(other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        if isinstance(other, Gauss):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def conj(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return "i" if self.im == 1 else f"{self.im}*i"
        im = "i" if self.im == 1 else ("-i" if self.im == -1 else f"{self.im}*i")
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{im}"


@dataclass(frozen=True)
class FpElem:
    """Element of the prime field F_p."""

    v: int
    p: int

    def _check(self, other: "FpElem") -> None:
        if self.p != other.p:
            raise ValueError("mixed prime fields")

    def __add__(self, other: "FpElem") -> "FpElem":
        self._check(other)
        return FpElem((self.v + other.v) % self.p, self.p)

    def __sub__(self, other: "FpElem") -> "FpElem":
        self._check(other)
        return FpElem((self.v - other.v) % self.p, self.p)

    def __neg__(self) -> "FpElem":
        return FpElem(-self.v % self.p, self.p)

    def __mul__(self, other: "FpElem") -> "FpElem":
        self._check(other)
        return FpElem(self.v * other.v % self.p, self.p)

    def __truediv__(self, other: "FpElem") -> "FpElem":
        self._check(other)
        if other.v == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return FpElem(self.v * pow(other.v, self.p - 2, self.p) % self.p, self.p)

    def __bool__(self) -> bool:
        return self.v != 0

    def __str__(self) -> str:
        return str(self.v)


Element = Union[Fraction, Gauss, FpElem]


class BaseField:
    """One of Q, Q(i) or F_p, acting as an element factory.

    Elements are plain operator-capable values (Fraction, Gauss, FpElem), so
    polynomial code never needs to know which field it is over.
    """

    def __init__(self, kind: str, p: Optional[int] = None):
        if kind not in ("Q", "Qi", "Fp"):
            raise ValueError(f"unknown field kind {kind!r}")
        if kind == "Fp":
            if p is None or not _is_prime(p):
                raise ValueError(f"PrimeField requires a prime, got {p!r}")
        elif p is not None:
            raise ValueError("p only makes sense for Fp")
        self.kind = kind
        self.p = p

    @property
    def char(self) -> int:
        return self.p if self.kind == "Fp" else 0

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, BaseField)
                and self.kind == other.kind and self.p == other.p)

    def __hash__(self) -> int:
        return hash((self.kind, self.p))

    def __repr__(self) -> str:
        return {"Q": "Q", "Qi": "Q(i)"}.get(self.kind, f"F_{self.p}")

    # -- element construction

    def coerce(self, value) -> Element:
        if isinstance(value, FpElem):
            if self.kind != "Fp" or value.p != self.p:
                raise ValueError("element from a different field")
            return value
        if isinstance(value, Gauss):
            if self.kind == "Qi":
                return value
            if not value.im and self.kind == "Q":
                return value.re
            raise ValueError("element from a different field")
        if isinstance(value, Fraction) or isinstance(value, int):
            q = Fraction(value)
            if self.kind == "Q":
                return q
            if self.kind == "Qi":
                return Gauss(q, Fraction(0))
            if q.denominator % self.p == 0:
                raise BadReduction(f"denominator divisible by {self.p}")
            num = q.numerator % self.p
            den = pow(q.denominator % self.p, self.p - 2, self.p)
            return FpElem(num * den % self.p, self.p)
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    def zero(self) -> Element:
        return self.coerce(0)

    def one(self) -> Element:
        return self.coerce(1)

    def i(self) -> Element:
        if self.kind == "Qi":
            return Gauss(Fraction(0), Fraction(1))
        if self.kind == "Fp":
            # a square root of -1, if one exists
            r = self.sqrt(self.coerce(-1))
            if r is not None:
                return r
        raise ValueError(f"no element i with i^2 = -1 in {self!r}")

    def is_zero(self, a: Element) -> bool:
        return not bool(a)

    def sqrt(self, a: Element) -> Optional[Element]:
        """An exact square root of a, or None if a is not a square."""
        if self.kind == "Q":
            assert isinstance(a, Fraction)
            if a < 0:
                return None
            rn, rd = math.isqrt(a.numerator), math.isqrt(a.denominator)
            if rn * rn == a.numerator and rd * rd == a.denominator:
                return Fraction(rn, rd)
            return None
        if self.kind == "Qi":
            assert isinstance(a, Gauss)
            # (c + di)^2 = a needs c^2 = (re + |a|)/2, d^2 = (|a| - re)/2
            qf = BaseField("Q")
            n = qf.sqrt(a.re * a.re + a.im * a.im)
            if n is None:
                return None
            c = qf.sqrt((a.re + n) / 2)
            d = qf.sqrt((n - a.re) / 2)
            if c is None or d is None:
                return None
            if 2 * c * d != a.im:
                d = -d
            g = Gauss(c, d)
            return g if g * g == a else None
        assert isinstance(a, FpElem)
        p = self.p
        if a.v == 0:
            return a
        if p == 2:
            return a
        if pow(a.v, (p - 1) // 2, p) != 1:
            return None
        return FpElem(_tonelli(a.v, p), p)

    def random(self, rng: random.Random, size: int = 10) -> Element:
        if self.kind == "Fp":
            return FpElem(rng.randrange(self.p), self.p)
        num = rng.randint(-size, size)
        den = rng.randint(1, size)
        if self.kind == "Q":
            return Fraction(num, den)
        return Gauss(Fraction(num, den), Fraction(rng.randint(-size, size), den))

    def fmt(self, a: Element) -> str:
        return str(a)


def _tonelli(n: int, p: int) -> int:
    """Square root mod odd prime p (n assumed to be a QR)."""
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


QQ = BaseField("Q")
QI = BaseField("Qi")


def GF(p: int) -> BaseField:
    return BaseField("Fp", p)


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial in s over a base field.

    ``coeffs[k]`` is the coefficient of s^k; the tuple is normalized so the
    last entry is nonzero (the zero polynomial has an empty tuple).
    """

    field: BaseField
    coeffs: tuple

    @staticmethod
    def make(field: BaseField, coeffs: Iterable) -> "Poly":
        cs = [field.coerce(c) for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        return Poly(field, tuple(cs))

    @staticmethod
    def const(field: BaseField, c) -> "Poly":
        return Poly.make(field, [c])

    @staticmethod
    def zero(field: BaseField) -> "Poly":
        return Poly(field, ())

    @staticmethod
    def x(field: BaseField) -> "Poly":
        return Poly.make(field, [0, 1])

    # -- structure

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def leading(self) -> Element:
        if not self.coeffs:
            raise ZeroInput("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> Element:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.field.zero()

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading()
        return Poly.make(self.field, [c / lead for c in self.coeffs])

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.leading() == self.field.one()

    # -- ring operations

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly.make(self.field, out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.field, tuple(-c for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        zero = self.field.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if self.field.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly.make(self.field, out)

    def scale(self, c) -> "Poly":
        c = self.field.coerce(c)
        return Poly.make(self.field, [a * c for a in self.coeffs])

    def __pow__(self, n: int) -> "Poly":
        result = Poly.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Poly") -> tuple:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        field = self.field
        rem = list(self.coeffs)
        q = [field.zero()] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.degree()
        lead = other.leading()
        for k in range(len(rem) - 1, d - 1, -1):
            if field.is_zero(rem[k]):
                continue
            f = rem[k] / lead
            q[k - d] = f
            for j, c in enumerate(other.coeffs):
                rem[k - d + j] = rem[k - d + j] - f * c
        return Poly.make(field, q), Poly.make(field, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def ext_gcd(self, other: "Poly") -> tuple:
        """(g, u, v) with u*self + v*other = g, g monic (or zero)."""
        f = self.field
        r0, r1 = self, other
        s0, s1 = Poly.const(f, 1), Poly.zero(f)
        t0, t1 = Poly.zero(f), Poly.const(f, 1)
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        lead = r0.leading()
        inv = f.one() / lead
        return r0.scale(inv), s0.scale(inv), t0.scale(inv)

    def derivative(self) -> "Poly":
        f = self.field
        return Poly.make(f, [f.coerce(k) * c for k, c in enumerate(self.coeffs)][1:])

    # -- evaluation / substitution

    def eval(self, v):
        """Evaluate at a field element (or anything with ring operators)."""
        if not self.coeffs:
            try:
                return v - v  # zero of the right kind
            except TypeError:
                return self.field.zero()
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * v + c
        return acc

    def eval_elem(self, v) -> Element:
        v = self.field.coerce(v)
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.const(self.field, c)
        return acc

    def compose_ratfunc(self, phi: "RatFunc") -> "RatFunc":
        acc = RatFunc.const(self.field, 0)
        for c in reversed(self.coeffs):
            acc = acc * phi + RatFunc.const(self.field, c)
        return acc

    def reverse(self, degree: Optional[int] = None) -> "Poly":
        """Coefficient reversal s -> 1/s, padded up to ``degree``."""
        d = self.degree() if degree is None else degree
        if d < self.degree():
            raise ValueError("reversal degree below actual degree")
        out = [self.field.zero()] * (d + 1)
        for k, c in enumerate(self.coeffs):
            out[d - k] = c
        return Poly.make(self.field, out)

    def shift(self, k: int) -> "Poly":
        """Multiply by s^k."""
        if self.is_zero():
            return self
        return Poly(self.field, (self.field.zero(),) * k + self.coeffs)

    def sqrt(self) -> Optional["Poly"]:
        """Exact polynomial square root, or None."""
        if self.is_zero():
            return self
        if self.degree() % 2:
            return None
        lead = self.field.sqrt(self.leading())
        if lead is None:
            return None
        half = self.degree() // 2
        out = [self.field.zero()] * (half + 1)
        out[half] = lead
        work = list(self.coeffs)
        for k in range(half - 1, -1, -1):
            # coefficient of s^(k + half) in (partial square) must match
            acc = self.field.zero()
            for j in range(k + 1, half):
                jj = k + half - j
                if jj > half or jj <= k:
                    continue
                acc = acc + out[j] * out[jj]
            target = work[k + half] if k + half < len(work) else self.field.zero()
            out[k] = (target - acc) / (lead + lead)
        cand = Poly.make(self.field, out)
        return cand if cand * cand == self else None

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)})"


# ---------------------------------------------------------------------------
# rational functions


@dataclass(frozen=True)
class RatFunc:
    """Quotient of polynomials, reduced, with monic denominator."""

    num: Poly
    den: Poly

    @staticmethod
    def make(num: Poly, den: Poly) -> "RatFunc":
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if not g.is_zero() and g.degree() > 0:
            num, den = num // g, den // g
        lead = den.leading()
        one = num.field.one()
        if lead != one:
            num = num.scale(one / lead)
            den = den.scale(one / lead)
        return RatFunc(num, den)

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p, Poly.const(p.field, 1))

    @staticmethod
    def const(field: BaseField, c) -> "RatFunc":
        return RatFunc(Poly.const(field, c), Poly.const(field, 1))

    @staticmethod
    def x(field: BaseField) -> "RatFunc":
        return RatFunc(Poly.x(field), Poly.const(field, 1))

    @property
    def field(self) -> BaseField:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree() == 0

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ValueError(f"{self} is not polynomial")
        return self.num

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.den - other.num * self.den,
                            self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc.make(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return RatFunc.const(self.field, 1) / self ** (-n)
        return RatFunc.make(self.num ** n, self.den ** n)

    def scale(self, c) -> "RatFunc":
        return RatFunc.make(self.num.scale(c), self.den)

    def compose(self, phi: "RatFunc") -> "RatFunc":
        num = self.num.compose_ratfunc(phi)
        den = self.den.compose_ratfunc(phi)
        if den.is_zero():
            raise ZeroDivisionError("composition denominator vanishes")
        return num / den

    def eval_elem(self, v) -> Element:
        d = self.den.eval_elem(v)
        if self.field.is_zero(d):
            raise ZeroDivisionError("pole at evaluation point")
        return self.num.eval_elem(v) / d

    def derivative(self) -> "RatFunc":
        return RatFunc.make(self.num.derivative() * self.den - self.num * self.den.derivative(),
                            self.den * self.den)

    def __str__(self) -> str:
        if self.is_poly():
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


# ---------------------------------------------------------------------------
# places and valuations


@dataclass(frozen=True)
class Place:
    """A closed point of the projective s-line: a monic irreducible
    polynomial, or the point at infinity."""

    poly: Optional[Poly]  # None encodes infinity

    @staticmethod
    def infinity() -> "Place":
        return Place(None)

    @staticmethod
    def finite(poly: Poly) -> "Place":
        if poly.is_zero() or poly.degree() == 0:
            raise ValueError("a finite place needs a nonconstant polynomial")
        return Place(poly.monic())

    @staticmethod
    def at(field: BaseField, root) -> "Place":
        """The degree-1 place s = root."""
        return Place.finite(Poly.make(field, [-field.coerce(root), 1]))

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree()

    def root(self) -> Element:
        """The root of a degree-1 place."""
        if self.poly is None or self.poly.degree() != 1:
            raise ValueError("not a degree-1 finite place")
        return -self.poly.coeffs[0]

    def __str__(self) -> str:
        return "inf" if self.poly is None else format_poly(self.poly)


def _val_poly(f: Poly, g: Poly) -> int:
    """Multiplicity of the monic factor g in f (f nonzero)."""
    n = 0
    while True:
        q, r = f.divmod(g)
        if not r.is_zero():
            return n
        f = q
        n += 1


def valuation(f: Union[Poly, RatFunc], v: Place) -> int:
    """v-adic valuation; at infinity this is deg(den) - deg(num)."""
    if isinstance(f, Poly):
        f = RatFunc.from_poly(f)
    if f.is_zero():
        raise ZeroInput("valuation of 0 is undefined")
    if v.is_infinity:
        return f.den.degree() - f.num.degree()
    return _val_poly(f.num, v.poly) - _val_poly(f.den, v.poly)


# ---------------------------------------------------------------------------
# factorization


def squarefree_decomposition(f: Poly) -> list:
    """Yun decomposition [(g_i, i)] with f = lead * prod g_i^i (char 0 only)."""
    field = f.field
    if field.char != 0:
        raise ValueError("Yun decomposition needs characteristic 0")
    if f.degree() < 1:
        return []
    f = f.monic()
    df = f.derivative()
    a = f.gcd(df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree() > 0:
        g = b.gcd(d)
        if g.degree() > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(f: Poly) -> Poly:
    """Product of the distinct monic irreducible factors of f (the radical)."""
    field = f.field
    f = f.monic()
    if f.degree() < 1:
        return Poly.const(field, 1)
    p = field.char
    df = f.derivative()
    if p and df.is_zero():
        # over F_p, g(s^p) = g(s)^p, so compress exponents and recurse
        comp = [f.coeffs[k] for k in range(0, len(f.coeffs), p)]
        return squarefree_part(Poly.make(field, comp))
    u = f.gcd(df)
    v = f // u  # each factor with multiplicity prime to char, once
    if p == 0:
        return v
    w = u
    g = w.gcd(v)
    while g.degree() > 0:
        w = w // g
        g = w.gcd(v)
    # w now carries exactly the factors whose multiplicity is divisible by p
    return v * squarefree_part(w)


def _fp_ddf(f: Poly) -> list:
    """Distinct-degree factorization of a squarefree monic f over F_p.

    Returns [(product_of_irreducibles_of_degree_d, d)].
    """
    field = f.field
    p = field.char
    out = []
    x = Poly.x(field)
    h = x
    v = f
    d = 0
    while v.degree() > 2 * (d + 1) - 1 and v.degree() > 0:
        d += 1
        h = _pow_mod(h, p, v)
        g = v.gcd(h - x)
        if g.degree() > 0:
            out.append((g, d))
            v = v // g
            h = h % v
    if v.degree() > 0:
        out.append((v, v.degree()))
    return out


def _pow_mod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.const(base.field, 1)
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def _fp_edf(f: Poly, d: int, rng: random.Random) -> list:
    """Equal-degree (Cantor-Zassenhaus) splitting of squarefree f, all of
    whose irreducible factors have degree d."""
    field = f.field
    p = field.char
    if f.degree() == d:
        return [f.monic()]
    n = f.degree()
    while True:
        a = Poly.make(field, [rng.randrange(p) for _ in range(n)])
        if a.degree() < 1:
            continue
        g = f.gcd(a)
        if 0 < g.degree() < n:
            break
        if p == 2:
            # trace map: a + a^2 + a^4 + ... (d terms)
            t = Poly.zero(field)
            b = a % f
            for _ in range(d):
                t = (t + b) % f
                b = (b * b) % f
            g = f.gcd(t)
        else:
            e = (p ** d - 1) // 2
            b = _pow_mod(a, e, f)
            g = f.gcd(b - Poly.const(field, 1))
        if 0 < g.degree() < n:
            break
    return _fp_edf(g, d, rng) + _fp_edf(f // g, d, rng)


def _factor_fp(f: Poly) -> list:
    """Full monic irreducible factorization over F_p: [(g, mult)]."""
    rng = random.Random(0x5EED ^ f.degree())
    f = f.monic()
    out = []
    for part, d in _fp_ddf(squarefree_part(f)):
        for g in _fp_edf(part, d, rng):
            g = g.monic()
            out.append((g, _val_poly(f, g)))
    out.sort(key=lambda t: (t[0].degree(), [str(c) for c in t[0].coeffs]))
    return out


def _int_factor(n: int) -> dict:
    """Prime factorization of |n| (trial division + Pollard rho)."""
    n = abs(n)
    out: dict = {}
    if n <= 1:
        return out
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend([d, m // d])
    return out


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        x = rng.randrange(2, n)
        y, c, d = x, rng.randrange(1, n), 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def _divisors(n: int, cap: int = 200000) -> list:
    fac = _int_factor(n)
    divs = [1]
    for p, e in fac.items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
        if len(divs) > cap:
            raise CannotCertifyIrreducible("too many divisors for root search")
    return divs


def _rational_roots(f: Poly) -> list:
    """All roots of f in the base field (Q or Q(i) via real/imag search, F_p by scan)."""
    field = f.field
    roots = []
    if field.kind == "Fp":
        for v in range(field.p):
            e = FpElem(v, field.p)
            if field.is_zero(f.eval_elem(e)):
                roots.append(e)
        return roots
    if field.kind == "Q":
        while f.degree() > 0 and field.is_zero(f.coeff(0)):
            if Fraction(0) not in roots:
                roots.append(Fraction(0))
            f = f // Poly.x(field)
        if f.degree() < 1:
            return roots
        # clear denominators to an integer polynomial
        den = 1
        for c in f.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in f.coeffs]
        a0, an = abs(ints[0]), abs(ints[-1])
        for pnum in _divisors(a0):
            for pden in _divisors(an):
                if math.gcd(pnum, pden) != 1:
                    continue
                for sign in (1, -1):
                    cand = Fraction(sign * pnum, pden)
                    if cand in roots:
                        continue
                    if field.is_zero(f.eval_elem(cand)):
                        roots.append(cand)
        return roots
    # Q(i): roots of f and of its conjugate share rational building blocks;
    # search roots of norm(f) = f * conj(f) over Q via resolvents is overkill.
    # Strategy: find roots among the Q(i)-roots of the real gcd structure,
    # falling back to quadratic formula pieces in callers; here: brute over
    # divisors of the Gaussian norm of the constant term.
    consts = f.coeffs[0]
    if field.is_zero(consts):
        z = Gauss(Fraction(0), Fraction(0))
        return [z] + [r for r in _rational_roots(f // Poly.x(field)) if r != z]
    # denominators
    den = 1
    for c in f.coeffs:
        for part in (c.re, c.im):
            den = den * part.denominator // math.gcd(den, part.denominator)
    a0 = consts.re * den, consts.im * den
    norm0 = int(a0[0]) ** 2 + int(a0[1]) ** 2
    lead = f.leading()
    leadn = int((lead.re * den)) ** 2 + int((lead.im * den)) ** 2
    roots = []
    if norm0 == 0:
        return roots
    for dn in _divisors(norm0):
        for dd in _divisors(leadn if leadn else 1):
            for (a, b) in _gauss_reps(dn):
                for (c, d) in _gauss_reps(dd):
                    if c == 0 and d == 0:
                        continue
                    cand = Gauss(Fraction(a), Fraction(b)) / Gauss(Fraction(c), Fraction(d))
                    if cand in roots:
                        continue
                    if field.is_zero(f.eval_elem(cand)):
                        roots.append(cand)
    return roots


def _gauss_reps(norm: int) -> list:
    """Gaussian integers (a, b) with a^2 + b^2 = norm."""
    out = []
    a = 0
    while a * a <= norm:
        b2 = norm - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            for sa in (a, -a):
                for sb in (b, -b):
                    if (sa, sb) not in out:
                        out.append((sa, sb))
        a += 1
    return out


def _factor_char0_irreducible_parts(f: Poly) -> list:
    """Factor a squarefree monic f over Q or Q(i) into monic irreducibles."""
    field = f.field
    if f.degree() <= 1:
        return [f]
    factors = []
    work = f
    # peel off linear factors from rational roots
    for r in _rational_roots(work):
        lin = Poly.make(field, [-r, 1])
        while True:
            q, rem = work.divmod(lin)
            if rem.is_zero():
                work = q
                factors.append(lin)
                break
            break
    # squarefree input: each root only once
    deg = work.degree()
    if deg == 0:
        return factors
    if deg == 1:
        return factors + [work.monic()]
    if deg == 2:
        return factors + _factor_quadratic(work)
    if deg == 3:
        # no rational root was found, so irreducible over the base field
        return factors + [work.monic()]
    if deg == 4:
        return factors + _factor_quartic(work)
    # even residuals f(s) = g(s^2) split along factors of g
    if all(field.is_zero(c) for c in work.coeffs[1::2]):
        g = Poly.make(field, work.coeffs[::2])
        sub = []
        for h in _factor_char0_irreducible_parts(g):
            lifted = Poly.make(field, _interleave_zeros(h.coeffs, field))
            if lifted.degree() <= 4:
                sub.extend(_factor_char0_irreducible_parts(lifted))
            elif field.kind == "Q" and _certify_irreducible_mod_p(lifted):
                sub.append(lifted.monic())
            else:
                raise CannotCertifyIrreducible(
                    f"cannot certify irreducibility of degree-"
                    f"{lifted.degree()} residual {lifted}")
        return factors + sub
    # residual of degree > 4: certify irreducibility mod three good primes
    if field.kind == "Q" and _certify_irreducible_mod_p(work):
        return factors + [work.monic()]
    raise CannotCertifyIrreducible(
        f"cannot certify irreducibility of degree-{deg} residual {work}")


def _interleave_zeros(coeffs, field):
    out = []
    for c in coeffs:
        out.append(c)
        out.append(field.zero())
    return out[:-1]


def _factor_quadratic(f: Poly) -> list:
    field = f.field
    f = f.monic()
    b, c = f.coeff(1), f.coeff(0)
    disc = b * b - field.coerce(4) * c
    r = field.sqrt(disc)
    if r is None:
        return [f]
    two = field.coerce(2)
    r1, r2 = (-b + r) / two, (-b - r) / two
    return [Poly.make(field, [-r1, 1]), Poly.make(field, [-r2, 1])]


def _factor_quartic(f: Poly) -> list:
    """Factor a monic quartic with no roots in the field: either a product of
    two irreducible quadratics or irreducible (resolvent-cubic method)."""
    field = f.field
    f = f.monic()
    a3, a2, a1, a0 = f.coeff(3), f.coeff(2), f.coeff(1), f.coeff(0)
    four = field.coerce(4)
    # depress: x = y - a3/4
    sh = a3 / four
    shift = Poly.make(field, [-sh, 1])
    g = f.compose(shift)  # monic quartic in y with no cubic term
    p, q, r = g.coeff(2), g.coeff(1), g.coeff(0)
    two = field.coerce(2)
    if field.is_zero(q):
        # biquadratic: try roots of z^2 + p z + r, else the symmetric split
        z = Poly.make(field, [r, p, 1])
        for zf in _factor_quadratic(z):
            if zf.degree() != 1:
                continue
            z0 = -zf.coeff(0)
            quadA = Poly.make(field, [-z0, 0, 1])
            rest = g // quadA
            outs = []
            for part in (quadA, rest):
                outs.extend(_factor_quadratic(part))
            return [h.compose(Poly.make(field, [sh, 1])).monic() for h in outs]
        # (y^2+ay+u)(y^2-ay+u) with u^2 = r, a^2 = 2u - p
        u = field.sqrt(r)
        if u is not None:
            for uu in (u, -u):
                a = field.sqrt(field.coerce(2) * uu - p)
                if a is not None:
                    quad1 = Poly.make(field, [uu, a, 1])
                    quad2 = Poly.make(field, [uu, -a, 1])
                    if quad1 * quad2 == g:
                        outs = _factor_quadratic(quad1) + _factor_quadratic(quad2)
                        return [h.compose(Poly.make(field, [sh, 1])).monic() for h in outs]
        return [f]
    # resolvent cubic z^3 + 2p z^2 + (p^2 - 4r) z - q^2
    res = Poly.make(field, [-(q * q), p * p - four * r, two * p, field.one()])
    for z0 in _rational_roots(res):
        if field.is_zero(z0):
            continue
        a = field.sqrt(z0)
        if a is None:
            continue
        u = (p + z0 - q / a) / two
        v = (p + z0 + q / a) / two
        quad1 = Poly.make(field, [u, a, 1])
        quad2 = Poly.make(field, [v, -a, 1])
        assert quad1 * quad2 == g
        outs = _factor_quadratic(quad1) + _factor_quadratic(quad2)
        return [h.compose(Poly.make(field, [sh, 1])).monic() for h in outs]
    return [f]


def _certify_irreducible_mod_p(f: Poly) -> bool:
    """Probabilistic irreducibility of f over Q: irreducible mod some prime of
    good reduction among the first three usable ones implies irreducible;
    otherwise fail the certificate."""
    tried = 0
    p = 5
    while tried < 3:
        try:
            fp = reduce_mod_p(f, p)
        except BadReduction:
            p = _next_prime(p)
            continue
        if fp.degree() == f.degree():
            tried += 1
            sf = squarefree_part(fp)
            if sf.degree() == fp.degree():
                parts = _factor_fp(fp)
                if len(parts) == 1 and parts[0][1] == 1:
                    return True
        p = _next_prime(p)
    return False


def _next_prime(p: int) -> int:
    p += 1
    while not _is_prime(p):
        p += 1
    return p


def factor_support(f: Poly) -> list:
    """Factor f into places: [(Place, multiplicity)], sorted deterministically.

    Over F_p this is a full factorization; over Q and Q(i) rational roots are
    extracted and residual factors of degree <= 4 are split by resolvent
    methods, with a modular certificate for anything bigger.
    """
    if f.is_zero():
        raise ZeroInput("cannot factor the zero polynomial")
    field = f.field
    if f.degree() == 0:
        return []
    out = []
    if field.kind == "Fp":
        for g, m in _factor_fp(f):
            out.append((Place.finite(g), m))
    else:
        sf = squarefree_decomposition(f)
        for part, mult in sf:
            for irr in _factor_char0_irreducible_parts(part):
                out.append((Place.finite(irr), mult))
    out.sort(key=lambda t: (t[0].degree(), str(t[0])))
    return out


def reduce_mod_p(f: Poly, p: int) -> Poly:
    """Coefficientwise reduction of a Q-polynomial mod p."""
    if f.field.kind != "Q":
        raise ValueError("reduce_mod_p expects a polynomial over Q")
    target = GF(p)
    out = []
    for c in f.coeffs:
        if c.denominator % p == 0:
            raise BadReduction(f"denominator of {c} divisible by {p}")
        out.append(target.coerce(c))
    return Poly.make(target, out)


def reduce_ratfunc_mod_p(f: RatFunc, p: int) -> RatFunc:
    num = reduce_mod_p(f.num, p)
    den = reduce_mod_p(f.den, p)
    if den.is_zero():
        raise BadReduction(f"denominator of {f} vanishes mod {p}")
    return RatFunc.make(num, den)


# ---------------------------------------------------------------------------
# residue fields at places (degree >= 2 over Q / Q(i))


@dataclass(frozen=True)
class QuotElem:
    """Element of k[s]/(m): a polynomial reduced mod the place polynomial."""

    rep: Poly
    modulus: Poly

    def _wrap(self, p: Poly) -> "QuotElem":
        return QuotElem(p % self.modulus, self.modulus)

    def __add__(self, other):
        return self._wrap(self.rep + other.rep)

    def __sub__(self, other):
        return self._wrap(self.rep - other.rep)

    def __neg__(self):
        return QuotElem(-self.rep, self.modulus)

    def __mul__(self, other):
        return self._wrap(self.rep * other.rep)

    def __truediv__(self, other):
        g, u, _ = other.rep.ext_gcd(self.modulus)
        if g.degree() != 0:
            raise ZeroDivisionError("not invertible in residue field")
        inv = u.scale(self.rep.field.one() / g.coeff(0))
        return self._wrap(self.rep * inv)

    def __bool__(self):
        return not self.rep.is_zero()

    def __str__(self):
        return str(self.rep)


class QuotField:
    """Field-like wrapper for k[s]/(m), m irreducible: lets Poly/gcd code run
    over residue fields of places of degree >= 2."""

    kind = "quot"

    def __init__(self, base: BaseField, modulus: Poly):
        self.base = base
        self.modulus = modulus.monic()

    @property
    def char(self) -> int:
        return self.base.char

    def __eq__(self, other) -> bool:
        return (isinstance(other, QuotField) and self.base == other.base
                and self.modulus == other.modulus)

    def __hash__(self) -> int:
        return hash((self.base, self.modulus.coeffs))

    def coerce(self, v) -> QuotElem:
        if isinstance(v, QuotElem):
            if v.modulus != self.modulus:
                raise ValueError("element of a different quotient field")
            return v
        if isinstance(v, Poly):
            return QuotElem(v % self.modulus, self.modulus)
        return QuotElem(Poly.const(self.base, self.base.coerce(v)) % self.modulus,
                        self.modulus)

    def zero(self) -> QuotElem:
        return self.coerce(0)

    def one(self) -> QuotElem:
        return self.coerce(1)

    def is_zero(self, e) -> bool:
        return not bool(e)

    def sqrt(self, e):
        return None  # not needed at places of degree >= 2

    def fmt(self, e) -> str:
        return str(e)


class ResidueField:
    """The residue field at a finite place of the s-line."""

    def __init__(self, field: BaseField, place: Place):
        if place.is_infinity:
            raise ValueError("use a conjugated model at infinity")
        self.base = field
        self.place = place

    @property
    def fieldlike(self):
        """A field object usable as a Poly coefficient field."""
        if self.place.degree() == 1:
            return self.base
        return QuotField(self.base, self.place.poly)

    def reduce_ratfunc(self, f: RatFunc):
        """Reduce a v-integral rational function to the residue field."""
        v = self.place
        if valuation(f.den, v) if not f.den.is_zero() else 0:
            # denominator vanishes at v: f must still be v-integral
            if valuation(f, v) < 0:
                raise ZeroDivisionError(f"{f} has a pole at {v}")
        if v.degree() == 1:
            r = v.root()
            # clear any removable singularity by cancelling powers of (s - r)
            num, den = f.num, f.den
            lin = v.poly
            while True:
                dv = den.eval_elem(r)
                if not self.base.is_zero(dv):
                    return num.eval_elem(r) / dv
                q1, r1 = num.divmod(lin)
                q2, r2 = den.divmod(lin)
                if not (r1.is_zero() and r2.is_zero()):
                    raise ZeroDivisionError(f"{f} has a pole at {v}")
                num, den = q1, q2
        m = v.poly
        num, den = f.num, f.den
        while True:
            dq = QuotElem(den % m, m)
            if dq:
                nq = QuotElem(num % m, m)
                return nq / dq
            q1, r1 = num.divmod(m)
            q2, r2 = den.divmod(m)
            if not (r1.is_zero() and r2.is_zero()):
                raise ZeroDivisionError(f"{f} has a pole at {v}")
            num, den = q1, q2

    def is_zero(self, e) -> bool:
        if isinstance(e, QuotElem):
            return not bool(e)
        return self.base.is_zero(e)

    def eq(self, a, b) -> bool:
        if isinstance(a, QuotElem) or isinstance(b, QuotElem):
            return not bool(a - b)
        return a == b

    def lift(self, e) -> RatFunc:
        """A canonical lift of a residue element to a rational function."""
        if isinstance(e, QuotElem):
            return RatFunc.from_poly(e.rep)
        return RatFunc.const(self.base, e)


# ---------------------------------------------------------------------------
# parsing and formatting of polynomial literals


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    field = p.field
    terms = []
    for k in range(p.degree(), -1, -1):
        c = p.coeff(k)
        if field.is_zero(c):
            continue
        cs = field.fmt(c)
        if k == 0:
            term = cs if "+" not in cs[1:] and "-" not in cs[1:] else f"({cs})"
        else:
            power = "s" if k == 1 else f"s^{k}"
            if cs == "1":
                term = power
            elif cs == "-1":
                term = f"-{power}"
            elif "+" in cs[1:] or "-" in cs[1:]:
                term = f"({cs})*{power}"
            else:
                term = f"{cs}*{power}"
        terms.append(term)
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        c = self.peek()
        self.pos += 1
        return c

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.pos)


def parse_poly(text: str, field: BaseField) -> Poly:
    """Parse a polynomial literal: integers/rationals, `s`, `i`, `^`, `*`, `/`."""
    rf = parse_ratfunc(text, field)
    if not rf.is_poly():
        raise ParseError("expected a polynomial, got a proper rational function", 0)
    return rf.as_poly()


def parse_ratfunc(text: str, field: BaseField) -> RatFunc:
    toks = _Tokens(text)
    value = _parse_expr(toks, field)
    toks.skip_ws()
    if toks.pos != len(text):
        raise toks.error(f"unexpected character {text[toks.pos]!r}")
    return value


def _parse_expr(toks: _Tokens, field: BaseField) -> RatFunc:
    value = _parse_term(toks, field)
    while True:
        c = toks.peek()
        if c == "+":
            toks.take()
            value = value + _parse_term(toks, field)
        elif c == "-":
            toks.take()
            value = value - _parse_term(toks, field)
        else:
            return value


def _parse_term(toks: _Tokens, field: BaseField) -> RatFunc:
    value = _parse_factor(toks, field)
    while True:
        c = toks.peek()
        if c == "*":
            toks.take()
            value = value * _parse_factor(toks, field)
        elif c == "/":
            toks.take()
            d = _parse_factor(toks, field)
            if d.is_zero():
                raise toks.error("division by zero")
            value = value / d
        elif c and (c.isdigit() or c in "si("):
            # implicit multiplication like 3s^2
            value = value * _parse_factor(toks, field)
        else:
            return value


def _parse_factor(toks: _Tokens, field: BaseField) -> RatFunc:
    base = _parse_atom(toks, field)
    if toks.peek() == "^":
        toks.take()
        sign = 1
        if toks.peek() == "-":
            toks.take()
            sign = -1
        start = toks.pos
        digits = ""
        while toks.peek().isdigit():
            digits += toks.take()
        if not digits:
            raise ParseError("expected an integer exponent", start)
        return base ** (sign * int(digits))
    return base


def _parse_atom(toks: _Tokens, field: BaseField) -> RatFunc:
    c = toks.peek()
    if c == "(":
        toks.take()
        value = _parse_expr(toks, field)
        if toks.peek() != ")":
            raise toks.error("expected ')'")
        toks.take()
        return value
    if c == "-":
        toks.take()
        return -_parse_factor(toks, field)
    if c == "+":
        toks.take()
        return _parse_factor(toks, field)
    if c == "s":
        toks.take()
        return RatFunc.x(field)
    if c == "i":
        toks.take()
        try:
            return RatFunc.const(field, field.i())
        except ValueError:
            raise toks.error("imaginary unit not available in this field")
    if c.isdigit():
        digits = ""
        while toks.peek().isdigit():
            digits += toks.take()
        return RatFunc.const(field, int(digits))
    raise toks.error(f"unexpected character {c!r}" if c else "unexpected end of input")

"""Weierstrass models over the function field of the s-line.

Provides the standard invariants, admissible coordinate changes, local
minimal models with recorded transformations, Kodaira fiber classification
(valuation table away from characteristic 2 and 3, full Tate's algorithm at
rational places otherwise), fiber tables and quadratic base change.

The local Euler number attached to a fiber is the valuation of the minimal
discriminant (Ogg's formula), which exceeds the tame table value exactly at
wildly ramified fibers in characteristic 2 and 3.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .exactalg import (
    BaseField, Place, Poly, RatFunc, ResidueField, ZeroInput,
    factor_support, valuation,
)


class DegenerateModel(ValueError):
    """The discriminant vanishes identically."""


class CharUnsupported(ValueError):
    """Operation not available in this characteristic / at this place."""


def _rf(field: BaseField, value) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, Poly):
        return RatFunc.from_poly(value)
    return RatFunc.const(field, value)


@dataclass(frozen=True)
class Model:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with coefficients in k(s)."""

    field: BaseField
    a1: RatFunc
    a2: RatFunc
    a3: RatFunc
    a4: RatFunc
    a6: RatFunc

    @staticmethod
    def make(field: BaseField, a1, a2, a3, a4, a6) -> "Model":
        return Model(field, *(_rf(field, a) for a in (a1, a2, a3, a4, a6)))

    @property
    def char(self) -> int:
        return self.field.char

    def coefficients(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_polynomial(self) -> bool:
        return all(a.is_poly() for a in self.coefficients())

    def b_invariants(self) -> tuple:
        a1, a2, a3, a4, a6 = self.coefficients()
        two = RatFunc.const(self.field, 2)
        four = RatFunc.const(self.field, 4)
        b2 = a1 * a1 + four * a2
        b4 = two * a4 + a1 * a3
        b6 = a3 * a3 + four * a6
        b8 = (a1 * a1 * a6 + four * a2 * a6 - a1 * a3 * a4
              + a2 * a3 * a3 - a4 * a4)
        return b2, b4, b6, b8

    def c_invariants(self) -> tuple:
        b2, b4, b6, _ = self.b_invariants()
        c = lambda n: RatFunc.const(self.field, n)
        c4 = b2 * b2 - c(24) * b4
        c6 = -(b2 * b2 * b2) + c(36) * b2 * b4 - c(216) * b6
        return c4, c6

    def discriminant(self) -> RatFunc:
        b2, b4, b6, b8 = self.b_invariants()
        c = lambda n: RatFunc.const(self.field, n)
        return (-(b2 * b2) * b8 - c(8) * b4 * b4 * b4 - c(27) * b6 * b6
                + c(9) * b2 * b4 * b6)

    def j_invariant(self) -> RatFunc:
        c4, _ = self.c_invariants()
        disc = self.discriminant()
        if disc.is_zero():
            raise DegenerateModel("discriminant vanishes identically")
        return c4 * c4 * c4 / disc

    def rhs(self, x: RatFunc) -> RatFunc:
        return ((x * x * x) + self.a2 * x * x + self.a4 * x + self.a6)

    def equation_residual(self, x: RatFunc, y: RatFunc) -> RatFunc:
        return y * y + self.a1 * x * y + self.a3 * y - self.rhs(x)

    def __str__(self) -> str:
        return (f"y^2 + ({self.a1})xy + ({self.a3})y = "
                f"x^3 + ({self.a2})x^2 + ({self.a4})x + ({self.a6})")


@dataclass(frozen=True)
class Invariants:
    b2: RatFunc
    b4: RatFunc
    b6: RatFunc
    b8: RatFunc
    c4: RatFunc
    c6: RatFunc
    disc: RatFunc
    j: RatFunc


def invariants(w: Model) -> Invariants:
    """Standard quantities; raises DegenerateModel when disc = 0."""
    b2, b4, b6, b8 = w.b_invariants()
    c4, c6 = w.c_invariants()
    disc = w.discriminant()
    if disc.is_zero():
        raise DegenerateModel("discriminant vanishes identically")
    return Invariants(b2, b4, b6, b8, c4, c6, disc, c4 * c4 * c4 / disc)


# ---------------------------------------------------------------------------
# coordinate changes


@dataclass(frozen=True)
class Transform:
    """Admissible change x = u^2 x' + r, y = u^3 y' + u^2 sg x' + tau."""

    u: RatFunc
    r: RatFunc
    sg: RatFunc
    tau: RatFunc

    @staticmethod
    def identity(field: BaseField) -> "Transform":
        one = RatFunc.const(field, 1)
        zero = RatFunc.const(field, 0)
        return Transform(one, zero, zero, zero)

    def is_identity(self) -> bool:
        f = self.u.field
        return (self.u == RatFunc.const(f, 1) and self.r.is_zero()
                and self.sg.is_zero() and self.tau.is_zero())

    def apply(self, w: Model) -> Model:
        """The model in the primed coordinates."""
        field = w.field
        u, r, sg, tau = self.u, self.r, self.sg, self.tau
        c = lambda n: RatFunc.const(field, n)
        a1 = (w.a1 + c(2) * sg) / u
        a2 = (w.a2 - sg * w.a1 + c(3) * r - sg * sg) / (u ** 2)
        a3 = (w.a3 + r * w.a1 + c(2) * tau) / (u ** 3)
        a4 = (w.a4 - sg * w.a3 + c(2) * r * w.a2 - (tau + r * sg) * w.a1
              + c(3) * r * r - c(2) * sg * tau) / (u ** 4)
        a6 = (w.a6 + r * w.a4 + r * r * w.a2 + r ** 3 - tau * w.a3
              - tau * tau - r * tau * w.a1) / (u ** 6)
        return Model(field, a1, a2, a3, a4, a6)

    def push_point(self, x: RatFunc, y: RatFunc) -> tuple:
        """Old coordinates -> new (primed) coordinates."""
        u, r, sg, tau = self.u, self.r, self.sg, self.tau
        xs = (x - r) / (u ** 2)
        ys = (y - sg * (x - r) - tau) / (u ** 3)
        return xs, ys

    def pull_point(self, x: RatFunc, y: RatFunc) -> tuple:
        """New coordinates -> old coordinates."""
        u, r, sg, tau = self.u, self.r, self.sg, self.tau
        return u ** 2 * x + r, u ** 3 * y + u ** 2 * sg * x + tau

    def then(self, second: "Transform") -> "Transform":
        """The composite change: apply self first, then ``second``."""
        u1, r1, s1, t1 = self.u, self.r, self.sg, self.tau
        u2, r2, s2, t2 = second.u, second.r, second.sg, second.tau
        u = u1 * u2
        r = r1 + u1 ** 2 * r2
        sg = s1 + u1 * s2
        tau = t1 + u1 ** 2 * s1 * r2 + u1 ** 3 * t2
        return Transform(u, r, sg, tau)


# ---------------------------------------------------------------------------
# fibers


# (components, tame euler) per symbol kind; In/In* depend on n
_SYMBOL_DATA = {
    "II": (1, 2), "III": (2, 3), "IV": (3, 4),
    "IV*": (7, 8), "III*": (8, 9), "II*": (9, 10),
}


@dataclass(frozen=True)
class KodairaSymbol:
    kind: str           # 'I', 'I*', 'II', 'III', 'IV', 'II*', 'III*', 'IV*'
    n: int = 0          # only for 'I' and 'I*'

    def components(self) -> int:
        if self.kind == "I":
            return max(self.n, 1)
        if self.kind == "I*":
            return self.n + 5
        return _SYMBOL_DATA[self.kind][0]

    def tame_euler(self) -> int:
        if self.kind == "I":
            return self.n
        if self.kind == "I*":
            return self.n + 6
        return _SYMBOL_DATA[self.kind][1]

    def is_multiplicative(self) -> bool:
        return self.kind == "I" and self.n >= 1

    def is_additive(self) -> bool:
        return not (self.kind == "I")

    def __str__(self) -> str:
        if self.kind == "I":
            return f"I{self.n}"
        if self.kind == "I*":
            return f"I{self.n}*"
        return self.kind


@dataclass(frozen=True)
class KodairaFiber:
    place: Place
    symbol: KodairaSymbol
    components: int
    euler: int          # valuation of the minimal discriminant (Ogg)
    double: bool = False

    def __str__(self) -> str:
        star = " (double)" if self.double else ""
        return f"{self.symbol}@{self.place}{star}"


@dataclass(frozen=True)
class FiberTable:
    fibers: tuple
    total_euler: int

    def symbols(self) -> tuple:
        return tuple(str(f.symbol) for f in self.fibers)

    def signature(self) -> tuple:
        """Multiset of (symbol, place degree) as a sorted tuple."""
        return tuple(sorted((str(f.symbol), f.place.degree()) for f in self.fibers))

    def at(self, place: Place) -> Optional[KodairaFiber]:
        for f in self.fibers:
            if f.place == place:
                return f
        return None


# ---------------------------------------------------------------------------
# localization helpers


def _uniformizer(field: BaseField, v: Place) -> RatFunc:
    if v.is_infinity:
        raise ValueError("conjugate to a finite place first")
    return RatFunc.from_poly(v.poly)


def conjugate_to_finite(w: Model) -> Model:
    """The model in the coordinate w = 1/s; the place at infinity becomes w = 0.

    Polynomial coefficients of degree d map to w^-d * (reversed); we clear
    the poles by the weighted u = w^-k scaling afterwards (integralize).
    """
    field = w.field
    subs = RatFunc.make(Poly.const(field, 1), Poly.x(field))  # s -> 1/w

    def conj(f: RatFunc) -> RatFunc:
        if f.is_zero():
            return f
        return f.compose(subs)

    return Model(field, *(conj(a) for a in w.coefficients()))


def _val(f: RatFunc, v: Place) -> int:
    if f.is_zero():
        return 10 ** 9  # effectively +infinity
    return valuation(f, v)


def integralize_at(w: Model, v: Place) -> tuple:
    """Scale so all coefficients are v-integral; returns (model, transform)."""
    field = w.field
    weights = (1, 2, 3, 4, 6)
    worst = 0
    for a, k in zip(w.coefficients(), weights):
        if not a.is_zero():
            va = valuation(a, v)
            if va < 0:
                worst = max(worst, -(-(-va) // k) if False else (-va + k - 1) // k)
    if worst == 0:
        return w, Transform.identity(field)
    pi = _uniformizer(field, v)
    tr = Transform(pi ** (-worst), RatFunc.const(field, 0),
                   RatFunc.const(field, 0), RatFunc.const(field, 0))
    return tr.apply(w), tr


def _scaling(field: BaseField, u: RatFunc) -> Transform:
    zero = RatFunc.const(field, 0)
    return Transform(u, zero, zero, zero)


def minimal_model_at(w: Model, v: Place) -> tuple:
    """A model minimal at v together with the coordinate change that got there.

    The transform maps points of ``w`` to points of the returned model via
    ``push_point``.  In characteristic 2 and 3 the place must have degree 1
    (Tate's algorithm runs there); elsewhere we pass through the short form
    y^2 = x^3 + Ax + B where the u = pi^k rescaling is always admissible.
    """
    field = w.field
    if v.is_infinity:
        w = conjugate_to_finite(w)
        v = Place.at(field, 0)
    if field.char in (2, 3):
        if v.degree() == 1:
            model, tr, _ = _tate(w, v)
            return model, tr
        # higher-degree places in char 2/3 only host tame small fibers in
        # scope; the integral model must already be minimal there
        model, tr = integralize_at(w, v)
        disc = model.discriminant()
        if disc.is_zero():
            raise DegenerateModel("discriminant vanishes identically")
        c4, _c6 = model.c_invariants()
        if valuation(disc, v) >= 12 and _val(c4, v) >= 4:
            raise CharUnsupported(
                f"cannot minimalize at the degree-{v.degree()} place {v} "
                f"in characteristic {field.char}")
        return model, tr
    model, tr = integralize_at(w, v)
    if model.discriminant().is_zero():
        raise DegenerateModel("discriminant vanishes identically")
    c4, c6 = model.c_invariants()
    k = min(_val(c4, v) // 4, _val(c6, v) // 6)
    if k <= 0:
        return model, tr
    # complete square and cube, then shrink
    c = lambda n: RatFunc.const(field, n)
    b2 = model.b_invariants()[0]
    t1 = Transform(c(1), c(0), -model.a1 / c(2), -model.a3 / c(2))
    m1 = t1.apply(model)
    t2 = Transform(c(1), -m1.b_invariants()[0] / c(12), c(0), c(0))
    m2 = t2.apply(m1)
    pi = _uniformizer(field, v)
    t3 = _scaling(field, pi ** k)
    m3 = t3.apply(m2)
    return m3, tr.then(t1).then(t2).then(t3)


def kodaira_type(w: Model, v: Place, double: bool = False) -> KodairaFiber:
    """Kodaira fiber of the minimal model of w at v."""
    field = w.field
    if field.char in (2, 3):
        at_inf = v.is_infinity
        wk = conjugate_to_finite(w) if at_inf else w
        vk = Place.at(field, 0) if at_inf else v
        if vk.degree() == 1:
            model, _, symbol = _tate(wk, vk)
            euler = _val(model.discriminant(), vk)
            return KodairaFiber(v, symbol, symbol.components(), euler, double)
        # tame fallback at higher-degree places: the valuation table
    model, _ = minimal_model_at(w, v)
    vv = Place.at(field, 0) if v.is_infinity else v
    disc = model.discriminant()
    if disc.is_zero():
        raise DegenerateModel("discriminant vanishes identically")
    dv = valuation(disc, vv)
    if dv == 0:
        symbol = KodairaSymbol("I", 0)
    else:
        c4, _ = model.c_invariants()
        c4v = _val(c4, vv)
        if c4v == 0:
            symbol = KodairaSymbol("I", dv)
        elif dv == 2:
            symbol = KodairaSymbol("II")
        elif dv == 3:
            symbol = KodairaSymbol("III")
        elif dv == 4:
            symbol = KodairaSymbol("IV")
        elif dv == 6:
            symbol = KodairaSymbol("I*", 0)
        elif dv == 7:
            symbol = KodairaSymbol("I*", 1)
        elif dv == 8:
            symbol = KodairaSymbol("IV*") if c4v >= 3 else KodairaSymbol("I*", 2)
        elif dv == 9:
            symbol = KodairaSymbol("III*") if c4v >= 3 else KodairaSymbol("I*", 3)
        elif dv == 10:
            symbol = KodairaSymbol("II*") if c4v >= 4 else KodairaSymbol("I*", 4)
        elif c4v == 2:
            symbol = KodairaSymbol("I*", dv - 6)
        else:
            raise DegenerateModel(
                f"no Kodaira type for v(disc)={dv}, v(c4)={c4v} at {v}")
    return KodairaFiber(v, symbol, symbol.components(), dv, double)


_FT_CACHE: dict = {}


def fiber_table(w: Model, expect_euler: Optional[int] = None) -> FiberTable:
    """All places of bad reduction with their fiber types.

    Euler numbers are weighted by the degree of the place in the total.
    """
    cached = _FT_CACHE.get(w)
    if cached is not None:
        if expect_euler is not None and cached.total_euler != expect_euler:
            raise DegenerateModel(
                f"total Euler number {cached.total_euler}, expected {expect_euler}")
        return cached
    disc = w.discriminant()
    if disc.is_zero():
        raise DegenerateModel("discriminant vanishes identically")
    places = []
    seen = set()
    cands = []
    if not disc.num.is_zero():
        cands.extend(p for p, _ in factor_support(disc.num))
    if disc.den.degree() > 0:
        cands.extend(p for p, _ in factor_support(disc.den))
    for a in w.coefficients():
        if a.den.degree() > 0:
            cands.extend(p for p, _ in factor_support(a.den))
    cands.append(Place.infinity())
    for v in cands:
        key = str(v)
        if key in seen:
            continue
        seen.add(key)
        fib = kodaira_type(w, v)
        if fib.euler > 0:
            places.append(fib)
    places.sort(key=lambda f: (f.place.is_infinity, f.place.degree(), str(f.place)))
    total = sum(f.euler * f.place.degree() for f in places)
    table = FiberTable(tuple(places), total)
    _FT_CACHE[w] = table
    if expect_euler is not None and total != expect_euler:
        raise DegenerateModel(
            f"total Euler number {total}, expected {expect_euler}")
    return table


# ---------------------------------------------------------------------------
# quadratic (and general) base change


def base_change(w: Model, phi: RatFunc) -> Model:
    """Substitute the base parameter by phi(s) and clear denominators.

    The result is polynomial and minimal at every finite place; the models in
    scope come out minimal at infinity as well.
    """
    field = w.field
    if phi.num.degree() <= 0 and phi.den.degree() <= 0:
        raise ValueError("phi must be nonconstant")
    coeffs = [a.compose(phi) if not a.is_zero() else a for a in w.coefficients()]
    model = Model(field, *coeffs)
    disc = model.discriminant()
    if disc.is_zero():
        raise DegenerateModel("base change killed the discriminant")
    # clear denominators with the weighted scaling u = 1/d
    weights = (1, 2, 3, 4, 6)
    den = Poly.const(field, 1)
    for v in _denominator_places(model):
        worst = 0
        for a, k in zip(model.coefficients(), weights):
            if not a.is_zero():
                va = valuation(a, v)
                if va < 0:
                    worst = max(worst, (-va + k - 1) // k)
        den = den * v.poly ** worst
    if den.degree() > 0:
        u = RatFunc.make(Poly.const(field, 1), den)
        tr = Transform(u, RatFunc.const(field, 0),
                       RatFunc.const(field, 0), RatFunc.const(field, 0))
        model = tr.apply(model)
    # now minimalize at every finite place of bad reduction
    return _globally_minimal(model)


def _denominator_places(w: Model) -> list:
    seen = {}
    for a in w.coefficients():
        if a.den.degree() > 0:
            for v, _ in factor_support(a.den):
                seen[str(v)] = v
    return list(seen.values())


def _globally_minimal(w: Model) -> Model:
    """Shrink a polynomial model at every finite place where it is not minimal.

    Only pure u = pi^k rescalings that keep the model polynomial are applied;
    every base change in scope comes out minimal this way.
    """
    field = w.field
    disc = w.discriminant()
    if disc.is_zero():
        raise DegenerateModel("discriminant vanishes identically")
    candidates = [v for v, m in factor_support(disc.num.monic()) if m >= 12]
    for v in candidates:
        dv = valuation(w.discriminant(), v)
        local, _ = minimal_model_at(w, v)
        dmin = valuation(local.discriminant(), v)
        if dmin == dv:
            continue
        k = (dv - dmin) // 12
        pi = _uniformizer(field, v)
        cand = _scaling(field, pi ** k).apply(w)
        if any(not a.is_poly() for a in cand.coefficients()):
            raise DegenerateModel(
                f"model not minimal at {v} and no polynomial rescaling exists")
        w = cand
    return w


# ---------------------------------------------------------------------------
# Tate's algorithm (used in characteristic 2 and 3 at degree-1 places)


def _tate(w: Model, v: Place) -> tuple:
    """Full Tate's algorithm at a degree-1 finite place.

    Returns (minimal local model, transform from input to it, KodairaSymbol).
    Valid in any characteristic; only exercised in 2 and 3 (elsewhere the
    valuation table is used, but this serves as a cross-check in tests).
    """
    field = w.field
    res = ResidueField(field, v)
    base = res.fieldlike
    pi = _uniformizer(field, v)
    model, tr = integralize_at(w, v)

    def red(f: RatFunc):
        return res.reduce_ratfunc(f)

    def shift(model, tr, r=None, sg=None, tau=None):
        zero = RatFunc.const(field, 0)
        t = Transform(RatFunc.const(field, 1),
                      r if r is not None else zero,
                      sg if sg is not None else zero,
                      tau if tau is not None else zero)
        return t.apply(model), tr.then(t)

    while True:
        disc = model.discriminant()
        if disc.is_zero():
            raise DegenerateModel("discriminant vanishes identically")
        n = valuation(disc, v)
        if n == 0:
            return model, tr, KodairaSymbol("I", 0)

        # step 2: move the singular point of the reduction to (0, 0)
        sp = _singular_point(model, res)
        if sp is not None:
            x0, y0 = sp
            if not (res.is_zero(x0) and res.is_zero(y0)):
                model, tr = shift(model, tr, r=res.lift(x0), tau=res.lift(y0))
        if _val(model.b_invariants()[0], v) == 0:
            return model, tr, KodairaSymbol("I", n)
        if _val(model.a6, v) < 2:
            return model, tr, KodairaSymbol("II")
        if _val(model.b_invariants()[3], v) < 3:
            return model, tr, KodairaSymbol("III")
        if _val(model.b_invariants()[2], v) < 3:
            return model, tr, KodairaSymbol("IV")

        # normalize to v(a1), v(a2) >= 1, v(a3) >= 2, v(a4) >= 2, v(a6) >= 3
        if field.char == 2:
            if _val(model.a2, v) == 0:
                s0 = base.sqrt(red(model.a2))
                if s0 is None:
                    raise CharUnsupported("missing square root in residue field")
                model, tr = shift(model, tr, sg=res.lift(s0))
            if _val(model.a6, v) == 2:
                t0 = base.sqrt(red(model.a6 / pi ** 2))
                if t0 is None:
                    raise CharUnsupported("missing square root in residue field")
                model, tr = shift(model, tr, tau=res.lift(t0) * pi)
        else:
            c2rf = RatFunc.const(field, 2)
            model, tr = shift(model, tr, sg=-model.a1 / c2rf,
                              tau=-model.a3 / c2rf)

        # step 6: P(T) = T^3 + a2,1 T^2 + a4,2 T + a6,3
        P = _cubic(base, red(model.a6 / pi ** 3), red(model.a4 / pi ** 2),
                   red(model.a2 / pi))
        kind, t0 = _root_structure(P, base)
        if kind == "distinct":
            return model, tr, KodairaSymbol("I*", 0)
        if not base.is_zero(t0):
            model, tr = shift(model, tr, r=res.lift(t0) * pi)
        if kind == "double":
            # step 7 subprocedure: walk the I*_n chain
            m = 1
            while True:
                if m % 2 == 1:
                    k = (m + 3) // 2
                    quad = _quad(base, -red(model.a6 / pi ** (2 * k)),
                                 red(model.a3 / pi ** k))
                    qkind, y0 = _root_structure(quad, base)
                    if qkind == "distinct":
                        return model, tr, KodairaSymbol("I*", m)
                    if not base.is_zero(y0):
                        model, tr = shift(model, tr, tau=res.lift(y0) * pi ** k)
                else:
                    k = (m + 2) // 2
                    quad = _quad2(base, red(model.a6 / pi ** (2 * k + 1)),
                                  red(model.a4 / pi ** (k + 1)),
                                  red(model.a2 / pi))
                    qkind, x0 = _root_structure(quad, base)
                    if qkind == "distinct":
                        return model, tr, KodairaSymbol("I*", m)
                    if not base.is_zero(x0):
                        model, tr = shift(model, tr, r=res.lift(x0) * pi ** k)
                m += 1
        # step 8: triple root (now at the origin)
        quad = _quad(base, -red(model.a6 / pi ** 4), red(model.a3 / pi ** 2))
        qkind, y0 = _root_structure(quad, base)
        if qkind == "distinct":
            return model, tr, KodairaSymbol("IV*")
        if not base.is_zero(y0):
            model, tr = shift(model, tr, tau=res.lift(y0) * pi ** 2)
        if _val(model.a4, v) < 4:
            return model, tr, KodairaSymbol("III*")
        if _val(model.a6, v) < 6:
            return model, tr, KodairaSymbol("II*")
        # step 11: non-minimal, rescale and restart
        step = _scaling(field, pi)
        model, tr = step.apply(model), tr.then(step)


def _cubic(base, c0, c1, c2) -> Poly:
    return Poly.make(base, [c0, c1, c2, base.one()])


def _quad(base, c0, c1) -> Poly:
    """Y^2 + c1 Y + c0."""
    return Poly.make(base, [c0, c1, base.one()])


def _quad2(base, c0, c1, c2) -> Poly:
    """c2 X^2 + c1 X + c0 (c2 a unit)."""
    return Poly.make(base, [c0, c1, c2])


def _root_structure(f: Poly, base) -> tuple:
    """('distinct', None) if f is separable, else ('double'|'triple', root).

    The repeated root of a cubic/quadratic over the residue field is always
    rational; for inseparable cases in characteristic p the Frobenius is
    inverted directly (the residue fields in play are prime fields).
    """
    df = f.derivative()
    p = base.char
    if df.is_zero():
        # f = g(T^p): repeated root; for our cubics/quadratics this means
        # f = (T - t)^p with t = (-1)^p * constant-root
        if f.degree() == 2:
            c = f.coeff(0) / f.leading()
            r = base.sqrt(c)
            if r is None:
                raise CharUnsupported("inseparable quadratic without a root")
            return "double", r
        # cubic T^3 + c over F_3: cube map is identity
        c = f.coeff(0) / f.leading()
        return "triple", -c
    g = f.gcd(df)
    if g.degree() == 0:
        return "distinct", None
    # a cubic/quadratic has at most one repeated root, so g = (T - t)^deg(g)
    if g.degree() == 1:
        t = -g.coeff(0)
    elif p == 2:
        t = base.sqrt(g.monic().coeff(0))
        if t is None:
            raise CharUnsupported("repeated root not rational")
    else:
        t = -g.monic().coeff(1) / base.coerce(2)
    lin = Poly.make(base, [-t, base.one()])
    h = f
    mult = 0
    while True:
        q, r = h.divmod(lin)
        if not r.is_zero():
            break
        h = q
        mult += 1
    return ("triple" if mult >= 3 else "double"), t


def _singular_point(model: Model, res: ResidueField) -> Optional[tuple]:
    """The singular point of the reduced Weierstrass curve, if any."""
    base = res.fieldlike

    def red(f):
        return res.reduce_ratfunc(f)

    a1, a2, a3, a4, a6 = (base.coerce(red(a)) for a in model.coefficients())
    if base.char == 2:
        # brute force over the tiny residue field (degree-1 places in char 2)
        bf = res.base
        vals = [bf.coerce(k) for k in range(bf.p)]
        three, two = bf.coerce(3), bf.coerce(2)
        for x in vals:
            for y in vals:
                fx = a1 * y - (three * x * x + two * a2 * x + a4)
                fy = two * y + a1 * x + a3
                fv = (y * y + a1 * x * y + a3 * y
                      - (x * x * x + a2 * x * x + a4 * x + a6))
                if bf.is_zero(fx) and bf.is_zero(fy) and bf.is_zero(fv):
                    return x, y
        return None
    # complete the square: eta^2 = G(x); the singular x is a repeated root of G
    two = base.coerce(2)
    four = base.coerce(4)
    b2 = a1 * a1 + four * a2
    b4 = two * a4 + a1 * a3
    b6 = a3 * a3 + four * a6
    G = Poly.make(base, [b6 / four, b4 / two, b2 / four, base.one()])
    kind, x0 = _root_structure(G, base)
    if kind == "distinct":
        return None
    y0 = -(a1 * x0 + a3) / two
    return x0, y0


# ---------------------------------------------------------------------------
# helpers for testing invariance under random coordinate changes


def random_transform(field: BaseField, rng) -> Transform:
    def small_poly() -> RatFunc:
        coeffs = [field.random(rng, 3) for _ in range(rng.randint(1, 2))]
        return RatFunc.from_poly(Poly.make(field, coeffs))

    u = RatFunc.const(field, 0)
    while u.is_zero():
        u = RatFunc.const(field, field.random(rng, 4))
    return Transform(u, small_poly(), small_poly(), small_poly())

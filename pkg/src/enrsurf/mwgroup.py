"""Sections of an elliptic surface: group law, torsion, fiber-component
incidence, intersection numbers and the height pairing.

Component indices are computed on the local minimal model.  A section
through the node of an I_n fiber sits on chain component min(val eta, n/2)
where eta = y + (a1 x + a3)/2; this follows from the analytic A_{n-1} local
form, where the two branches u, v satisfy val u + val v = n and eta is their
half-sum.  Near/far discrimination on I*_n fibers matches the section
against the Hensel lift of the lone valuation-1 root of the cubic, and all
remaining orientation questions (which side of a chain, which far leg) are
settled with the component homomorphism applied to P - Q and P + Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactalg import (
    BaseField, Place, Poly, RatFunc, ResidueField, factor_support, valuation,
)
from .weierstrass import (
    CharUnsupported, DegenerateModel, KodairaFiber, Model, Transform,
    conjugate_to_finite, fiber_table, kodaira_type, minimal_model_at,
)


class NotTriangular(ValueError):
    """The symbolic elimination could not be ordered."""


class NonIntegerIntersection(ValueError):
    """A derived intersection number failed to be a nonnegative integer."""


# ---------------------------------------------------------------------------
# sections and the group law


@dataclass(frozen=True)
class Section:
    """A point of the generic fiber: affine (x, y) or the zero section."""

    x: Optional[RatFunc] = None
    y: Optional[RatFunc] = None

    @staticmethod
    def zero() -> "Section":
        return Section(None, None)

    @staticmethod
    def affine(x: RatFunc, y: RatFunc) -> "Section":
        return Section(x, y)

    @property
    def is_zero(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        if self.is_zero:
            return "zero"
        return f"(x = {self.x}, y = {self.y})"


def section(w: Model, x, y) -> Section:
    """Construct an affine section, checking the Weierstrass relation."""
    field = w.field
    if isinstance(x, Poly):
        x = RatFunc.from_poly(x)
    if isinstance(y, Poly):
        y = RatFunc.from_poly(y)
    if not isinstance(x, RatFunc):
        x = RatFunc.const(field, x)
    if not isinstance(y, RatFunc):
        y = RatFunc.const(field, y)
    p = Section.affine(x, y)
    if not is_on_curve(w, p):
        raise ValueError(f"point {p} does not satisfy {w}")
    return p


def is_on_curve(w: Model, p: Section) -> bool:
    if p.is_zero:
        return True
    return w.equation_residual(p.x, p.y).is_zero()


def negate(w: Model, p: Section) -> Section:
    if p.is_zero:
        return p
    return Section.affine(p.x, -p.y - w.a1 * p.x - w.a3)


def add(w: Model, p: Section, q: Section) -> Section:
    """Chord-tangent addition in generalized Weierstrass form."""
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    field = w.field
    a1, a2, a3, a4, a6 = w.coefficients()
    c = lambda n: RatFunc.const(field, n)
    if p.x == q.x:
        if (p.y + q.y + a1 * p.x + a3).is_zero():
            return Section.zero()
        num = c(3) * p.x * p.x + c(2) * a2 * p.x + a4 - a1 * p.y
        den = c(2) * p.y + a1 * p.x + a3
        lam = num / den
        nu = (-(p.x ** 3) + a4 * p.x + c(2) * a6 - a3 * p.y) / den
    else:
        lam = (q.y - p.y) / (q.x - p.x)
        nu = (p.y * q.x - q.y * p.x) / (q.x - p.x)
    x3 = lam * lam + a1 * lam - a2 - p.x - q.x
    y3 = -(lam + a1) * x3 - nu - a3
    return Section.affine(x3, y3)


def multiple(w: Model, n: int, p: Section) -> Section:
    if n < 0:
        return multiple(w, -n, negate(w, p))
    acc = Section.zero()
    base = p
    while n:
        if n & 1:
            acc = add(w, acc, base)
        base = add(w, base, base)
        n >>= 1
    return acc


@dataclass(frozen=True)
class NotTorsionUpTo:
    bound: int


# torsion sections of the surfaces in scope have x-coordinates of tiny
# degree; once a multiple overshoots this, the section cannot be torsion
_TORSION_DEGREE_GUARD = 40


def torsion_order(w: Model, p: Section, bound: int = 12):
    """Smallest m <= bound with m*P = 0, else NotTorsionUpTo(bound)."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    acc = p
    for m in range(1, bound + 1):
        if acc.is_zero:
            return m
        if (acc.x.num.degree() > _TORSION_DEGREE_GUARD
                or acc.x.den.degree() > _TORSION_DEGREE_GUARD):
            return NotTorsionUpTo(bound)
        acc = add(w, acc, p)
    return NotTorsionUpTo(bound)


# ---------------------------------------------------------------------------
# localization of sections


_INV_S_CACHE: dict = {}


def _inv_s(field: BaseField) -> RatFunc:
    if field not in _INV_S_CACHE:
        _INV_S_CACHE[field] = RatFunc.make(Poly.const(field, 1), Poly.x(field))
    return _INV_S_CACHE[field]


@dataclass(frozen=True)
class LocalModel:
    model: Model            # minimal at `place`
    tr: Transform
    at_infinity: bool
    place: Place            # always finite (s = 0 stands in for infinity)
    fiber: KodairaFiber     # carries the original place


_LOCAL_CACHE: dict = {}


def local_model(w: Model, v: Place) -> LocalModel:
    key = (w, str(v))
    hit = _LOCAL_CACHE.get(key)
    if hit is not None:
        return hit
    fiber = kodaira_type(w, v)
    model, tr = minimal_model_at(w, v)
    vv = Place.at(w.field, 0) if v.is_infinity else v
    ld = LocalModel(model, tr, v.is_infinity, vv, fiber)
    _LOCAL_CACHE[key] = ld
    return ld


def _localize_point(w: Model, v: Place, p: Section) -> tuple:
    """Coordinates of p on the local minimal model at v."""
    ld = local_model(w, v)
    x, y = p.x, p.y
    if ld.at_infinity:
        inv = _inv_s(w.field)
        x, y = x.compose(inv), y.compose(inv)
    return ld.tr.push_point(x, y)


def _val(f: RatFunc, v: Place) -> int:
    if f.is_zero():
        return 10 ** 9
    return valuation(f, v)


def _eta(m: Model, x: RatFunc, y: RatFunc) -> RatFunc:
    two = RatFunc.const(m.field, 2)
    return y + (m.a1 * x + m.a3) / two


def _singular_point_of(ld: LocalModel):
    from .weierstrass import _singular_point
    res = ResidueField(ld.model.field, ld.place)
    return _singular_point(ld.model, res), res


def _through_singular(ld: LocalModel, x: RatFunc, y: RatFunc) -> bool:
    """Does the section reduce to the singular point of the local fiber?"""
    (sing, res) = _singular_point_of(ld)
    if sing is None:
        return False
    if _val(x, ld.place) < 0:
        return False
    x0, y0 = sing
    base = res.fieldlike
    xr = base.coerce(res.reduce_ratfunc(x))
    yr = base.coerce(res.reduce_ratfunc(y))
    return base.is_zero(xr - base.coerce(x0)) and base.is_zero(yr - base.coerce(y0))


# ---------------------------------------------------------------------------
# component incidence


@dataclass(frozen=True)
class ComponentIncidence:
    """Which component of the fiber at `place` the section meets.

    index 0 is the identity component.  For I_n the index is the chain
    distance class min(k, n-k); for I*_n it is 1 (near simple component E1)
    or 2 (one of the far components E2/E3); for III/IV/III*/IV* it is 1.
    """

    place: Place
    index: int
    symbol: str


def component_index(w: Model, p: Section, v: Place) -> ComponentIncidence:
    ld = local_model(w, v)
    sym = ld.fiber.symbol
    tag = str(sym)
    if p.is_zero:
        return ComponentIncidence(v, 0, tag)
    x, y = _localize_point(w, v, p)
    if _val(x, ld.place) < 0:
        return ComponentIncidence(v, 0, tag)
    if not _through_singular(ld, x, y):
        return ComponentIncidence(v, 0, tag)
    field = w.field
    if sym.kind == "I":
        n = sym.n
        if n <= 1:
            return ComponentIncidence(v, 0, tag)
        if field.char == 2:
            two = multiple(w, 2, p)
            if two.is_zero and n % 2 == 0:
                return ComponentIncidence(v, n // 2, tag)
            raise CharUnsupported(
                "chain position on I_n needs characteristic != 2")
        eta = _eta(ld.model, x, y)
        a = min(_val(eta, ld.place), n // 2)
        if 2 * a > n:
            raise NonIntegerIntersection(f"inconsistent chain position at {v}")
        return ComponentIncidence(v, a, tag)
    if sym.kind in ("II", "II*"):
        return ComponentIncidence(v, 0, tag)
    if sym.kind in ("III", "III*", "IV", "IV*"):
        return ComponentIncidence(v, 1, tag)
    if sym.kind == "I*":
        if field.char in (2, 3):
            raise CharUnsupported("I*_n incidence needs characteristic != 2, 3")
        near = _instar_is_near(ld, x)
        return ComponentIncidence(v, 1 if near else 2, tag)
    raise CharUnsupported(f"unsupported fiber {sym} at {v}")


def _instar_is_near(ld: LocalModel, x: RatFunc) -> bool:
    """For a section through the singular point of an I*_n fiber: does it
    meet the near simple component E1 (true) or a far one (false)?

    E1 tracks the lone valuation-1 root of G(x) = x^3 + (b2/4)x^2 + ... to
    second order; the far legs track the deeper double root.  Deciding this
    only needs the lone root mod pi^2, i.e. its residue direction.
    """
    m = ld.model
    field = m.field
    vv = ld.place
    pi = RatFunc.from_poly(vv.poly)
    res = ResidueField(field, vv)
    base = res.fieldlike
    c = lambda n: RatFunc.const(field, n)
    b2 = m.b_invariants()[0]
    sing, _ = _singular_point_of(ld)
    x0 = res.lift(sing[0])
    # G(x0 + pi T)/pi^3 = T^3 + c2' T^2 + O(pi); the lone direction is the
    # simple root -c2'(0) of the reduced cubic T^2 (T + c2')
    c2bar = base.coerce(res.reduce_ratfunc((c(3) * x0 + b2 / c(4)) / pi))
    lone = x0 + pi * res.lift(-c2bar)
    return _val(x - lone, vv) >= 2


def _index_raw(w: Model, p: Section, v: Place) -> int:
    return component_index(w, p, v).index


# ---------------------------------------------------------------------------
# intersection numbers


def intersection_with_zero(w: Model, p: Section) -> int:
    """P.O: the intersection number of the section with the zero section."""
    if p.is_zero:
        raise ValueError("P.O is only defined for a nonzero section")
    total = 0
    cands = []
    if p.x.den.degree() > 0:
        cands.extend(v for v, _ in factor_support(p.x.den))
    cands.append(Place.infinity())
    for v in cands:
        ld = local_model(w, v)
        x, _ = _localize_point(w, v, p)
        val = _val(x, ld.place)
        if val < 0:
            if val % 2:
                raise NonIntegerIntersection(
                    f"odd pole order of x at {v}; section not transported correctly")
            total += (-val // 2) * v.degree()
    return total


def _same_component_contact(ld: LocalModel, xP, yP, xQ, yQ, a: int) -> int:
    """Local P.Q when both sections pass through the node of an I_n fiber on
    the same chain component a: min(val(eta diff), val(x diff)) - a."""
    vv = ld.place
    m = ld.model
    dx = xP - xQ
    de = _eta(m, xP, yP) - _eta(m, xQ, yQ)
    mv = min(_val(dx, vv), _val(de, vv)) - a
    return max(0, mv)


def intersect_sections(w: Model, p: Section, q: Section) -> int:
    """P.Q for distinct nonzero sections."""
    if p.is_zero or q.is_zero:
        raise ValueError("use intersection_with_zero for the zero section")
    if p == q:
        raise ValueError("P.Q needs distinct sections")
    field = w.field
    cands = {}
    diff = p.x - q.x
    if not diff.is_zero() and diff.num.degree() > 0:
        for v, _ in factor_support(diff.num):
            cands[str(v)] = v
    if diff.is_zero():
        # same x coordinate everywhere: they can only meet where y's agree
        dy = p.y - q.y
        if dy.num.degree() > 0:
            for v, _ in factor_support(dy.num):
                cands[str(v)] = v
    for f in (p.x.den, q.x.den):
        if f.degree() > 0:
            for v, _ in factor_support(f):
                cands[str(v)] = v
    cands["inf"] = Place.infinity()
    total = 0
    for v in cands.values():
        ld = local_model(w, v)
        vv = ld.place
        xP, yP = _localize_point(w, v, p)
        xQ, yQ = _localize_point(w, v, q)
        vxP, vxQ = _val(xP, vv), _val(xQ, vv)
        if vxP < 0 and vxQ < 0:
            # both at the zero point; fiber coordinate is z = x/y
            z = xP / yP - xQ / yQ
            total += max(0, _val(z, vv)) * v.degree()
            continue
        if vxP < 0 or vxQ < 0:
            continue
        res = ResidueField(field, vv)
        base = res.fieldlike
        try:
            same = (base.is_zero(base.coerce(res.reduce_ratfunc(xP - xQ)))
                    and base.is_zero(base.coerce(res.reduce_ratfunc(yP - yQ))))
        except ZeroDivisionError:
            same = False
        if not same:
            continue
        if not _through_singular(ld, xP, yP):
            mv = min(_val(xP - xQ, vv), _val(yP - yQ, vv))
            total += max(0, mv) * v.degree()
            continue
        sym = ld.fiber.symbol
        if sym.kind != "I":
            raise NonIntegerIntersection(
                f"direct P.Q through an additive singular point at {v} is out of scope")
        n = sym.n
        if n == 1:
            # node of an irreducible fiber: honest contact in the branches
            mv = min(_val(xP - xQ, vv), _val(_eta(ld.model, xP, yP)
                                             - _eta(ld.model, xQ, yQ), vv))
            total += max(0, mv) * v.degree()
            continue
        aP = min(_val(_eta(ld.model, xP, yP), vv), n // 2)
        aQ = min(_val(_eta(ld.model, xQ, yQ), vv), n // 2)
        same_side, _ = _chain_alignment(w, p, q, v, n, aP, aQ)
        jq = aQ if same_side else (n - aQ) % n
        if aP != jq:
            continue  # different chain components: strict transforms disjoint
        total += _same_component_contact(ld, xP, yP, xQ, yQ, aP) * v.degree()
    return total


def _chain_alignment(w, p, q, v, n: int, aP: int, aQ: int):
    """Resolve relative orientation of two sections on an I_n chain.

    Returns (same_side, aQ) where same_side means the signed positions are
    (aP, aQ) rather than (aP, n - aQ); uses the component homomorphism on
    P - Q and P + Q.
    """
    if aP in (0, n) or aQ in (0, n):
        return True, aQ
    if 2 * aP % n == 0 or 2 * aQ % n == 0:
        return True, aQ  # orientation irrelevant
    same_diff = abs(aP - aQ)
    same_sum = min((aP + aQ) % n, (-aP - aQ) % n)
    opp_diff = min((aP + aQ) % n, (-aP - aQ) % n)
    opp_sum = abs(aP - aQ)
    d = add(w, p, negate(w, q))
    ad = 0 if d.is_zero else _index_raw(w, d, v)
    if same_diff != opp_diff:
        return (ad == same_diff), aQ
    s = add(w, p, q)
    as_ = 0 if s.is_zero else _index_raw(w, s, v)
    if same_sum != opp_sum:
        return (as_ == same_sum), aQ
    return True, aQ  # both hypotheses agree; contribution identical


# ---------------------------------------------------------------------------
# height pairing


_CHI_CACHE: dict = {}


def surface_chi(w: Model) -> int:
    if w not in _CHI_CACHE:
        total = fiber_table(w).total_euler
        if total % 12:
            raise DegenerateModel(f"Euler number {total} not divisible by 12")
        _CHI_CACHE[w] = total // 12
    return _CHI_CACHE[w]


def _contr_single(sym: str, index: int, n: int) -> Fraction:
    if index == 0:
        return Fraction(0)
    if sym.startswith("I") and not sym.endswith("*") and sym not in ("II", "III", "IV"):
        return Fraction(index * (n - index), n)
    if sym == "III":
        return Fraction(1, 2)
    if sym == "IV":
        return Fraction(2, 3)
    if sym == "III*":
        return Fraction(3, 2)
    if sym == "IV*":
        return Fraction(4, 3)
    if sym == "II" or sym == "II*":
        return Fraction(0)
    if sym.endswith("*"):  # I*_n
        return Fraction(1) if index == 1 else Fraction(1) + Fraction(n, 4)
    raise ValueError(f"no correction term for {sym}")


def _contr_pair(w: Model, v: Place, fiber: KodairaFiber,
                p: Section, q: Section, ip: int, iq: int) -> Fraction:
    """contr_v(P, Q) for distinct sections with known component indices."""
    if ip == 0 or iq == 0:
        return Fraction(0)
    sym = fiber.symbol
    if sym.kind == "I":
        n = sym.n
        same_side, _ = _chain_alignment(w, p, q, v, n, ip, iq)
        jq = iq if same_side else (n - iq) % n
        i, j = sorted((ip, jq))
        return Fraction(i * (n - j), n)
    if sym.kind in ("III", "III*"):
        return Fraction(1, 2) if sym.kind == "III" else Fraction(3, 2)
    if sym.kind in ("IV", "IV*"):
        d = add(w, p, negate(w, q))
        same = d.is_zero or _index_raw(w, d, v) == 0
        if sym.kind == "IV":
            return Fraction(2, 3) if same else Fraction(1, 3)
        return Fraction(4, 3) if same else Fraction(2, 3)
    if sym.kind == "I*":
        n = sym.n
        if ip == 1 and iq == 1:
            return Fraction(1)
        if 1 in (ip, iq):
            return Fraction(1, 2)
        d = add(w, p, negate(w, q))
        same = d.is_zero or _index_raw(w, d, v) == 0
        if same:
            return Fraction(1) + Fraction(n, 4)
        return Fraction(1, 2) + Fraction(n, 4)
    return Fraction(0)


def height(w: Model, p: Section) -> Fraction:
    """h(P) = 2chi + 2 P.O - sum of local correction terms."""
    if p.is_zero:
        return Fraction(0)
    chi = surface_chi(w)
    po = intersection_with_zero(w, p)
    total = Fraction(2 * chi) + 2 * po
    for fiber in fiber_table(w).fibers:
        if fiber.components <= 1 and fiber.symbol.kind != "I":
            continue
        idx = component_index(w, p, fiber.place).index
        n = fiber.symbol.n
        total -= (_contr_single(str(fiber.symbol), idx, n)
                  * fiber.place.degree())
    return total


def pairing(w: Model, p: Section, q: Section) -> Fraction:
    """The height pairing <P, Q>."""
    if p.is_zero or q.is_zero:
        return Fraction(0)
    if p == q:
        return height(w, p)
    if p == negate(w, q):
        return -height(w, p)
    chi = surface_chi(w)
    po = intersection_with_zero(w, p)
    qo = intersection_with_zero(w, q)
    pq = intersect_sections(w, p, q)
    total = Fraction(chi) + po + qo - pq
    for fiber in fiber_table(w).fibers:
        if fiber.components <= 1 and fiber.symbol.kind != "I":
            continue
        ip = component_index(w, p, fiber.place).index
        iq = component_index(w, q, fiber.place).index
        total -= _contr_pair(w, fiber.place, fiber, p, q, ip, iq) * fiber.place.degree()
    return total


# ---------------------------------------------------------------------------
# integral-section solver (symbolic front end lives in solver.py)


from .solver import (  # noqa: E402  (re-export; implementation split out)
    IncidenceRequirement, SolverOutcome, brute_force_sections,
    solve_integral_sections,
)

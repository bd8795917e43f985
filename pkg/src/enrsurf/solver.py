"""Degree-bounded integral-section solver.

Symbolic mode: sections (x, y) with deg x <= 4, deg y <= 6 are written with
unknown coefficients, anti-invariance under the deck involution and the
incidence pins are imposed, and the on-curve residual is eliminated
coefficient by coefficient, highest s-degree first, branching on signs and
on the rational roots of pure conditions in the family parameter b.

Brute mode: over F_p the deck-invariant x-candidates are enumerated on the
invariant basis {1, m, m^2} (m = s^2 - e s for the deck s -> e - s), the
y-coordinate is recovered from an exact polynomial square root of the
completed square, and the incidence pins are checked directly.  This path
shares no code with the elimination and serves as its oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Union

from .exactalg import BaseField, GF, Gauss, Place, Poly, QI, RatFunc
from .weierstrass import Model


def _coeff(c):
    """Normalize a scalar to Fraction, keeping Gauss values as they are."""
    if isinstance(c, Gauss):
        return c if c.im else c.re
    return Fraction(c)


def _is_rat(c) -> bool:
    return not isinstance(c, Gauss)


class NotTriangularError(ValueError):
    pass


# ---------------------------------------------------------------------------
# sparse multivariate polynomials over Q

Monomial = tuple  # sorted tuple of (var, exponent) pairs


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    out = dict(m1)
    for v, e in m2:
        out[v] = out.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in out.items() if e))


@dataclass(frozen=True)
class MPoly:
    """Multivariate polynomial over Q, as {monomial: coefficient}."""

    terms: tuple  # sorted tuple of (Monomial, Fraction)

    @staticmethod
    def make(d: dict) -> "MPoly":
        items = tuple(sorted(((m, c) for m, c in d.items() if c),
                             key=lambda t: (t[0], str(t[1]))))
        return MPoly(items)

    @staticmethod
    def const(c) -> "MPoly":
        return MPoly.make({(): _coeff(c)})

    @staticmethod
    def var(name: str) -> "MPoly":
        return MPoly.make({((name, 1),): Fraction(1)})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: "MPoly") -> "MPoly":
        d = self.as_dict()
        for m, c in other.terms:
            d[m] = d.get(m, Fraction(0)) + c
        return MPoly.make(d)

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __neg__(self) -> "MPoly":
        return MPoly(tuple((m, -c) for m, c in self.terms))

    def __mul__(self, other: "MPoly") -> "MPoly":
        d: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = _mono_mul(m1, m2)
                d[m] = d.get(m, Fraction(0)) + c1 * c2
        return MPoly.make(d)

    def scale(self, c) -> "MPoly":
        c = _coeff(c)
        return MPoly(tuple((m, cc * c) for m, cc in self.terms)) if c else MPoly(())

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set:
        out = set()
        for m, _ in self.terms:
            for v, _e in m:
                out.add(v)
        return out

    def degree_in(self, var: str) -> int:
        deg = 0
        for m, _ in self.terms:
            for v, e in m:
                if v == var:
                    deg = max(deg, e)
        return deg

    def coeff_of(self, var: str, exp: int) -> "MPoly":
        d: dict = {}
        for m, c in self.terms:
            md = dict(m)
            if md.get(var, 0) == exp:
                rest = tuple(sorted((v, e) for v, e in md.items() if v != var))
                d[rest] = d.get(rest, Fraction(0)) + c
        return MPoly.make(d)

    def substitute(self, assign: dict) -> "MPoly":
        """Substitute variables by MPoly (or Fraction) values."""
        out = MPoly.const(0)
        for m, c in self.terms:
            term = MPoly.const(c)
            for v, e in m:
                if v in assign:
                    val = assign[v]
                    if not isinstance(val, MPoly):
                        val = MPoly.const(val)
                    for _ in range(e):
                        term = term * val
                else:
                    term = term * MPoly.make({((v, e),): Fraction(1)})
            out = out + term
        return out

    def constant_value(self) -> Fraction:
        if self.variables():
            raise ValueError("not a constant")
        return self.terms[0][1] if self.terms else Fraction(0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for m, c in self.terms:
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in m)
            bits.append(f"{c}" if not mono else (f"{c}*{mono}" if c != 1 else mono))
        return " + ".join(bits)


def _univar_coeffs(eq: MPoly, var: str) -> list:
    """[(exp, coefficient MPoly without var)] sorted by exponent."""
    return [(e, eq.coeff_of(var, e)) for e in range(eq.degree_in(var) + 1)]


def _rational_roots_q(coeffs: list) -> list:
    """Roots of sum coeffs[k] * b^k in the coefficient field (Q or Q(i))."""
    from .exactalg import Poly as _Poly, QQ as _QQ, _rational_roots
    if any(not _is_rat(c) for c in coeffs):
        f = _Poly.make(QI, [_gaussify(c) for c in coeffs])
        if f.degree() < 1:
            return []
        return [_coeff(r) for r in _rational_roots(f)]
    f = _Poly.make(_QQ, coeffs)
    if f.degree() < 1:
        return []
    return [Fraction(r) for r in _rational_roots(f)]


def _gaussify(c) -> Gauss:
    return c if isinstance(c, Gauss) else Gauss(Fraction(c), Fraction(0))


def _sqrt_coeff(c):
    """Exact square root in the coefficient field, or None."""
    if isinstance(c, Gauss):
        return QI.sqrt(c)
    import math
    if c < 0:
        return None
    rn, rd = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if rn * rn == c.numerator and rd * rd == c.denominator:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# polynomials in s with MPoly coefficients


def _sp_add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    z = MPoly.const(0)
    return [(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z)
            for i in range(n)]


def _sp_mul(a: list, b: list) -> list:
    z = MPoly.const(0)
    out = [z] * (len(a) + len(b) - 1) if a and b else []
    for i, ca in enumerate(a):
        if ca.is_zero():
            continue
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return out


def _sp_scale(a: list, c: MPoly) -> list:
    return [x * c for x in a]


def _sp_compose_linear(a: list, e: MPoly) -> list:
    """Substitute s -> e - s."""
    out = [MPoly.const(0)]
    lin = [e, MPoly.const(-1)]
    power = [MPoly.const(1)]
    for c in a:
        out = _sp_add(out, _sp_scale(power, c))
        power = _sp_mul(power, lin)
    return out


def _sp_mod(a: list, m: list) -> list:
    """Remainder of a by a monic (leading coefficient 1) polynomial m."""
    lead = m[-1]
    if not (len(lead.terms) == 1 and lead.terms[0][0] == () and lead.terms[0][1] == 1):
        raise ValueError("modulus must be monic")
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        if not c.is_zero():
            for j in range(dm + 1):
                a[len(a) - 1 - dm + j] = a[len(a) - 1 - dm + j] - c * m[j]
        a.pop()
    return a


def _sp_from_poly(p: Poly) -> list:
    return [MPoly.const(Fraction(c)) for c in p.coeffs]


# ---------------------------------------------------------------------------
# problem description


@dataclass(frozen=True)
class IncidenceRequirement:
    """The section must pass through (x0, y0) over the given place.

    ``place`` is 'inf' or the coefficient list of a monic polynomial in s
    (entries may involve the parameter b); x0 and y0 are coefficient lists.
    """

    place: Union[str, tuple]
    x0: tuple
    y0: tuple

    @staticmethod
    def at_infinity(x0, y0) -> "IncidenceRequirement":
        return IncidenceRequirement("inf", (MPoly.const(x0),), (MPoly.const(y0),))

    @staticmethod
    def at(place_coeffs, x0, y0) -> "IncidenceRequirement":
        pc = tuple(c if isinstance(c, MPoly) else MPoly.const(c) for c in place_coeffs)
        xx = tuple(c if isinstance(c, MPoly) else MPoly.const(c) for c in x0)
        yy = tuple(c if isinstance(c, MPoly) else MPoly.const(c) for c in y0)
        return IncidenceRequirement(pc, xx, yy)


@dataclass(frozen=True)
class SectionFamily:
    """Weierstrass coefficients, polynomial in s over Q[b], plus the deck map
    s -> e - s; for the catalog families e is 0 or -1 - (b - 1)... supplied
    explicitly by the caller."""

    a1: tuple
    a2: tuple
    a3: tuple
    a4: tuple
    a6: tuple
    deck_e: MPoly
    deg_x: int = 4
    deg_y: int = 6

    def specialize(self, field: BaseField, beta: Optional[Fraction]) -> Model:
        def mk(cs) -> Poly:
            vals = []
            for c in cs:
                cc = c.substitute({"b": MPoly.const(beta)}) if beta is not None else c
                vals.append(field.coerce(cc.constant_value()))
            return Poly.make(field, vals)
        return Model.make(field, mk(self.a1), mk(self.a2), mk(self.a3),
                          mk(self.a4), mk(self.a6))


@dataclass
class DeadBranch:
    assignments: dict
    constant: Fraction
    note: str = ""


@dataclass
class Solution:
    beta: Optional[Fraction]
    x_coeffs: tuple
    y_coeffs: tuple

    def as_section(self, field: BaseField):
        from .mwgroup import Section
        x = Poly.make(field, [field.coerce(c) for c in self.x_coeffs])
        y = Poly.make(field, [field.coerce(c) for c in self.y_coeffs])
        return Section.affine(RatFunc.from_poly(x), RatFunc.from_poly(y))


@dataclass
class SolverOutcome:
    solutions: list
    dead_branches: list

    def betas(self) -> list:
        return sorted({s.beta for s in self.solutions},
                      key=lambda b: (b is None, isinstance(b, Gauss), str(b)))


# ---------------------------------------------------------------------------
# the elimination


def solve_integral_sections(family: SectionFamily,
                            constraints: list,
                            beta: Optional[Fraction] = None,
                            allow_i: bool = False) -> SolverOutcome:
    """All integral sections of the family satisfying the constraints.

    With ``beta`` given the parameter is fixed; otherwise conditions on b are
    part of the output (each solution carries the b it forces).
    """
    nx, ny = family.deg_x, family.deg_y
    xvars = [f"x{i}" for i in range(nx + 1)]
    yvars = [f"y{i}" for i in range(ny + 1)]
    x = [MPoly.var(v) for v in xvars]
    y = [MPoly.var(v) for v in yvars]

    base_assign: dict = {}
    if beta is not None:
        base_assign["b"] = MPoly.const(beta)

    equations: list = []  # (priority, MPoly); lower priority first

    # anti-invariance: x(e - s) = x(s); y(e - s) = -y(s) - a1 x - a3
    e = family.deck_e
    x_deck = _sp_compose_linear(x, e)
    for k, eq in enumerate(_sp_add(x_deck, _sp_scale(x, MPoly.const(-1)))):
        equations.append((0, k, eq))
    y_deck = _sp_compose_linear(y, e)
    rhs = _sp_add(_sp_scale(y, MPoly.const(-1)),
                  _sp_scale(_sp_mul(list(family.a1), x), MPoly.const(-1)))
    rhs = _sp_add(rhs, _sp_scale([c for c in family.a3], MPoly.const(-1)))
    for k, eq in enumerate(_sp_add(y_deck, _sp_scale(rhs, MPoly.const(-1)))):
        equations.append((0, k, eq))

    # incidence pins
    for req in constraints:
        if req.place == "inf":
            equations.append((1, 0, x[nx] - req.x0[0]))
            equations.append((1, 0, y[ny] - req.y0[0]))
        else:
            mod = list(req.place)
            for k, eq in enumerate(_sp_mod(_sp_add(x, _sp_scale(list(req.x0), MPoly.const(-1))), mod)):
                equations.append((1, k, eq))
            for k, eq in enumerate(_sp_mod(_sp_add(y, _sp_scale(list(req.y0), MPoly.const(-1))), mod)):
                equations.append((1, k, eq))

    # on-curve residual y^2 + a1 x y + a3 y - x^3 - a2 x^2 - a4 x - a6 = 0
    a1, a2, a3 = list(family.a1), list(family.a2), list(family.a3)
    a4, a6 = list(family.a4), list(family.a6)
    res = _sp_mul(y, y)
    res = _sp_add(res, _sp_mul(_sp_mul(a1, x), y))
    res = _sp_add(res, _sp_mul(a3, y))
    res = _sp_add(res, _sp_scale(_sp_mul(_sp_mul(x, x), x), MPoly.const(-1)))
    res = _sp_add(res, _sp_scale(_sp_mul(_sp_mul(a2, x), x), MPoly.const(-1)))
    res = _sp_add(res, _sp_scale(_sp_mul(a4, x), MPoly.const(-1)))
    res = _sp_add(res, _sp_scale(a6, MPoly.const(-1)))
    for k, eq in enumerate(res):
        # highest s-degree first within the residual block
        equations.append((2, len(res) - k, eq))

    equations.sort(key=lambda t: (t[0], t[1]))
    eqs = [eq for _, _, eq in equations]

    solutions: list = []
    dead: list = []
    _eliminate(eqs, dict(base_assign), solutions, dead, depth=0, allow_i=allow_i)

    out = []
    seen = set()
    for assign in solutions:
        bval = assign.get("b")
        bfrac = bval.constant_value() if isinstance(bval, MPoly) else bval
        xs = tuple(_assigned_value(assign, v) for v in xvars)
        ys = tuple(_assigned_value(assign, v) for v in yvars)
        key = (bfrac, xs, ys)
        if key in seen:
            continue
        seen.add(key)
        out.append(Solution(bfrac, xs, ys))
    out.sort(key=lambda s: (s.beta is None, str(s.beta),
                            [str(c) for c in s.x_coeffs],
                            [str(c) for c in s.y_coeffs]))
    return SolverOutcome(out, dead)


def _assigned_value(assign: dict, var: str) -> Fraction:
    val = assign.get(var, MPoly.const(0))
    if not isinstance(val, MPoly):
        val = MPoly.const(val)
    for _ in range(len(assign) + 2):
        if not val.variables():
            return val.constant_value()
        nxt = val.substitute(assign)
        if nxt == val:
            break
        val = nxt
    raise NotTriangularError(f"value of {var} left symbolic: {val}")


_MAX_DEPTH = 60


def _eliminate(eqs: list, assign: dict, solutions: list, dead: list, depth: int,
               allow_i: bool = False):
    if depth > _MAX_DEPTH:
        raise NotTriangularError("branching depth exceeded")
    work = []
    for eq in eqs:
        eq2 = eq.substitute(assign)
        if not eq2.is_zero():
            work.append(eq2)
    if not work:
        solutions.append(dict(assign))
        return

    # sweep A: uniquely forced single-variable equations, in order
    for eq in work:
        got = _single_variable_roots(eq, allow_i)
        if got is None:
            continue
        u, roots, obstruction = got
        if roots is not None and len(roots) == 1:
            sub = dict(assign)
            sub[u] = MPoly.const(roots[0])
            _eliminate(work, sub, solutions, dead, depth + 1, allow_i)
            return
    # sweep B: first single-variable equation, branching over its roots
    for eq in work:
        got = _single_variable_roots(eq, allow_i)
        if got is None:
            continue
        u, roots, obstruction = got
        if roots is None or not roots:
            dead.append(DeadBranch(dict(assign),
                                   obstruction if obstruction is not None else Fraction(0),
                                   note=f"no rational root for {u}: {eq}"))
            return
        for r in roots:
            sub = dict(assign)
            sub[u] = MPoly.const(r)
            _eliminate(work, sub, solutions, dead, depth + 1, allow_i)
        return
    # a pending constant contradiction ends the branch (checked after the
    # branching sweeps so forced values show up in the dead-branch records)
    for eq in work:
        if not eq.variables():
            dead.append(DeadBranch(dict(assign), eq.constant_value()))
            return
    # sweep C: substitute from the first equation linear in some unknown
    for eq in work:
        single = [v for v in eq.variables() if v != "b"]
        for u in sorted(single):
            if eq.degree_in(u) == 1:
                cu = eq.coeff_of(u, 1)
                if not cu.variables():
                    c = cu.constant_value()
                    rest = eq.coeff_of(u, 0)
                    sub = dict(assign)
                    sub[u] = rest.scale(Fraction(-1, 1) / c)
                    _eliminate(work, sub, solutions, dead, depth + 1, allow_i)
                    return
    # nothing actionable: try splitting off a pure monomial factor
    for eq in work:
        factor_var = _monomial_factor(eq)
        if factor_var is not None:
            var, reduced = factor_var
            sub = dict(assign)
            sub[var] = MPoly.const(0)
            _eliminate(work, sub, solutions, dead, depth + 1, allow_i)
            _eliminate([reduced] + [e for e in work if e is not eq],
                       dict(assign), solutions, dead, depth + 1, allow_i)
            return
    # last resort: a two-variable endgame in (b, u) is projected to a pure
    # condition on b by a resultant, whose rational roots are branched on
    unknowns = sorted({v for eq in work for v in eq.variables() if v != "b"})
    for u in unknowns:
        eqs_u = [eq for eq in work
                 if eq.degree_in(u) > 0 and eq.variables() <= {u, "b"}]
        if len(eqs_u) < 2:
            continue
        for second in eqs_u[1:]:
            r = _resultant_b(eqs_u[0], second, u)
            if all(c == 0 for c in r):
                continue
            if all(c == 0 for c in r[1:]):
                dead.append(DeadBranch(dict(assign), r[0],
                                       note=f"resultant constant in {u}"))
                return
            roots = _rational_roots_q(r)
            if not roots:
                dead.append(DeadBranch(dict(assign), Fraction(0),
                                       note="no rational b from resultant"))
                return
            for root in roots:
                sub = dict(assign)
                sub["b"] = MPoly.const(root)
                _eliminate(work, sub, solutions, dead, depth + 1, allow_i)
            return
    raise NotTriangularError(
        f"system failed to triangularize; stuck on {len(work)} equations, "
        f"first: {work[0]}")


def _resultant_b(e1: MPoly, e2: MPoly, u: str) -> list:
    """Res_u(e1, e2) as a polynomial in b (coefficient list), for equations
    whose variables lie in {u, b}; computed by evaluation-interpolation."""
    m, n = e1.degree_in(u), e2.degree_in(u)
    db1 = max(e1.coeff_of(u, k).degree_in("b") for k in range(m + 1))
    db2 = max(e2.coeff_of(u, k).degree_in("b") for k in range(n + 1))
    bound = db1 * n + db2 * m + 1
    xs, ys = [], []
    t = 0
    while len(xs) <= bound:
        bv = Fraction(t)
        c1 = [e1.coeff_of(u, k).substitute({"b": MPoly.const(bv)}).constant_value()
              for k in range(m + 1)]
        c2 = [e2.coeff_of(u, k).substitute({"b": MPoly.const(bv)}).constant_value()
              for k in range(n + 1)]
        xs.append(bv)
        ys.append(_sylvester_det(c1, c2, m, n))
        t += 1
    return _lagrange_coeffs(xs, ys)


def _sylvester_det(c1: list, c2: list, m: int, n: int) -> Fraction:
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for k in range(m + 1):
            row[i + (m - k)] = c1[k]
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for k in range(n + 1):
            row[i + (n - k)] = c2[k]
        rows.append(row)
    det = Fraction(1)
    for col in range(size):
        piv = None
        for r in range(col, size):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, size):
            if rows[r][col] != 0:
                f = rows[r][col] * inv
                for cc in range(col, size):
                    rows[r][cc] -= f * rows[col][cc]
    return det


def _lagrange_coeffs(xs: list, ys: list) -> list:
    """Coefficients of the interpolating polynomial through (xs, ys)."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = ([Fraction(0)] + basis[:]
                     if False else _poly_mul_lin(basis, -xs[j]))
            denom *= xs[i] - xs[j]
        scale = ys[i] / denom
        for k, c in enumerate(basis):
            coeffs[k] += c * scale
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul_lin(poly: list, c: Fraction) -> list:
    """poly(X) * (X + c) as a coefficient list."""
    out = [Fraction(0)] * (len(poly) + 1)
    for k, a in enumerate(poly):
        out[k] += a * c
        out[k + 1] += a
    return out


def _single_variable_roots(eq: MPoly, allow_i: bool):
    """If eq involves exactly one variable, return (var, roots, obstruction).

    roots is None when a quadratic discriminant had no square root in the
    working field (obstruction carries the discriminant); otherwise the list
    of roots in the field (possibly empty).
    """
    vs = eq.variables()
    if len(vs) != 1:
        return None
    u = next(iter(vs))
    consts = []
    for k in range(eq.degree_in(u) + 1):
        c = eq.coeff_of(u, k)
        if c.variables():
            return None
        consts.append(c.constant_value())
    deg = len(consts) - 1
    while deg > 0 and not consts[deg]:
        deg -= 1
    if deg == 0:
        return None
    if deg == 1:
        return u, [-consts[0] / consts[1]], None
    if deg == 2:
        a, b, c0 = consts[2], consts[1], consts[0]
        disc = b * b - 4 * a * c0
        r = _sqrt_coeff(disc)
        if r is None and allow_i and _is_rat(disc):
            r = QI.sqrt(_gaussify(disc))
        if r is None:
            return u, None, disc
        roots = [(-b + r) / (2 * a)]
        if r:
            roots.append((-b - r) / (2 * a))
        return u, roots, None
    roots = _rational_roots_q(consts[:deg + 1])
    return u, roots, None


def _monomial_factor(eq: MPoly):
    """If every term of eq contains var v, return (v, eq / v)."""
    vs = [v for v in eq.variables() if v != "b"]
    for v in sorted(vs):
        if all(dict(m).get(v, 0) >= 1 for m, _ in eq.terms):
            d = {}
            for m, c in eq.terms:
                md = dict(m)
                md[v] -= 1
                d[tuple(sorted((vv, ee) for vv, ee in md.items() if ee))] = c
            return v, MPoly.make(d)
    return None


# ---------------------------------------------------------------------------
# brute-force oracle over small prime fields


def brute_force_sections(family: SectionFamily, constraints: list, p: int,
                         betas: Optional[list] = None) -> list:
    """Exhaustive search over F_p for sections satisfying the constraints.

    Returns [(beta value in F_p, x Poly, y Poly)], one representative per
    sign pair (y and the conjugate -y - a1 x - a3 both solve).
    """
    if p in (2,):
        raise ValueError("the brute-force oracle needs p odd")
    field = GF(p)
    out = []
    beta_values = betas if betas is not None else list(range(p))
    for b in beta_values:
        bfrac = Fraction(b)
        model = family.specialize(field, bfrac)
        if model.discriminant().is_zero():
            continue
        e = family.deck_e.substitute({"b": MPoly.const(bfrac)}).constant_value()
        e_el = field.coerce(e)
        # invariant basis 1, m, m^2 with m = s(s - e) = s^2 - e s
        m = Poly.make(field, [field.coerce(0), -e_el, field.coerce(1)])
        two = RatFunc.const(field, 2)
        four = RatFunc.const(field, 4)
        b2, b4, b6, _ = model.b_invariants()
        gc = [(b6 / four), (b4 / two), (b2 / four), RatFunc.const(field, 1)]
        deck = Poly.make(field, [e_el, -field.coerce(1)])
        reqs = _specialize_constraints(constraints, field, bfrac)
        for c0 in range(p):
            for c1 in range(p):
                for c2 in range(p):
                    x = (Poly.const(field, c0)
                         + m.scale(field.coerce(c1))
                         + (m * m).scale(field.coerce(c2)))
                    if x.degree() > family.deg_x:
                        continue
                    xr = RatFunc.from_poly(x)
                    g = RatFunc.const(field, 0)
                    for ck in reversed(gc):
                        g = g * xr + ck
                    gp = g.as_poly()
                    eta = gp.sqrt()
                    if eta is None:
                        continue
                    # anti-invariance of eta: eta(e - s) = -eta(s); the sign
                    # choice of the square root drops out of this condition
                    if not (eta.compose(deck) + eta).is_zero():
                        continue
                    y = RatFunc.from_poly(eta) - (model.a1 * xr + model.a3) / two
                    if not y.is_poly() or y.num.degree() > family.deg_y:
                        continue
                    yp = y.as_poly()
                    if not _check_requirements(model, x, yp, reqs):
                        continue
                    out.append((b, x, yp))
    return out


def _specialize_constraints(constraints: list, field: BaseField, bfrac: Fraction):
    reqs = []
    for req in constraints:
        def ev(coeffs):
            vals = []
            for c in coeffs:
                vals.append(field.coerce(
                    c.substitute({"b": MPoly.const(bfrac)}).constant_value()))
            return Poly.make(field, vals)
        if req.place == "inf":
            reqs.append(("inf", ev(req.x0), ev(req.y0)))
        else:
            reqs.append((ev(req.place), ev(req.x0), ev(req.y0)))
    return reqs


def _check_requirements(model: Model, x: Poly, y: Poly, reqs) -> bool:
    field = model.field
    for place, x0, y0 in reqs:
        if place == "inf":
            dx = x.coeff(4) - x0.coeff(0)
            dy = y.coeff(6) - y0.coeff(0)
            if not (field.is_zero(dx) and field.is_zero(dy)):
                return False
        else:
            if not ((x - x0) % place).is_zero():
                return False
            if not ((y - y0) % place).is_zero():
                return False
    return True

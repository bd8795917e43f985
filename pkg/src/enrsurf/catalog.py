"""Characteristic-aware static data: extremal rational fibrations, the seven
construction types, integral models and Mordell-Weil contact tables.

Contact tables record, for every Mordell-Weil element, which component of
each reducible fiber it meets (labels are component-group elements).  For
fibrations whose Weierstrass equations are stored, the tables are computed
from actual torsion sections; for data-only entries they are derived as the
unique embedding of the group into the product of component groups making
every element's height vanish (and every pair's height pairing).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Optional

from .exactalg import (
    BaseField, GF, Place, Poly, QI, QQ, RatFunc, _rational_roots, parse_poly,
    parse_ratfunc,
)
from .weierstrass import Model, fiber_table
from . import mwgroup
from .solver import IncidenceRequirement, MPoly, SectionFamily, _sp_add, _sp_mul, _sp_scale


class Underdetermined(ValueError):
    """The h = 0 system admits inequivalent contact assignments."""


# ---------------------------------------------------------------------------
# group descriptors


def group_order(desc) -> int:
    kind = desc[0]
    if kind == "trivial":
        return 1
    if kind == "cyclic":
        return desc[1]
    if kind == "symmetric":
        import math
        return math.factorial(desc[1])
    if kind == "dihedral":
        return desc[1]
    if kind == "product":
        n = 1
        for g in desc[1]:
            n *= group_order(g)
        return n
    if kind == "semidirect":
        return group_order(desc[1]) * group_order(desc[2])
    raise ValueError(f"unknown group descriptor {desc!r}")


def group_str(desc) -> str:
    kind = desc[0]
    if kind == "trivial":
        return "1"
    if kind == "cyclic":
        return f"Z/{desc[1]}"
    if kind == "symmetric":
        return f"S{desc[1]}"
    if kind == "dihedral":
        return f"D{desc[1] // 2}"
    if kind == "product":
        return " x ".join(group_str(g) for g in desc[1])
    if kind == "semidirect":
        return f"({group_str(desc[1])}) : ({group_str(desc[2])})"
    raise ValueError(f"unknown group descriptor {desc!r}")


# ---------------------------------------------------------------------------
# component groups of fiber types


def component_group(sym: str, n: int) -> tuple:
    """Invariant factors of the component group of the fiber."""
    if sym == "I":
        return (n,) if n >= 2 else ()
    if sym == "I*":
        return (4,) if n % 2 else (2, 2)
    if sym in ("III", "III*"):
        return (2,)
    if sym in ("IV", "IV*"):
        return (3,)
    return ()


def group_elements(factors: tuple) -> list:
    if not factors:
        return [()]
    return [tuple(t) for t in product(*(range(f) for f in factors))]


def _instar_label(elem: tuple, n: int) -> int:
    """Component label 0..3 (E0, E1 near, E2/E3 far) of a component-group
    element of I*_n."""
    if n % 2:
        k = elem[0] % 4
        return {0: 0, 1: 2, 2: 1, 3: 3}[k]
    a, b = elem
    if (a, b) == (0, 0):
        return 0
    if (a, b) == (1, 1):
        return 1
    return 2 if (a, b) == (1, 0) else 3


def contr_of(sym: str, n: int, elem: tuple) -> Fraction:
    """Correction term contr(P) for a section on component `elem`."""
    if not elem or all(e == 0 for e in elem):
        return Fraction(0)
    if sym == "I":
        k = elem[0] % n
        return Fraction(k * (n - k), n)
    if sym == "I*":
        lbl = _instar_label(elem, n)
        if lbl == 0:
            return Fraction(0)
        return Fraction(1) if lbl == 1 else Fraction(1) + Fraction(n, 4)
    if sym == "III":
        return Fraction(1, 2)
    if sym == "III*":
        return Fraction(3, 2)
    if sym == "IV":
        return Fraction(2, 3)
    if sym == "IV*":
        return Fraction(4, 3)
    return Fraction(0)


def contr_pair_of(sym: str, n: int, e1: tuple, e2: tuple) -> Fraction:
    """Correction term contr(P, Q) for sections on components e1, e2."""
    if not e1 or all(v == 0 for v in e1) or all(v == 0 for v in e2):
        return Fraction(0)
    if sym == "I":
        i, j = sorted((e1[0] % n, e2[0] % n))
        return Fraction(i * (n - j), n)
    if sym == "I*":
        l1, l2 = _instar_label(e1, n), _instar_label(e2, n)
        if 0 in (l1, l2):
            return Fraction(0)
        if l1 == 1 and l2 == 1:
            return Fraction(1)
        if 1 in (l1, l2):
            return Fraction(1, 2)
        if l1 == l2:
            return Fraction(1) + Fraction(n, 4)
        return Fraction(1, 2) + Fraction(n, 4)
    if sym == "III":
        return Fraction(1, 2)
    if sym == "III*":
        return Fraction(3, 2)
    if sym == "IV":
        return Fraction(2, 3) if e1 == e2 else Fraction(1, 3)
    if sym == "IV*":
        return Fraction(4, 3) if e1 == e2 else Fraction(2, 3)
    return Fraction(0)


# ---------------------------------------------------------------------------
# Table 3: extremal and rational elliptic fibrations


def _f(sym: str, n: int = 0) -> tuple:
    return (sym, n)


# rows: (generic chars != 2,3,5; char 5; char 3; char 2), fibers as tuples
_TABLE3_ROWS = [
    ("II*,II", (_f("II*"), _f("II")), (_f("II*"), _f("II")), (_f("II*"),), (_f("II*"),), ()),
    ("III*,III", (_f("III*"), _f("III")), (_f("III*"), _f("III")),
     (_f("III*"), _f("III")), None, (2,)),
    ("IV*,IV", (_f("IV*"), _f("IV")), (_f("IV*"), _f("IV")), None,
     (_f("IV*"), _f("IV")), (3,)),
    ("I0*,I0*", (_f("I*", 0), _f("I*", 0)), (_f("I*", 0), _f("I*", 0)),
     (_f("I*", 0), _f("I*", 0)), None, (2, 2)),
    ("II*,I1,I1", (_f("II*"), _f("I", 1), _f("I", 1)),
     (_f("II*"), _f("I", 1), _f("I", 1)), (_f("II*"), _f("I", 1)),
     (_f("II*"), _f("I", 1)), ()),
    ("III*,I2,I1", (_f("III*"), _f("I", 2), _f("I", 1)),
     (_f("III*"), _f("I", 2), _f("I", 1)), (_f("III*"), _f("I", 2), _f("I", 1)),
     (_f("III*"), _f("I", 2)), (2,)),
    ("IV*,I3,I1", (_f("IV*"), _f("I", 3), _f("I", 1)),
     (_f("IV*"), _f("I", 3), _f("I", 1)), (_f("IV*"), _f("I", 3)),
     (_f("IV*"), _f("I", 3), _f("I", 1)), (3,)),
    ("I4*,I1,I1", (_f("I*", 4), _f("I", 1), _f("I", 1)),
     (_f("I*", 4), _f("I", 1), _f("I", 1)), (_f("I*", 4), _f("I", 1), _f("I", 1)),
     (_f("I*", 4),), (2,)),
    ("I2*,I2,I2", (_f("I*", 2), _f("I", 2), _f("I", 2)),
     (_f("I*", 2), _f("I", 2), _f("I", 2)), (_f("I*", 2), _f("I", 2), _f("I", 2)),
     None, (2, 2)),
    ("I1*,I4,I1", (_f("I*", 1), _f("I", 4), _f("I", 1)),
     (_f("I*", 1), _f("I", 4), _f("I", 1)), (_f("I*", 1), _f("I", 4), _f("I", 1)),
     (_f("I*", 1), _f("I", 4)), (4,)),
    ("I9,I1,I1,I1", (_f("I", 9), _f("I", 1), _f("I", 1), _f("I", 1)),
     (_f("I", 9), _f("I", 1), _f("I", 1), _f("I", 1)), (_f("I", 9), _f("II")),
     (_f("I", 9), _f("I", 1), _f("I", 1), _f("I", 1)), (3,)),
    ("I8,I2,I1,I1", (_f("I", 8), _f("I", 2), _f("I", 1), _f("I", 1)),
     (_f("I", 8), _f("I", 2), _f("I", 1), _f("I", 1)),
     (_f("I", 8), _f("I", 2), _f("I", 1), _f("I", 1)), (_f("I", 8), _f("III")), (4,)),
    ("I5,I5,I1,I1", (_f("I", 5), _f("I", 5), _f("I", 1), _f("I", 1)),
     (_f("I", 5), _f("I", 5), _f("II")), (_f("I", 5), _f("I", 5), _f("I", 1), _f("I", 1)),
     (_f("I", 5), _f("I", 5), _f("I", 1), _f("I", 1)), (5,)),
    ("I6,I3,I2,I1", (_f("I", 6), _f("I", 3), _f("I", 2), _f("I", 1)),
     (_f("I", 6), _f("I", 3), _f("I", 2), _f("I", 1)), (_f("I", 6), _f("I", 3), _f("III")),
     (_f("I", 6), _f("IV"), _f("I", 2)), (6,)),
    ("I4,I4,I2,I2", (_f("I", 4), _f("I", 4), _f("I", 2), _f("I", 2)),
     (_f("I", 4), _f("I", 4), _f("I", 2), _f("I", 2)),
     (_f("I", 4), _f("I", 4), _f("I", 2), _f("I", 2)), None, (4, 2)),
    ("I3,I3,I3,I3", (_f("I", 3), _f("I", 3), _f("I", 3), _f("I", 3)),
     (_f("I", 3), _f("I", 3), _f("I", 3), _f("I", 3)), None,
     (_f("I", 3), _f("I", 3), _f("I", 3), _f("I", 3)), (3, 3)),
]


@dataclass(frozen=True)
class ExtremalEntry:
    name: str                 # char-0 row label
    fibers: tuple             # ((sym, n), ...) for the requested characteristic
    mw: tuple                 # invariant factors of MW
    char_column: int          # 0, 5, 3 or 2

    def fiber_names(self) -> tuple:
        return tuple(_sym_str(s, n) for s, n in self.fibers)


def _sym_str(sym: str, n: int) -> str:
    if sym == "I":
        return f"I{n}"
    if sym == "I*":
        return f"I{n}*"
    return sym


def _column_for_char(char: int) -> int:
    return char if char in (2, 3, 5) else 0


def extremal_fibrations(char: int) -> list:
    """The Table-3 column for the given characteristic."""
    if char != 0 and char < 2:
        raise ValueError("characteristic must be 0 or a prime")
    col = _column_for_char(char)
    out = []
    for name, generic, c5, c3, c2 in [(r[0], r[1], r[2], r[3], r[4]) for r in _TABLE3_ROWS]:
        fibers = {0: generic, 5: c5, 3: c3, 2: c2}[col]
        if fibers is None:
            continue
        mw = _TABLE3_ROWS[[r[0] for r in _TABLE3_ROWS].index(name)][5]
        out.append(ExtremalEntry(name, fibers, mw, col))
    return out


def entry_for(name: str, char: int) -> ExtremalEntry:
    for e in extremal_fibrations(char):
        if e.name == name:
            return e
    raise KeyError(f"no extremal fibration {name} in characteristic {char}")


def visible_fibers(entry: ExtremalEntry) -> tuple:
    """Fibers with at least two components (the ones a dual graph sees)."""
    return tuple(sorted((s, n) for s, n in entry.fibers
                        if (s != "I" or n >= 2) and s != "II"))


def entry_for_fibers(fibers: tuple, char: int) -> Optional[ExtremalEntry]:
    """Find the entry whose reducible-fiber multiset matches ``fibers``
    (I_1 and II fibers are invisible in dual graphs)."""
    want = tuple(sorted(fibers))
    for e in extremal_fibrations(char):
        if visible_fibers(e) == want:
            return e
    return None


# ---------------------------------------------------------------------------
# stored Weierstrass equations (jacobians of the seven types, Hesse)


_JACOBIANS = {
    "I": ("s", "0", "0", "s^3", "0"),
    "II": ("s", "s", "s^2", "0", "0"),
    "III": ("1", "4s^2", "0", "s^2", "0"),
    "IV": ("1", "4s^2", "0", "s^2", "0"),
    "V": ("s", "1+s", "s", "s", "0"),
    "VI": ("-3*(3s+1)", "0", "(3s+1)^2", "0", "0"),
    "VII": ("0", "-(s^2+s)", "0", "2s^3-3s^2+4s-2", "-s^3+2s^2-2s+1"),
    "Hesse": ("0", "0", "0", "-3s^4+24s", "2s^6+40s^3-16"),
}

_JACOBIAN_ENTRY = {
    "I": "III*,I2,I1",
    "II": "I1*,I4,I1",
    "III": "I4,I4,I2,I2",
    "IV": "I4,I4,I2,I2",
    "V": "I6,I3,I2,I1",
    "VI": "IV*,I3,I1",
    "VII": "I8,I2,I1,I1",
    "Hesse": "I3,I3,I3,I3",
}

# entries whose contact tables are computed from actual torsion sections;
# the Hesse fibration is excluded (its full 3-torsion needs a cube root of
# unity), its table is derived combinatorially like the data-only entries
_ENTRY_EQUATION = {
    "III*,I2,I1": "I",
    "I1*,I4,I1": "II",
    "I4,I4,I2,I2": "III",
    "I6,I3,I2,I1": "V",
    "IV*,I3,I1": "VI",
    "I8,I2,I1,I1": "VII",
}


def jacobian_model(tag: str, field: BaseField) -> Model:
    coeffs = _JACOBIANS[tag]
    return Model.make(field, *(parse_poly(c, field) for c in coeffs))


# ---------------------------------------------------------------------------
# torsion sections of the stored equations (over Q; computed, then cached)


def _sample_points(count: int) -> list:
    pts, k = [], 2
    while len(pts) < count:
        pts.append(Fraction(k))
        k += 1
    return pts


def _poly_roots_in_x(coeffs: list, deg_bound: int, field: BaseField = QQ) -> list:
    """Polynomial roots x0(s) (deg <= deg_bound) of sum c_i(s) x^i = 0.

    Interpolates candidate roots from rational specializations and verifies.
    """
    pts = _sample_points(deg_bound + 1)
    per_point = []
    for t0 in pts:
        vals = []
        ok = True
        for c in coeffs:
            try:
                vals.append(c.eval_elem(field.coerce(t0)))
            except ZeroDivisionError:
                ok = False
                break
        if not ok:
            return []
        spec = Poly.make(field, vals)
        if spec.degree() < 0:
            return []
        per_point.append(_rational_roots(spec))
    candidates = set()
    for combo in product(*per_point):
        cand = _interpolate(field, pts, list(combo))
        if cand is not None:
            candidates.add(cand)
    out = []
    for cand in candidates:
        xr = RatFunc.from_poly(cand)
        total = RatFunc.const(field, 0)
        for k, c in enumerate(coeffs):
            total = total + c * xr ** k
        if total.is_zero():
            out.append(cand)
    out.sort(key=str)
    return out


def _interpolate(field: BaseField, xs: list, ys: list) -> Optional[Poly]:
    n = len(xs)
    coeffs = [field.zero()] * n
    for i in range(n):
        basis = [field.one()]
        denom = field.one()
        for j in range(n):
            if j == i:
                continue
            xj = field.coerce(xs[j])
            new = [field.zero()] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] = new[k] + c * (-xj)
                new[k + 1] = new[k + 1] + c
            basis = new
            denom = denom * (field.coerce(xs[i]) - xj)
        scale = field.coerce(ys[i]) / denom
        for k, c in enumerate(basis):
            coeffs[k] = coeffs[k] + c * scale
    return Poly.make(field, coeffs)


def two_torsion_sections(w: Model) -> list:
    """The rational 2-torsion sections of a model over Q (or Q(i))."""
    field = w.field
    b2, b4, b6, _ = w.b_invariants()
    four = RatFunc.const(field, 4)
    two = RatFunc.const(field, 2)
    coeffs = [b6 / four, b4 / two, b2 / four, RatFunc.const(field, 1)]
    out = []
    for x0 in _poly_roots_in_x(coeffs, 2, field):
        xr = RatFunc.from_poly(x0)
        y0 = -(w.a1 * xr + w.a3) / two
        out.append(mwgroup.Section.affine(xr, y0))
    return out


def halve_section(w: Model, t: "mwgroup.Section") -> list:
    """Sections P with 2P = T, with polynomial x of degree <= 2."""
    field = w.field
    b2, b4, b6, b8 = w.b_invariants()
    c = lambda n: RatFunc.const(field, n)
    xt = t.x
    # x(2P) num/den: (x^4 - b4 x^2 - 2 b6 x - b8) / (4x^3 + b2 x^2 + 2 b4 x + b6)
    num = [-b8, -c(2) * b6, -b4, c(0), c(1)]
    den = [b6, c(2) * b4, b2, c(4)]
    eq = [num[k] - (xt * den[k] if k < len(den) else c(0)) for k in range(5)]
    out = []
    for x0 in _poly_roots_in_x(eq, 2, field):
        xr = RatFunc.from_poly(x0)
        disc = ((w.a1 * xr + w.a3) ** 2
                + c(4) * (xr ** 3 + w.a2 * xr * xr + w.a4 * xr + w.a6))
        root = _ratfunc_sqrt(disc)
        if root is None:
            continue
        for sgn in (1, -1):
            y0 = (-(w.a1 * xr + w.a3) + root.scale(field.coerce(sgn))) / c(2)
            p = mwgroup.Section.affine(xr, y0)
            if mwgroup.is_on_curve(w, p) and mwgroup.multiple(w, 2, p) == t:
                out.append(p)
    return out


def _ratfunc_sqrt(f: RatFunc) -> Optional[RatFunc]:
    if f.is_zero():
        return f
    num = f.num.sqrt()
    den = f.den.sqrt()
    if num is None or den is None:
        return None
    return RatFunc.make(num, den)


@lru_cache(maxsize=None)
def torsion_table(tag: str) -> dict:
    """All Mordell-Weil elements of the stored jacobian, as a dict mapping
    abstract group elements (tuples over the invariant factors) to sections."""
    field = QQ
    w = jacobian_model(tag, field)
    entry = entry_for(_JACOBIAN_ENTRY[tag], 0)
    factors = entry.mw
    elements = {(0,) * len(factors): mwgroup.Section.zero()}
    gens = _find_generators(w, factors)
    for elem in group_elements(factors):
        acc = mwgroup.Section.zero()
        for g, k in zip(gens, elem):
            acc = mwgroup.add(w, acc, mwgroup.multiple(w, k, g))
        elements[elem] = acc
    return elements


def _find_generators(w: Model, factors: tuple) -> list:
    """Generators of the torsion subgroup matching the invariant factors."""
    sections = _small_sections(w)
    by_order: dict = {}
    for p in sections:
        o = mwgroup.torsion_order(w, p, 12)
        if isinstance(o, int):
            by_order.setdefault(o, []).append(p)
    gens = []
    used: set = set()
    for f in factors:
        found = None
        for p in by_order.get(f, []):
            cand_elems = {str(mwgroup.multiple(w, k, p)) for k in range(1, f)}
            if gens and cand_elems & used:
                continue
            found = p
            break
        if found is None:
            raise Underdetermined(f"no generator of order {f} found for {w}")
        gens.append(found)
        new_used = set()
        for combo in product(*(range(f2) for f2 in factors[:len(gens)])):
            acc = mwgroup.Section.zero()
            for g, k in zip(gens, combo):
                acc = mwgroup.add(w, acc, mwgroup.multiple(w, k, g))
            if not acc.is_zero:
                new_used.add(str(acc))
        used = new_used
    return gens


def _small_sections(w: Model) -> list:
    """Torsion candidates: 2-torsion, their halves, and small-degree
    3-torsion sections."""
    out = list(two_torsion_sections(w))
    for t in list(out):
        out.extend(halve_section(w, t))
    out.extend(_three_torsion_sections(w))
    # close under addition a little to catch products of cyclic parts
    extra = []
    for p in out:
        for q in out:
            if p is q:
                continue
            r = mwgroup.add(w, p, q)
            if not r.is_zero and r.x.is_poly() and r.x.num.degree() <= 2:
                extra.append(r)
    return out + extra


def _three_torsion_sections(w: Model) -> list:
    field = w.field
    b2, b4, b6, b8 = w.b_invariants()
    c = lambda n: RatFunc.const(field, n)
    psi3 = [b8, c(3) * b6, c(3) * b4, b2, c(3)]
    out = []
    for x0 in _poly_roots_in_x(psi3, 2, field):
        xr = RatFunc.from_poly(x0)
        disc = ((w.a1 * xr + w.a3) ** 2
                + c(4) * (xr ** 3 + w.a2 * xr * xr + w.a4 * xr + w.a6))
        root = _ratfunc_sqrt(disc)
        if root is None:
            continue
        for sgn in (1, -1):
            y0 = (-(w.a1 * xr + w.a3) + root.scale(field.coerce(sgn))) / c(2)
            p = mwgroup.Section.affine(xr, y0)
            if mwgroup.is_on_curve(w, p):
                out.append(p)
    return out


# ---------------------------------------------------------------------------
# Mordell-Weil contact tables


@lru_cache(maxsize=None)
def mw_contacts(name: str, char: int = 0) -> dict:
    """Contact table of the extremal fibration: group element -> per-fiber
    component labels (component-group elements, in the entry's fiber order).

    Geometric for entries with stored equations in characteristic 0, derived
    from the h = 0 conditions otherwise.
    """
    entry = entry_for(name, char)
    if char == 0 and name in _ENTRY_EQUATION:
        return _contacts_geometric(entry)
    return _contacts_derived(entry)


def _contacts_geometric(entry: ExtremalEntry) -> dict:
    """Measure unsigned incidences of all torsion sections, then pick labels
    for the generators (among the options matching their measurement), extend
    homomorphically, and keep the extension consistent with every measured
    element."""
    tag = _ENTRY_EQUATION[entry.name]
    w = jacobian_model(tag, QQ)
    table = torsion_table(tag)
    ft = fiber_table(w)
    placed = []
    used = set()
    for sym, n in entry.fibers:
        if not component_group(sym, n):
            placed.append(None)
            continue
        found = None
        for f in ft.fibers:
            if str(f.place) in used:
                continue
            if str(f.symbol) == _sym_str(sym, n):
                found = f
                break
        if found is None:
            raise Underdetermined(
                f"fiber {_sym_str(sym, n)} not located for {entry.name}")
        used.add(str(found.place))
        placed.append(found)
    measured = {}
    for elem, sec in table.items():
        row = []
        for (sym, n), fib in zip(entry.fibers, placed):
            if fib is None:
                row.append(None)
                continue
            row.append(mwgroup.component_index(w, sec, fib.place).index)
        measured[elem] = tuple(row)

    factors = entry.mw
    gens = [tuple(1 if i == j else 0 for i in range(len(factors)))
            for j in range(len(factors))]
    gen_options = []
    for gen in gens:
        per_fiber = []
        for k, (sym, n) in enumerate(entry.fibers):
            fac = component_group(sym, n)
            if not fac:
                per_fiber.append([()])
                continue
            per_fiber.append(_labels_matching(sym, n, measured[gen][k]))
        gen_options.append(per_fiber)
    fiber_groups = [component_group(s, n) for s, n in entry.fibers]
    for choice in product(*[product(*po) for po in gen_options]):
        if not all(_kills(choice[j], factors[j], fiber_groups)
                   for j in range(len(factors))):
            continue
        out = {}
        ok = True
        for elem in measured:
            labels = []
            for k, fac in enumerate(fiber_groups):
                if not fac:
                    labels.append(())
                    continue
                acc = tuple(0 for _ in fac)
                for gi in range(len(factors)):
                    g = choice[gi][k]
                    acc = tuple((a + elem[gi] * b) % f
                                for a, b, f in zip(acc, g, fac))
                labels.append(acc)
            out[elem] = tuple(labels)
        for elem, row in measured.items():
            for k, (sym, n) in enumerate(entry.fibers):
                if row[k] is None:
                    continue
                if out[elem][k] not in _labels_matching(sym, n, row[k]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return out
    raise Underdetermined(f"no consistent orientation for {entry.name}")


def _labels_matching(sym: str, n: int, index: int) -> list:
    """Component-group labels compatible with an unsigned incidence index."""
    if sym == "I":
        if index == 0:
            return [(0,)]
        return [(index % n,)] if 2 * index % n == 0 else [(index,), ((n - index) % n,)]
    if sym == "I*":
        if n % 2:
            return {0: [(0,)], 1: [(2,)], 2: [(1,), (3,)]}[index]
        return {0: [(0, 0)], 1: [(1, 1)], 2: [(1, 0), (0, 1)]}[index]
    if sym in ("III", "III*"):
        return [(index,)]
    if sym in ("IV", "IV*"):
        return [(0,)] if index == 0 else [(1,), (2,)]
    return [()]


def _label_symmetries(sym: str, n: int) -> list:
    """Diagram symmetries acting on component-group labels."""
    ident = lambda lbl: lbl
    if sym == "I" and n >= 2:
        return [ident, lambda lbl: ((-lbl[0]) % n,)]
    if sym == "I*":
        if n % 2:
            return [ident, lambda lbl: ((-lbl[0]) % 4,)]
        if n == 0:
            # all three simple non-identity legs of I0* are interchangeable
            from itertools import permutations
            nonzero = [(1, 1), (1, 0), (0, 1)]
            out = []
            for perm in permutations(range(3)):
                mapping = {nonzero[i]: nonzero[perm[i]] for i in range(3)}
                mapping[(0, 0)] = (0, 0)
                out.append(lambda lbl, m=mapping: m[lbl])
            return out
        return [ident, lambda lbl: (lbl[1], lbl[0])]  # swap the two far legs
    if sym in ("IV", "IV*"):
        return [ident, lambda lbl: ((-lbl[0]) % 3,)]
    return [ident]


def _contacts_derived(entry: ExtremalEntry) -> dict:
    """Unique (up to diagram symmetry) group embedding with h = 0 throughout."""
    factors = entry.mw
    if not factors:
        zero_label = tuple(tuple(0 for _ in component_group(s, n))
                           for s, n in entry.fibers)
        return {(): zero_label}
    gens = [tuple(1 if i == j else 0 for i in range(len(factors)))
            for j in range(len(factors))]
    fiber_groups = [component_group(s, n) for s, n in entry.fibers]
    options = [group_elements(f) for f in fiber_groups]
    solutions = []
    for assignment in product(*[list(product(*opts)) for opts in [options] * len(factors)]):
        # assignment[j] = labels of generator j across fibers; the image of a
        # generator of order f must itself be killed by f
        if not all(_kills(assignment[j], factors[j], fiber_groups)
                   for j in range(len(factors))):
            continue
        table = {}
        ok = True
        for elem in group_elements(factors):
            labels = []
            for k, fac in enumerate(fiber_groups):
                acc = tuple(0 for _ in fac)
                for gi in range(len(factors)):
                    g = assignment[gi][k]
                    acc = tuple((a + elem[gi] * b) % f
                                for a, b, f in zip(acc, g, fac))
                labels.append(acc)
            table[elem] = tuple(labels)
        # injectivity
        if len({v for v in table.values()}) != len(table):
            continue
        # h(g) = 0 for every element
        for elem, labels in table.items():
            if all(e == 0 for e in elem):
                continue
            total = Fraction(0)
            for (sym, n), lbl in zip(entry.fibers, labels):
                total += contr_of(sym, n, lbl)
            if total != 2:
                ok = False
                break
        if not ok:
            continue
        # pairing consistency: sum contr(g, h) integral (0 or 1)
        elems = [e for e in table if any(x != 0 for x in e)]
        for i in range(len(elems)):
            for j in range(i + 1, len(elems)):
                total = Fraction(0)
                for (sym, n), l1, l2 in zip(entry.fibers, table[elems[i]],
                                            table[elems[j]]):
                    total += contr_pair_of(sym, n, l1, l2)
                if total.denominator != 1 or total > 2:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            solutions.append(table)
    if not solutions:
        raise Underdetermined(f"no contact table for {entry.name}")
    # quotient by diagram symmetries and isomorphic-fiber permutations
    canon = {_canonical_contact_form(entry, t) for t in solutions}
    if len(canon) > 1:
        raise Underdetermined(
            f"{len(canon)} inequivalent contact tables for {entry.name}")
    return solutions[0]


def _group_automorphisms(factors: tuple) -> list:
    """All automorphisms of prod Z/f_i, as element-permutation dicts."""
    elems = group_elements(factors)
    gens = [tuple(1 if i == j else 0 for i in range(len(factors)))
            for j in range(len(factors))]

    def order_of(e: tuple) -> int:
        o = 1
        for v, f in zip(e, factors):
            import math
            sub = f // math.gcd(v, f)
            o = o * sub // math.gcd(o, sub)
        return o

    gen_orders = [factors[j] for j in range(len(factors))]
    candidates = [[e for e in elems if order_of(e) == o] for o in gen_orders]
    autos = []
    for images in product(*candidates):
        mapping = {}
        ok = True
        for e in elems:
            img = tuple(0 for _ in factors)
            for j, mult in enumerate(e):
                img = tuple((a + mult * b) % f
                            for a, b, f in zip(img, images[j], factors))
            mapping[e] = img
        if len(set(mapping.values())) == len(elems):
            autos.append(mapping)
    return autos


def _kills(labels: tuple, order: int, fiber_groups: list) -> bool:
    for lbl, fac in zip(labels, fiber_groups):
        for a, f in zip(lbl, fac):
            if (a * order) % f:
                return False
    return True


def _canonical_contact_form(entry: ExtremalEntry, table: dict) -> tuple:
    """Canonical form under per-fiber diagram symmetry, permutation of
    isomorphic fibers, and automorphisms of the abstract group."""
    fibers = entry.fibers
    opts = [_label_symmetries(s, n) for s, n in fibers]
    elems = sorted(table)
    autos = _group_automorphisms(entry.mw)
    best = None
    for auto in autos:
        for flips in product(*(range(len(o)) for o in opts)):
            rows = []
            for elem in elems:
                labels = table[auto[elem]]
                row = tuple(opts[k][flips[k]](labels[k])
                            for k in range(len(fibers)))
                rows.append(row)
            # a canonical column order: group equal fiber types, sort columns
            cols = list(zip(*rows)) if rows else []
            keyed = sorted(zip(fibers, cols), key=lambda t: (t[0], t[1]))
            sig = tuple((f, tuple(c)) for f, c in keyed)
            if best is None or sig < best:
                best = sig
    return best


# ---------------------------------------------------------------------------
# Table 1 / Table 2 / Table 6 metadata


@dataclass(frozen=True)
class TypeMetadata:
    tag: str
    aut: tuple
    aut_nt: tuple
    aut_ss: tuple
    chars_excluded: tuple
    moduli: str
    p_k: tuple
    jacobian_entry: str


_Z2 = ("cyclic", 2)
_Z4 = ("cyclic", 4)

_METADATA = {
    "I": TypeMetadata("I", ("dihedral", 8), _Z2, ("dihedral", 8), (),
                      "A^1 - {0, -256}", (255, 257), "III*,I2,I1"),
    "II": TypeMetadata("II", ("symmetric", 4), ("trivial",), ("symmetric", 4), (),
                       "A^1 - {0, -64}", (63, 65), "I1*,I4,I1"),
    "III": TypeMetadata("III",
                        ("semidirect", ("product", (_Z4, _Z2, _Z2)), ("dihedral", 8)),
                        _Z2,
                        ("semidirect", ("product", (_Z2, _Z2, _Z2)), ("dihedral", 8)),
                        (2,), "unique", (2,), "I4,I4,I2,I2"),
    "IV": TypeMetadata("IV",
                       ("semidirect", ("product", (_Z2, _Z2, _Z2, _Z2)),
                        ("semidirect", ("cyclic", 5), _Z4)),
                       ("trivial",),
                       ("semidirect", ("product", (_Z2, _Z2, _Z2, _Z2)),
                        ("semidirect", ("cyclic", 5), _Z2)),
                       (2,), "unique", (2,), "I4,I4,I2,I2"),
    "V": TypeMetadata("V", ("product", (("symmetric", 4), _Z2)), _Z2,
                      ("product", (("symmetric", 4), _Z2)),
                      (2, 3), "unique", (6,), "I6,I3,I2,I1"),
    "VI": TypeMetadata("VI", ("symmetric", 5), ("trivial",), ("symmetric", 5),
                       (3, 5), "unique", (15,), "IV*,I3,I1"),
    "VII": TypeMetadata("VII", ("symmetric", 5), ("trivial",), ("symmetric", 5),
                        (2, 5), "unique", (10,), "I8,I2,I1,I1"),
}

TYPE_TAGS = ("I", "II", "III", "IV", "V", "VI", "VII")


def type_metadata(tag: str) -> TypeMetadata:
    if tag not in _METADATA:
        raise KeyError(f"unknown type {tag}")
    return _METADATA[tag]


# ---------------------------------------------------------------------------
# Lemma 11.1: integral models


_INTEGRAL_MODELS = (
    (("s^2+s", "0", "0", "(s^2+s)^3", "0"), 257, "I"),
    (("-(s^2+s)", "0", "0", "-(s^2+s)^3", "0"), 255, "I"),
    (("s^2+s", "s^2+s", "(s^2+s)^2", "0", "0"), 65, "II"),
    (("-(s^2+s)", "-(s^2+s)", "(s^2+s)^2", "0", "0"), 63, "II"),
    (("1", "4s^4", "0", "s^4", "0"), 2, "III"),
    (("0", "2*(s^4+1)", "0", "(s^4-1)^2", "0"), 2, "IV"),
    (("s^2+1", "s^2+2", "s^2+1", "s^2+1", "0"), 6, "V"),
    (("-3*(3s^2+3s+1)", "0", "(3s^2+3s+1)^2", "0", "0"), 15, "VI"),
    (("0", "-(s^4+s^2)", "0", "2s^6-3s^4+4s^2-2", "-s^6+2s^4-2s^2+1"), 10, "VII"),
)


@dataclass(frozen=True)
class IntegralModel:
    coeffs: tuple
    bad_primes_product: int
    type_tag: str

    def model(self, field: BaseField) -> Model:
        return Model.make(field, *(parse_poly(c, field) for c in self.coeffs))

    def bad_primes(self) -> tuple:
        from .exactalg import _int_factor
        return tuple(sorted(_int_factor(self.bad_primes_product)))


def integral_models() -> tuple:
    return tuple(IntegralModel(c, p, t) for c, p, t in _INTEGRAL_MODELS)


# ---------------------------------------------------------------------------
# per-type pipeline data: base change map, deck, the distinguished section


@dataclass(frozen=True)
class PipelineData:
    tag: str
    needs_beta: bool
    default_beta: Optional[Fraction]


_PIPELINES = {
    "I": PipelineData("I", True, Fraction(1)),
    "II": PipelineData("II", True, Fraction(1)),
    "III": PipelineData("III", False, None),
    "IV": PipelineData("IV", False, None),
    "V": PipelineData("V", False, None),
    "VI": PipelineData("VI", False, None),
    "VII": PipelineData("VII", False, None),
}


def pipeline_data(tag: str) -> PipelineData:
    return _PIPELINES[tag]


def phi_for(tag: str, field: BaseField, beta=None) -> RatFunc:
    """The quadratic base-change map t -> phi(s) of the construction."""
    if tag in ("I", "II"):
        b = field.coerce(beta)
        m = Poly.make(field, [field.zero(), b, b])
        return RatFunc.from_poly(m)
    if tag == "III":
        return parse_ratfunc("s^2", field)
    if tag == "IV":
        return parse_ratfunc("1/4*(s^2-1)/(s^2+1)", field)
    if tag == "V":
        return parse_ratfunc("s^2+1", field)
    if tag == "VI":
        return parse_ratfunc("s^2+s", field)
    if tag == "VII":
        return parse_ratfunc("s^2", field)
    raise KeyError(tag)


def deck_for(tag: str, field: BaseField) -> RatFunc:
    """The covering involution on the s-line (as a rational function)."""
    if tag in ("I", "II", "VI"):
        return parse_ratfunc("-s-1", field)
    return parse_ratfunc("-s", field)


def nminus_for(tag: str, field: BaseField, beta=None):
    """Coordinates of the distinguished section on the base-changed model."""
    if tag == "I":
        return ("0", "0")
    if tag == "II":
        b = field.coerce(beta)
        m = Poly.make(field, [field.zero(), b, b])
        return (RatFunc.from_poly(-m), RatFunc.const(field, 0))
    if tag == "III":
        return ("0", "0")
    if tag == "IV":
        return ("-(s^2-1)^2", "0")
    if tag == "V":
        return ("-1", "0")
    if tag == "VI":
        return ("s+s^2", "s^3")
    if tag == "VII":
        return ("1", "s-s^3")
    raise KeyError(tag)


# solver families for types VI, VII and the Hesse configuration


def solver_family(tag: str) -> tuple:
    """(SectionFamily, constraints) for the degree-bounded section search."""
    one = MPoly.const(1)
    zero = MPoly.const(0)
    b = MPoly.var("b")

    def C(n):
        return MPoly.const(n)

    if tag == "VI":
        L = [one, C(3) * b, C(3)]
        fam = SectionFamily(tuple(_sp_scale(L, C(-3))), (zero,),
                            tuple(_sp_mul(L, L)), (zero,), (zero,), deck_e=-b)
        reqs = [IncidenceRequirement.at_infinity(0, 0)]
        return fam, reqs
    if tag == "VII":
        t = [b, zero, one]
        t2 = _sp_mul(t, t)
        t3 = _sp_mul(t2, t)
        a2 = _sp_scale(_sp_add(t2, t), C(-1))
        a4 = _sp_add(_sp_add(_sp_scale(t3, C(2)), _sp_scale(t2, C(-3))),
                     _sp_add(_sp_scale(t, C(4)), [C(-2)]))
        a6 = _sp_add(_sp_add(_sp_scale(t3, C(-1)), _sp_scale(t2, C(2))),
                     _sp_add(_sp_scale(t, C(-2)), [C(1)]))
        fam = SectionFamily((zero,), tuple(a2), (zero,), tuple(a4), tuple(a6),
                            deck_e=zero)
        reqs = [IncidenceRequirement.at_infinity(0, 0),
                IncidenceRequirement.at([b - C(1), zero, one], [C(1)], [C(0)])]
        return fam, reqs
    if tag == "Hesse":
        t = [C(-1), zero, one]

        def tp(k):
            out = [one]
            for _ in range(k):
                out = _sp_mul(out, t)
            return out

        a4 = _sp_add(_sp_scale(tp(4), C(-3)), _sp_scale(tp(1), C(24)))
        a6 = _sp_add(_sp_add(_sp_scale(tp(6), C(2)), _sp_scale(tp(3), C(40))),
                     [C(-16)])
        fam = SectionFamily((zero,), (zero,), (zero,), tuple(a4), tuple(a6),
                            deck_e=zero)
        reqs = [IncidenceRequirement.at([zero, one], [C(-3)], [C(0)]),
                IncidenceRequirement.at_infinity(1, 0)]
        return fam, reqs
    raise KeyError(tag)

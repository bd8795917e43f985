"""The quadratic base-change construction of Enriques quotients.

Per type: build the catalog jacobian, base-change along the degree-2 map,
check the three conditions on the distinguished section (disjoint from zero,
anti-invariant under the deck involution, off the identity component at
every singular branch fiber), and classify the quotient as Enriques, its
Coble degeneration, or invalid.  Intersection numbers of the special
bisections produced by jac_2 are derived from the vanishing of the height
pairing against the jacobian's torsion sections.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from . import catalog, dualgraph, mwgroup
from .exactalg import (
    BaseField, GF, Place, Poly, QI, QQ, RatFunc, factor_support, valuation,
)
from .mwgroup import NonIntegerIntersection, Section
from .solver import solve_integral_sections
from .weierstrass import (
    CharUnsupported, DegenerateModel, FiberTable, KodairaFiber, Model,
    base_change, fiber_table, kodaira_type,
)


class Inseparable(ValueError):
    """The base-change map is inseparable."""


@dataclass(frozen=True)
class BranchPoint:
    place: Place          # on the s-line
    image: Optional[str]  # value on the t-line, or "inf"; None if irrational
    wild: bool = False


def branch_places(phi: RatFunc, char: int) -> list:
    """Branch places of a separable degree-2 map of the s-line."""
    field = phi.field
    num, den = phi.num, phi.den
    deg = max(num.degree(), den.degree())
    if deg != 2:
        raise ValueError("phi must have degree 2")
    w = num.derivative() * den - num * den.derivative()
    dphi = phi.derivative()
    if dphi.is_zero():
        raise Inseparable(f"{phi} is inseparable")
    out = []
    if char == 2:
        # a separable degree-2 cover in characteristic 2 has exactly one
        # (wild) branch point
        if not w.is_zero() and w.degree() >= 1:
            for v, _ in factor_support(w):
                out.append(BranchPoint(v, _image_at(phi, v), wild=True))
        else:
            out.append(BranchPoint(Place.infinity(), _image_at_infinity(phi),
                                   wild=True))
        return out
    if not w.is_zero() and w.degree() >= 1:
        for v, _ in factor_support(w):
            out.append(BranchPoint(v, _image_at(phi, v)))
    # ramification over the image of infinity
    t0_inf = _image_at_infinity(phi)
    if t0_inf == "inf":
        e = valuation(RatFunc.from_poly(den) / RatFunc.from_poly(num), Place.infinity()) \
            if not num.is_zero() else 0
        e = den.degree() * 0 + (num.degree() - den.degree())
        if e >= 2:
            out.append(BranchPoint(Place.infinity(), "inf"))
    else:
        shifted = phi - RatFunc.const(field, _parse_value(field, t0_inf))
        if valuation(shifted, Place.infinity()) >= 2:
            out.append(BranchPoint(Place.infinity(), t0_inf))
    seen = set()
    uniq = []
    for b in out:
        key = str(b.place)
        if key not in seen:
            seen.add(key)
            uniq.append(b)
    return uniq


def _parse_value(field: BaseField, s: str):
    from .exactalg import parse_ratfunc
    return parse_ratfunc(s, field).eval_elem(field.zero())


def _image_at(phi: RatFunc, v: Place) -> Optional[str]:
    field = phi.field
    if v.degree() != 1:
        return None
    r = v.root()
    try:
        return field.fmt(phi.eval_elem(r))
    except ZeroDivisionError:
        return "inf"


def _image_at_infinity(phi: RatFunc) -> str:
    num, den = phi.num, phi.den
    if num.degree() > den.degree():
        return "inf"
    if num.degree() < den.degree():
        return phi.field.fmt(phi.field.zero())
    return phi.field.fmt(num.leading() / den.leading())


# ---------------------------------------------------------------------------
# setup and report


@dataclass(frozen=True)
class BaseChangeSetup:
    tag: str
    field: BaseField
    beta: Optional[object]
    jacobian: Model
    phi: RatFunc
    k3: Model
    deck: RatFunc             # s -> deck(s)
    nminus: Section
    entry: catalog.ExtremalEntry


@dataclass
class EnriquesReport:
    tag: str
    char: int
    beta: Optional[str]
    outcome: str              # "Enriques" | "Coble" | "Invalid"
    reason: str
    double_fibers: list       # [(place str, symbol str)]
    k3_fibers: list           # [(place str, symbol str, euler)]
    conditions: dict          # {"c1": bool, "c2": bool, "c3": bool}
    jac2_matrix: Optional[list]
    notes: list

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "type": self.tag,
            "char": self.char,
            "beta": self.beta,
            "outcome": self.outcome,
            "double_fibers": [list(t) for t in self.double_fibers],
            "k3_fibers": [list(t) for t in self.k3_fibers],
            "conditions": {"c1": self.conditions.get("c1"),
                           "c2": self.conditions.get("c2"),
                           "c3": self.conditions.get("c3")},
            "jac2_matrix": self.jac2_matrix,
            "notes": self.notes,
        }


def _invalid(tag, char, beta, reason, notes=None) -> EnriquesReport:
    return EnriquesReport(tag, char, str(beta) if beta is not None else None,
                          "Invalid", reason, [], [], {}, None, notes or [])


# ---------------------------------------------------------------------------
# the three conditions


def deck_fixes_model(setup: BaseChangeSetup) -> bool:
    subs = setup.deck
    for a in setup.k3.coefficients():
        if a.is_zero():
            continue
        if a.compose(subs) != a:
            return False
    return True


def verify_enriques_section(setup: BaseChangeSetup) -> EnriquesReport:
    """Check the three conditions and classify the quotient."""
    tag, field = setup.tag, setup.field
    char = field.char
    beta = setup.beta
    notes: list = []
    try:
        table = fiber_table(setup.k3)
    except DegenerateModel as e:
        return _invalid(tag, char, beta, f"degenerate model: {e}")
    k3_fibers = [(str(f.place), str(f.symbol), f.euler) for f in table.fibers]
    if table.total_euler != 24:
        return _invalid(tag, char, beta,
                        f"not a K3 model (Euler number {table.total_euler})")
    nm = setup.nminus
    if nm.is_zero or not mwgroup.is_on_curve(setup.k3, nm):
        return _invalid(tag, char, beta, "section missing or not on the model")

    # (1) disjoint from the zero section
    c1 = mwgroup.intersection_with_zero(setup.k3, nm) == 0
    # (2) deck image equals the inverse section
    neg = mwgroup.negate(setup.k3, nm)
    c2 = (nm.x.compose(setup.deck) == neg.x
          and nm.y.compose(setup.deck) == neg.y
          and deck_fixes_model(setup))
    # (3) at every singular branch fiber, off the identity component
    branches = branch_places(setup.phi, char)
    c3 = True
    coble_witness = None
    double_fibers = []
    for b in branches:
        fib = table.at(b.place)
        if fib is None:
            double_fibers.append((str(b.place), "I0"))
            if char == 2:
                ok, note = _ordinary_at(setup.k3, b.place)
                notes.append(note)
                if not ok:
                    return _invalid(tag, char, beta,
                                    "supersingular wild double fiber", notes)
            continue
        double_fibers.append((str(b.place), str(fib.symbol)))
        if fib.symbol.is_additive():
            return _invalid(
                tag, char, beta,
                f"additive fiber {fib.symbol} over a branch point", notes)
        idx = mwgroup.component_index(setup.k3, nm, b.place)
        if idx.index == 0:
            c3 = False
            coble_witness = (f"section meets the identity component of the "
                             f"{fib.symbol} fiber at {b.place}")
    if c1 and c2 and c3:
        outcome, reason = "Enriques", "all three conditions hold"
    elif c1 and c2:
        outcome, reason = "Coble", coble_witness or "condition (3) fails"
    else:
        failed = [name for name, ok in (("1", c1), ("2", c2)) if not ok]
        outcome, reason = "Invalid", f"condition ({'),('.join(failed)}) fails"
    jac2 = None
    try:
        jac2 = jac2_intersections(setup)
    except (CharUnsupported, NonIntegerIntersection) as e:
        notes.append(f"jac2 matrix unavailable: {e}")
    report = EnriquesReport(tag, char, str(beta) if beta is not None else None,
                            outcome, reason, double_fibers, k3_fibers,
                            {"c1": c1, "c2": c2, "c3": c3}, jac2, notes)
    return report


def _ordinary_at(k3: Model, v: Place) -> tuple:
    """Hasse-invariant style ordinariness check at a smooth place, char 2."""
    from .mwgroup import local_model
    ld = local_model(k3, v)
    from .exactalg import ResidueField
    res = ResidueField(k3.field, ld.place)
    a1 = ld.model.a1
    try:
        val = res.reduce_ratfunc(a1)
        ordinary = not res.is_zero(val)
    except ZeroDivisionError:
        ordinary = False
    note = ("wild double fiber is ordinary (a1 is a unit)" if ordinary
            else "wild double fiber fails the ordinariness test")
    return ordinary, note


# ---------------------------------------------------------------------------
# jac2 intersection numbers


def _preimage_places(phi: RatFunc, image: str, field: BaseField) -> list:
    """Places of the s-line over a t-line point (given as string or 'inf')."""
    if image == "inf":
        out = [] if phi.den.degree() == 0 else [v for v, _ in factor_support(phi.den)]
        if phi.num.degree() > phi.den.degree():
            out.append(Place.infinity())
        return out
    from .exactalg import parse_ratfunc
    t0 = parse_ratfunc(image, field).eval_elem(field.zero())
    shifted = phi - RatFunc.const(field, t0)
    out = [v for v, _ in factor_support(shifted.num)]
    if shifted.num.degree() < shifted.den.degree():
        out.append(Place.infinity())
    return out


def jac2_intersections(setup: BaseChangeSetup) -> list:
    """Intersection matrix of the special bisections jac2(P), P in MW(J(pi)).

    Entries are derived from <P, N-> = 0: P.N- = 2 - sum contr(P, N-), and
    translates; the diagonal carries self-intersections (-2 after descent).
    """
    entry = setup.entry
    contacts = catalog.mw_contacts(entry.name, setup.field.char if setup.field.char else 0)
    elements = sorted(contacts)
    jt = fiber_table(setup.jacobian)
    # locate each catalog fiber on the t-line (fibers with trivial component
    # groups never contribute)
    placed = []
    used: set = set()
    for sym, n in entry.fibers:
        if not catalog.component_group(sym, n):
            placed.append(None)
            continue
        hit = None
        for f in jt.fibers:
            if str(f.place) in used:
                continue
            if str(f.symbol) == catalog._sym_str(sym, n):
                hit = f
                break
        if hit is None:
            raise NonIntegerIntersection(f"cannot locate fiber {sym}{n}")
        used.add(str(hit.place))
        placed.append(hit)
    branches = branch_places(setup.phi, setup.field.char)
    branch_images = {b.image for b in branches}
    # per catalog fiber: (ramified?, upstairs data)
    fiber_data = []
    for (sym, n), jfib in zip(entry.fibers, placed):
        if jfib is None:
            fiber_data.append(None)
            continue
        timg = "inf" if jfib.place.is_infinity else (
            setup.field.fmt(jfib.place.root()) if jfib.place.degree() == 1 else None)
        ram = timg in branch_images
        ups = _preimage_places(setup.phi, timg, setup.field) if timg is not None else []
        nm_idx = []
        for w in ups:
            nm_idx.append((mwgroup.component_index(setup.k3, setup.nminus, w).index,
                           w.degree()))
        fiber_data.append({"sym": sym, "n": n, "ram": ram, "nm": nm_idx})
    hN = mwgroup.height(setup.k3, setup.nminus)
    n_elem = _nminus_element(entry, contacts, fiber_data, setup) if hN == 0 else None
    size = len(elements)
    matrix = [[0] * size for _ in range(size)]
    for i, ei in enumerate(elements):
        for j, ej in enumerate(elements):
            if j < i:
                continue
            val = _jac2_entry(entry, contacts, fiber_data, hN, ei, ej,
                              diagonal=(i == j), n_elem=n_elem)
            matrix[i][j] = val
            matrix[j][i] = val
    return matrix


def _nminus_element(entry, contacts, fiber_data, setup):
    """When the distinguished section is the pullback of a 2-torsion element
    of MW(J(pi)), identify that element by its contact pattern."""
    if not isinstance(mwgroup.torsion_order(setup.k3, setup.nminus, 2), int):
        return None
    hits = []
    for elem, labels in contacts.items():
        if any((2 * v) % f for v, f in zip(elem, entry.mw)):
            continue
        if all(v == 0 for v in elem):
            continue
        ok = True
        for k, fd in enumerate(fiber_data):
            if fd is None:
                continue
            sym, n = fd["sym"], fd["n"]
            lbl = labels[k]
            if fd["ram"]:
                n2 = 2 * n
                nm_idx = fd["nm"][0][0]
                if (2 * lbl[0]) % n2 != nm_idx % n2 and (2 * lbl[0]) % n2 != (n2 - nm_idx) % n2:
                    ok = False
                    break
            else:
                for idx, _deg in fd["nm"]:
                    if _expand_label(sym, n, idx) not in (
                            lbl, _negate_label(sym, n, lbl)):
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            hits.append(elem)
    return hits[0] if len(hits) == 1 else None


def _pair_sum_unramified(sym, n, lp, lq_choices):
    """Sum of pair corrections over the two copies of a simple fiber."""
    total = Fraction(0)
    for lq in lq_choices:
        total += catalog.contr_pair_of(sym, n, lp, lq)
    return total


def _negate_label(sym, n, lbl):
    fac = catalog.component_group(sym, n)
    return tuple((-a) % f for a, f in zip(lbl, fac))


def _add_label(sym, n, l1, l2):
    fac = catalog.component_group(sym, n)
    return tuple((a + b) % f for a, b, f in zip(l1, l2, fac))


def _jac2_entry(entry, contacts, fiber_data, hN, ei, ej, diagonal: bool,
                n_elem=None):
    """jac2(P_i) . jac2(P_j) = P_i.P_j + P_i.(P_j + N-) on the cover, halved.

    The diagonal is -2 + P.(P + N-).  When the distinguished section is the
    pullback of the 2-torsion element n_elem, everything is an intersection
    of torsion pullbacks; otherwise (P + N-).O is recovered from the height.
    """
    zero_elt = tuple(0 for _ in entry.mw)
    if n_elem is not None:
        r_elt = tuple((a + b) % f for a, b, f in zip(ej, n_elem, entry.mw))
        p_qn = _pullback_pair(entry, contacts, fiber_data, ei, r_elt)
        if diagonal:
            return -2 + p_qn
        pq = _pullback_pair(entry, contacts, fiber_data, ei, ej)
        return pq + p_qn

    sum_pq = Fraction(0)
    sum_p_qn = Fraction(0)
    sum_qn = Fraction(0)
    pi_labels = contacts[ei]
    pj_labels = contacts[ej]
    for k, fd in enumerate(fiber_data):
        if fd is None:
            continue
        sym, n = fd["sym"], fd["n"]
        lp, lq = pi_labels[k], pj_labels[k]
        if fd["ram"]:
            if sym != "I":
                raise NonIntegerIntersection("additive fiber over a branch point")
            n2 = 2 * n
            up_lp = (2 * lp[0] % n2,)
            up_lq = (2 * lq[0] % n2,)
            nm_idx = fd["nm"][0][0]
            nlabel = (nm_idx % n2,)
            sum_pq += catalog.contr_pair_of("I", n2, up_lp, up_lq)
            qn = _add_label("I", n2, up_lq, nlabel)
            sum_p_qn += catalog.contr_pair_of("I", n2, up_lp, qn)
            sum_qn += catalog.contr_of("I", n2, qn)
        else:
            copies = []
            for idx, deg in fd["nm"]:
                if deg == 2:
                    copies.extend([idx, _neg(idx, sym, n)])
                else:
                    copies.append(idx)
            if len(copies) == 1:
                copies = [copies[0], _neg(copies[0], sym, n)]
            if len(copies) != 2:
                raise NonIntegerIntersection("unexpected preimage structure")
            nlab1 = _expand_label(sym, n, copies[0])
            nlab2 = _negate_label(sym, n, nlab1)
            sum_pq += 2 * catalog.contr_pair_of(sym, n, lp, lq)
            qn1 = _add_label(sym, n, lq, nlab1)
            qn2 = _add_label(sym, n, lq, nlab2)
            sum_p_qn += (catalog.contr_pair_of(sym, n, lp, qn1)
                         + catalog.contr_pair_of(sym, n, lp, qn2))
            sum_qn += catalog.contr_of(sym, n, qn1) + catalog.contr_of(sym, n, qn2)
    qn_o2 = hN - 4 + sum_qn
    if qn_o2.denominator != 1 or qn_o2 < 0 or int(qn_o2) % 2:
        raise NonIntegerIntersection(
            f"2 (Q+N).O = {qn_o2} is not an even nonnegative integer")
    qn_o = int(qn_o2) // 2
    if ei == zero_elt and ej == zero_elt:
        return -2
    if ei == zero_elt:
        # jac2(O) is the bisection N itself; N.jac2(Q) = (Q+N-).O here
        return qn_o
    p_qn = Fraction(2) + qn_o - sum_p_qn
    if p_qn.denominator != 1 or p_qn < 0:
        raise NonIntegerIntersection(f"P.(Q+N) = {p_qn} is not admissible")
    if diagonal:
        return -2 + int(p_qn)
    pq = Fraction(2) - sum_pq
    if pq.denominator != 1 or pq < 0:
        raise NonIntegerIntersection(f"P.Q = {pq} is not admissible")
    return int(pq) + int(p_qn)


def _pullback_pair(entry, contacts, fiber_data, ea, eb) -> int:
    """Intersection number of the pullbacks of two torsion elements."""
    zero_elt = tuple(0 for _ in entry.mw)
    if ea == eb:
        return -2
    if ea == zero_elt or eb == zero_elt:
        return 0
    total = Fraction(2)
    la, lb = contacts[ea], contacts[eb]
    for k, fd in enumerate(fiber_data):
        if fd is None:
            continue
        sym, n = fd["sym"], fd["n"]
        if fd["ram"]:
            n2 = 2 * n
            total -= catalog.contr_pair_of(
                "I", n2, (2 * la[k][0] % n2,), (2 * lb[k][0] % n2,))
        else:
            total -= 2 * catalog.contr_pair_of(sym, n, la[k], lb[k])
    if total.denominator != 1 or total < 0:
        raise NonIntegerIntersection(f"P.Q = {total} is not admissible")
    return int(total)


def _neg(idx: int, sym: str, n: int) -> int:
    if sym == "I":
        return (n - idx) % n
    return idx


def _expand_label(sym: str, n: int, idx):
    """Unsigned geometric index -> a component-group label."""
    fac = catalog.component_group(sym, n)
    if sym == "I":
        return (idx % n,)
    if sym == "I*":
        if idx == 0:
            return tuple(0 for _ in fac)
        if n % 2:
            return (2,) if idx == 1 else (1,)
        return (1, 1) if idx == 1 else (1, 0)
    return (idx,)


# ---------------------------------------------------------------------------
# type pipelines


def make_setup(tag: str, field: BaseField, beta=None) -> BaseChangeSetup:
    md = catalog.type_metadata(tag)
    entry = catalog.entry_for(md.jacobian_entry, field.char)
    jac = catalog.jacobian_model(tag, field)
    phi = catalog.phi_for(tag, field, beta)
    deck = catalog.deck_for(tag, field)
    if tag == "IV":
        k3 = _paper_k3_iv(field)
    else:
        k3 = base_change(jac, phi)
    nm = _nminus_section(tag, field, k3, beta)
    return BaseChangeSetup(tag, field, beta, jac, phi, k3, deck, nm, entry)


def _paper_k3_iv(field: BaseField) -> Model:
    from .exactalg import parse_poly
    return Model.make(field, 0, parse_poly("2*(s^4+1)", field), 0,
                      parse_poly("(s^4-1)^2", field), 0)


def _nminus_section(tag: str, field: BaseField, k3: Model, beta) -> Section:
    if tag in ("VI", "VII"):
        # produced by the degree-bounded solver over Q, then moved to `field`
        fam, reqs = catalog.solver_family(tag)
        want = Fraction(1) if tag == "VI" else Fraction(0)
        out = solve_integral_sections(fam, reqs, beta=want)
        if not out.solutions:
            raise DegenerateModel(f"no integral section found for type {tag}")
        sol = out.solutions[0]
        x = Poly.make(field, [field.coerce(c) for c in sol.x_coeffs])
        y = Poly.make(field, [field.coerce(c) for c in sol.y_coeffs])
        return mwgroup.section(k3, RatFunc.from_poly(x), RatFunc.from_poly(y))
    data = catalog.nminus_for(tag, field, beta)
    from .exactalg import parse_ratfunc
    x, y = data
    if isinstance(x, str):
        x = parse_ratfunc(x, field)
    if isinstance(y, str):
        y = parse_ratfunc(y, field)
    return mwgroup.section(k3, x, y)


def type_pipeline(tag: str, char: int, beta=None):
    """Run the construction; returns (EnriquesReport, DualGraph fragment)."""
    md = catalog.type_metadata(tag)
    field = QQ if char == 0 else GF(char)
    if tag == "IV" and char == 0:
        field = QI
    if char == 2 and tag not in ("I", "II"):
        return (_invalid(tag, char, beta,
                         "characteristic-2 pipelines cover types I and II only"),
                dualgraph.CRITICAL_GRAPHS[tag])
    pd = catalog.pipeline_data(tag)
    if pd.needs_beta:
        if beta is None:
            beta = pd.default_beta
        if field.is_zero(field.coerce(beta)):
            return (_invalid(tag, char, beta, "degenerate parameter beta = 0"),
                    dualgraph.CRITICAL_GRAPHS[tag])
    else:
        beta = None
    if char != 2:
        try:
            got = catalog.entry_for(md.jacobian_entry, char)
            want = catalog.entry_for(md.jacobian_entry, 0)
            if got.fiber_names() != want.fiber_names():
                return (_invalid(tag, char, beta,
                                 f"no extremal ({','.join(want.fiber_names())}) "
                                 f"in characteristic {char}"),
                        dualgraph.CRITICAL_GRAPHS[tag])
        except KeyError:
            return (_invalid(tag, char, beta,
                             f"no extremal fibration {md.jacobian_entry} in "
                             f"characteristic {char}"),
                    dualgraph.CRITICAL_GRAPHS[tag])
    try:
        setup = make_setup(tag, field, beta)
    except (DegenerateModel, ZeroDivisionError, Inseparable, ValueError) as e:
        return (_invalid(tag, char, beta, f"construction degenerates: {e}"),
                dualgraph.CRITICAL_GRAPHS[tag])
    report = verify_enriques_section(setup)
    frag = assembled_graph(tag)
    return report, frag


def assembled_graph(tag: str) -> dualgraph.DualGraph:
    if tag == "I":
        return dualgraph.type_i_full_graph()
    return dualgraph.CRITICAL_GRAPHS[tag]


def degeneration_scan(tag: str, char: int, betas) -> list:
    """type_pipeline over a parameter range (types I and II)."""
    if tag not in ("I", "II"):
        raise ValueError("degeneration scans cover types I and II")
    out = []
    for b in betas:
        report, _ = type_pipeline(tag, char, Fraction(b))
        out.append((b, report.outcome))
    return out

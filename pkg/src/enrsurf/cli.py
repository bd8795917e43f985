"""Command-line front end: analyze, enriques, enumerate, graph, integral,
catalog, selftest.  Outputs are deterministic (byte-identical across runs
for identical inputs and seed)."""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import catalog, configenum, dualgraph, enriques, mwgroup, weierstrass
from .exactalg import (
    BadReduction, BaseField, CannotCertifyIrreducible, GF, ParseError, Place,
    Poly, QI, QQ, RatFunc, ZeroInput, factor_support, parse_poly,
    parse_ratfunc, reduce_mod_p, valuation,
)
from .weierstrass import CharUnsupported, DegenerateModel, Model, fiber_table
from .mwgroup import NonIntegerIntersection, NotTriangular
from .dualgraph import PreconditionViolated
from .enriques import Inseparable
from .catalog import Underdetermined


EXIT_CODES = [
    (ParseError, 2),
    (DegenerateModel, 3),
    (CharUnsupported, 4),
    (ZeroInput, 5),
    (BadReduction, 6),
    (CannotCertifyIrreducible, 7),
    (Inseparable, 8),
    (NotTriangular, 9),
    (NonIntegerIntersection, 10),
    (PreconditionViolated, 11),
    (Underdetermined, 12),
]


def _emit(payload, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        _emit_text(payload)


def _emit_text(payload, indent: int = 0) -> None:
    pad = "  " * indent
    if isinstance(payload, dict):
        for k, v in payload.items():
            if isinstance(v, (dict, list)):
                sys.stdout.write(f"{pad}{k}:\n")
                _emit_text(v, indent + 1)
            else:
                sys.stdout.write(f"{pad}{k}: {v}\n")
    elif isinstance(payload, list):
        for v in payload:
            if isinstance(v, (dict, list)):
                _emit_text(v, indent)
            else:
                sys.stdout.write(f"{pad}{v}\n")
    else:
        sys.stdout.write(f"{pad}{payload}\n")


# ---------------------------------------------------------------------------
# model files


def parse_field(label: str) -> BaseField:
    label = label.strip()
    if label == "Q":
        return QQ
    if label == "Qi":
        return QI
    if label.startswith("Fp"):
        return GF(int(label[2:].strip()))
    raise ParseError(f"unknown field {label!r}", 0)


def parse_model_text(text: str) -> Model:
    field = None
    coeffs = {"a1": None, "a2": None, "a3": None, "a4": None, "a6": None}
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.strip()
        if line and not line.startswith("#"):
            if "=" not in line:
                raise ParseError("expected 'key = value'", offset)
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "field":
                field = parse_field(value)
            elif key in coeffs:
                coeffs[key] = value
            else:
                raise ParseError(f"unknown key {key!r}", offset)
        offset += len(raw.encode())
    if field is None:
        raise ParseError("missing 'field = ...' line", 0)
    polys = {}
    for k, v in coeffs.items():
        polys[k] = parse_poly(v, field) if v is not None else Poly.zero(field)
    return Model.make(field, polys["a1"], polys["a2"], polys["a3"],
                      polys["a4"], polys["a6"])


def parse_section_text(text: str, w: Model) -> mwgroup.Section:
    text = text.strip()
    if text == "zero":
        return mwgroup.Section.zero()
    if not (text.startswith("(") and text.endswith(")")):
        raise ParseError("expected '(x = ..., y = ...)' or 'zero'", 0)
    body = text[1:-1]
    parts = body.split(",")
    xs = ys = None
    for part in parts:
        key, _, value = part.partition("=")
        if key.strip() == "x":
            xs = value.strip()
        elif key.strip() == "y":
            ys = value.strip()
    if xs is None or ys is None:
        raise ParseError("section literal needs both x and y", 0)
    x = parse_ratfunc(xs, w.field)
    y = parse_ratfunc(ys, w.field)
    return mwgroup.section(w, x, y)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    w = parse_model_text(_read_input(args.model))
    inv = weierstrass.invariants(w)
    table = fiber_table(w)
    payload = {
        "schema": 1,
        "field": repr(w.field),
        "fibers": [[str(f.place), str(f.symbol), f.components, f.euler]
                   for f in table.fibers],
        "total_euler": table.total_euler,
        "j": str(inv.j),
        "disc_factors": [[str(p), m] for p, m in factor_support(inv.disc.num)],
    }
    if args.section:
        p = parse_section_text(args.section, w)
        payload["section"] = {
            "on_curve": True,
            "height": str(mwgroup.height(w, p)) if not p.is_zero else "0",
            "torsion_order": _torsion_str(w, p),
            "components": [[str(f.place),
                            mwgroup.component_index(w, p, f.place).index]
                           for f in table.fibers if f.components > 1],
        }
    _emit(payload, args.format)
    return 0


def _torsion_str(w, p) -> str:
    t = mwgroup.torsion_order(w, p, 12)
    return str(t) if isinstance(t, int) else "not torsion up to 12"


def cmd_enriques(args) -> int:
    beta = Fraction(args.beta) if args.beta is not None else None
    report, _graph = enriques.type_pipeline(args.type, args.char, beta)
    _emit(report.to_json_dict(), args.format)
    return 0


def cmd_enumerate(args) -> int:
    if args.table4:
        rows = []
        for row, _expected in configenum.TABLE4_ROWS:
            configs = configenum.enumerate_configs(
                configenum.parse_fiber_list(row), args.char)
            rows.append({"fibers": row, "count": len(configs)})
        _emit({"schema": 1, "char": args.char, "rows": rows}, args.format)
        return 0
    specs = configenum.parse_fiber_list(args.fibers)
    configs = configenum.enumerate_configs(specs, args.char)
    payload = {
        "schema": 1,
        "fibers": args.fibers,
        "char": args.char,
        "count": len(configs),
        "configurations": [
            {"contacts": [[str(s.label), s.double, list(map(list, c))]
                          for s, c in zip(cfg.fibers, cfg.contacts)],
             "kind": verdict.kind,
             "total_correction": str(verdict.total)}
            for cfg, verdict in configs
        ],
    }
    _emit(payload, args.format)
    return 0


def cmd_graph(args) -> int:
    g = dualgraph.graph_from_text(_read_input(args.graph))
    if args.dot:
        sys.stdout.write(dualgraph.to_dot(g))
        return 0
    if args.critical:
        found = sorted(dualgraph.find_critical(g))
        _emit({"schema": 1, "critical_types": found}, args.format)
        return 0
    if args.vinberg:
        ok, witness = dualgraph.vinberg_check(g, args.char)
        _emit({"schema": 1, "finite_index": ok, "witness": witness},
              args.format)
        return 0
    comps = []
    for comp in g.components():
        lbl = dualgraph.classify_component(g, comp)
        comps.append({"vertices": list(comp),
                      "label": str(lbl) if lbl else "NotDynkin"})
    _emit({"schema": 1, "components": comps}, args.format)
    return 0


def cmd_integral(args) -> int:
    primes = [int(p) for p in args.primes.split(",")] if args.primes else []
    out = []
    for im in catalog.integral_models():
        if args.type and im.type_tag != args.type:
            continue
        base = im.model(QQ)
        sig0 = _geometric_signature(fiber_table(base))
        row = {"type": im.type_tag, "bad_primes_product": im.bad_primes_product,
               "char0_signature": sig0, "primes": []}
        for p in primes:
            row["primes"].append(_reduction_report(im, p, sig0))
        out.append(row)
    _emit({"schema": 1, "models": out}, args.format)
    return 0


def _geometric_signature(table) -> list:
    out = []
    for f in table.fibers:
        out.extend([str(f.symbol)] * f.place.degree())
    return sorted(out)


def _reduction_report(im, p: int, sig0) -> dict:
    bad = p in im.bad_primes()
    try:
        wp = im.model(GF(p))
        sig = _geometric_signature(fiber_table(wp))
        matches = sig == sig0
        return {"p": p, "bad": bad, "signature": sig, "matches_char0": matches}
    except (DegenerateModel, BadReduction, ZeroDivisionError) as e:
        return {"p": p, "bad": bad, "signature": None,
                "matches_char0": False, "error": str(e)}


def cmd_catalog(args) -> int:
    if args.what == "dump":
        payload = {
            "schema": 1,
            "extremal_fibrations": {
                str(char): [{"name": e.name, "fibers": list(e.fiber_names()),
                             "mw": list(e.mw)}
                            for e in catalog.extremal_fibrations(char)]
                for char in (0, 5, 3, 2)
            },
            "types": [
                {"tag": md.tag,
                 "aut": catalog.group_str(md.aut),
                 "aut_order": catalog.group_order(md.aut),
                 "aut_nt": catalog.group_str(md.aut_nt),
                 "aut_ss": catalog.group_str(md.aut_ss),
                 "aut_ss_order": catalog.group_order(md.aut_ss),
                 "chars_excluded": list(md.chars_excluded),
                 "moduli": md.moduli,
                 "P_K": list(md.p_k),
                 "jacobian": md.jacobian_entry}
                for md in (catalog.type_metadata(t) for t in catalog.TYPE_TAGS)
            ],
            "integral_models": [
                {"coefficients": list(im.coeffs), "ring": f"Z[1/{im.bad_primes_product}]",
                 "type": im.type_tag}
                for im in catalog.integral_models()
            ],
        }
        _emit(payload, args.format)
        return 0
    raise ParseError(f"unknown catalog subcommand {args.what!r}", 0)


def cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    report = {"schema": 1, "seed": args.seed, "checks": []}

    def check(name, ok):
        report["checks"].append({"name": name, "ok": bool(ok)})

    # ring axioms on random polynomials over Q and F5
    for field in (QQ, GF(5)):
        ok = True
        for _ in range(50):
            a = Poly.make(field, [field.random(rng, 4) for _ in range(rng.randint(1, 4))])
            b = Poly.make(field, [field.random(rng, 4) for _ in range(rng.randint(1, 4))])
            c = Poly.make(field, [field.random(rng, 4) for _ in range(rng.randint(1, 4))])
            if (a + b) * c != a * c + b * c or a * (b * c) != (a * b) * c:
                ok = False
        check(f"ring axioms over {field!r}", ok)
    # valuation additivity
    ok = True
    for _ in range(50):
        f = Poly.make(QQ, [QQ.random(rng, 4) for _ in range(rng.randint(1, 4))])
        g = Poly.make(QQ, [QQ.random(rng, 4) for _ in range(rng.randint(1, 4))])
        if f.is_zero() or g.is_zero():
            continue
        for v in (Place.at(QQ, 0), Place.at(QQ, 1), Place.infinity()):
            if valuation(f * g, v) != valuation(f, v) + valuation(g, v):
                ok = False
    check("valuation additivity", ok)
    # factorization round trip
    ok = True
    for _ in range(25):
        f = Poly.make(QQ, [QQ.random(rng, 3) for _ in range(rng.randint(2, 5))])
        if f.degree() < 1:
            continue
        try:
            parts = factor_support(f)
        except CannotCertifyIrreducible:
            continue
        prod = Poly.const(QQ, 1)
        for pl, m in parts:
            prod = prod * pl.poly ** m
        if prod.monic() != f.monic():
            ok = False
    check("factorization round trip", ok)
    report["ok"] = all(c["ok"] for c in report["checks"])
    _emit(report, args.format)
    return 0 if report["ok"] else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="enrsurf",
        description="exact-arithmetic toolkit for elliptic fibrations and "
                    "Enriques quotient constructions")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("json", "text", "dot"),
                       default="json")

    p = sub.add_parser("analyze", help="fiber table of a model file")
    p.add_argument("model", help="model file path or - for stdin")
    p.add_argument("--section", help="section literal '(x = ..., y = ...)'")
    add_format(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("enriques", help="run a type pipeline")
    p.add_argument("--type", required=True, choices=catalog.TYPE_TAGS)
    p.add_argument("--char", type=int, default=0)
    p.add_argument("--beta", default=None)
    add_format(p)
    p.set_defaults(func=cmd_enriques)

    p = sub.add_parser("enumerate", help="fiber-bisection configurations")
    p.add_argument("--fibers", help="e.g. 'E7~+2A1~'")
    p.add_argument("--char", type=int, default=0)
    p.add_argument("--table4", action="store_true",
                   help="emit the twenty-row count summary")
    add_format(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("graph", help="dual-graph operations")
    p.add_argument("graph", help="graph file path or - for stdin")
    p.add_argument("--vinberg", action="store_true")
    p.add_argument("--critical", action="store_true")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--char", type=int, default=0)
    add_format(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("integral", help="reduction sweep of integral models")
    p.add_argument("--type", default=None)
    p.add_argument("--primes", default="")
    add_format(p)
    p.set_defaults(func=cmd_integral)

    p = sub.add_parser("catalog", help="catalog data")
    p.add_argument("what", choices=("dump",))
    add_format(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("selftest", help="randomized property checks")
    p.add_argument("--seed", type=int, default=0)
    add_format(p)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except tuple(cls for cls, _ in EXIT_CODES) as e:
        for cls, code in EXIT_CODES:
            if isinstance(e, cls):
                sys.stderr.write(f"error[{cls.__name__}]: {e}\n")
                return code
        raise
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return 13


if __name__ == "__main__":
    sys.exit(main())

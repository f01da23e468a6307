"""Command-line front end.

Reads a session file (or stdin), dispatches one subcommand, prints a JSON
document on stdout.  Exit codes: 0 success, 2 input/precondition errors,
3 for non-convergence or outputs tagged non-generic.  Exact rationals are
emitted as "p/q" strings; floats in shortest round-trip form.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .errors import NonConvergenceError, ParseError
from .grammar import Session, parse_scalar, parse_session
from .hahn import NEG_INF, HahnScalar, gaussian, t_power, ONE
from .ideals import ValuedIdeal, critical_levels, fiber_report, initial_ideal
from .layers import det_free_reduce, layer_decomposition, realize_from_layers
from .lifting import lift_hypersurface_root
from .phase import vector_initial_form
from .polys import (ComplexPoly, ValuedPoly, initial_poly, poly_text,
                    tropical_poly)
from .sl2 import (HahnMat2, SL2TropPoint, sl2_limit, sl2_limit_inverse,
                  valuative_tropicalization, verify_limit)


def _fmt_val(v) -> str:
    return "-inf" if v == NEG_INF else str(v)


def _mat_json(m) -> list:
    return [[[z.real, z.imag] for z in row] for row in m.tolist()]


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def _pick(mapping: dict, name: str | None, what: str):
    if name is not None:
        if name not in mapping:
            raise ParseError(f"no {what} named {name!r} in the session file")
        return name, mapping[name]
    if len(mapping) == 1:
        return next(iter(mapping.items()))
    raise ParseError(f"session defines {len(mapping)} {what}s; pick one with --name")


def _load_session(path: str) -> Session:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return parse_session(text)


# -- subcommands -------------------------------------------------------------

def cmd_val(sess: Session, args) -> dict:
    out = {"scalars": [], "vectors": []}
    for name, p in sess.polys.items():
        if p.degree() <= 0:
            c = p.terms[0][1] if p.terms else None
            if c is None:
                out["scalars"].append({"name": name, "valuation": "-inf"})
            else:
                lead = c.initial_form()
                out["scalars"].append({
                    "name": name,
                    "valuation": _fmt_val(c.valuation()),
                    "initial_form": {"degree": str(lead.degree),
                                     "coeff": [str(lead.coeff.re), str(lead.coeff.im)]},
                })
    for name, m in sess.mats.items():
        p = vector_initial_form(list(m.entries))
        out["vectors"].append({"name": name, "initial_form": p.to_json()})
    return out


def cmd_init(sess: Session, args) -> dict:
    alpha = _fraction(args.alpha)
    if args.name in sess.ideals or (args.name is None and not sess.polys and sess.ideals):
        name, gens = _pick(sess.ideals, args.name, "ideal")
        rep = initial_ideal(ValuedIdeal(tuple(gens), len(sess.varnames)), alpha)
        return {"name": name, "alpha": str(alpha), "ideal": rep.to_json()}
    name, f = _pick(sess.polys, args.name, "poly")
    value, rep = initial_poly(f, alpha)
    return {"name": name, "value": str(value), "poly": str(rep)}


def cmd_levels(sess: Session, args) -> dict:
    name, gens = _pick(sess.ideals, args.name, "ideal")
    report = critical_levels(ValuedIdeal(tuple(gens), len(sess.varnames)))
    out = report.to_json()
    out["name"] = name
    if args.svg:
        from .svg import tropical_svg
        tropical_svg(tropical_poly(gens[0]), args.svg)
        out["svg"] = args.svg
    return out


def cmd_fiber(sess: Session, args) -> dict:
    alpha = _fraction(args.alpha)
    name, gens = _pick(sess.ideals, args.name, "ideal")
    rep = fiber_report(ValuedIdeal(tuple(gens), len(sess.varnames)), alpha)
    out = rep.to_json()
    out.update({"name": name, "alpha": str(alpha)})
    return out


def cmd_lift(sess: Session, args) -> dict:
    name, f = _pick(sess.polys, args.name, "poly")
    if len(sess.varnames) != 1:
        raise ParseError("lift needs a session with exactly one variable")
    alpha = _fraction(args.alpha)
    theta_scalar = parse_scalar(args.theta)
    if not theta_scalar.is_term() or theta_scalar.num.leading()[0] != 0:
        raise ParseError("--theta must be a plain complex rational")
    theta = theta_scalar.num.leading()[1]
    z = lift_hypersurface_root(f, alpha, theta, args.precision)
    res = f.evaluate([z]).valuation()
    return {"name": name, "alpha": str(alpha), "theta": str(theta),
            "precision": args.precision, "root": str(z),
            "residual_valuation": _fmt_val(res)}


def cmd_sl2_limit(sess: Session, args) -> dict:
    name, m = _pick(sess.mats, args.name, "mat")
    trop = valuative_tropicalization(m)
    lim = sl2_limit(trop)
    return {"name": name, "trop": trop.to_json(), "limit": _mat_json(lim)}


def cmd_sl2_invert(sess: Session, args) -> dict:
    import numpy as np
    if args.entries:
        vals = json.loads(args.entries)
        flat = [complex(re, im) for re, im in vals]
        c = np.array([[flat[0], flat[1]], [flat[2], flat[3]]])
        src = "entries"
    else:
        if args.s is None:
            raise ParseError("sl2-invert needs --entries or --s (to evaluate a session matrix)")
        name, m = _pick(sess.mats, args.name, "mat")
        c = m.evaluate(float(args.s))
        src = f"{name} at s={args.s}"
    p = sl2_limit_inverse(c)
    out = p.to_json()
    out["source"] = src
    return out


def cmd_layers(sess: Session, args) -> dict:
    name, f = _pick(sess.polys, args.name, "poly")
    if len(sess.varnames) != 4:
        raise ParseError("layers needs a session with the four matrix entries")
    reduced = det_free_reduce(f)
    decomp = layer_decomposition(reduced)
    out = decomp.to_json()
    out.update({"name": name, "det_free_form": poly_text(reduced, sess.varnames)})
    if args.svg:
        from .svg import layers_svg
        layers_svg(decomp, args.svg)
        out["svg"] = args.svg
    return out


def cmd_verify_limit(sess: Session, args) -> dict:
    s_values = [float(x) for x in args.s.split(",") if x.strip()]
    if not s_values:
        raise ParseError("--s needs a comma-separated list of values")
    if args.name is not None:
        names = [args.name]
    else:
        names = list(sess.mats)
    samples = []
    for name in names:
        if name not in sess.mats:
            raise ParseError(f"no mat named {name!r} in the session file")
        samples.append(verify_limit(sess.mats[name], s_values).to_json())
    return {"samples": samples}


def cmd_realize(sess: Session, args) -> dict:
    roots = [_fraction(x) for x in args.roots.split(",")] if args.roots else []
    block_names = [x.strip() for x in args.blocks.split(",")]
    blocks = []
    for bn in block_names:
        if bn not in sess.polys:
            raise ParseError(f"no poly named {bn!r} in the session file")
        p = sess.polys[bn]
        acc = {}
        for u, c in p.terms:
            if not c.is_term() or c.num.leading()[0] != 0:
                raise ParseError(f"block {bn!r} must have constant complex coefficients")
            acc[u] = c.num.leading()[1]
        blocks.append(ComplexPoly.from_dict(len(sess.varnames), acc))
    result = realize_from_layers(blocks, roots)
    return {
        "poly": poly_text(result, sess.varnames),
        "tropical_roots": [str(r) for r in tropical_poly(result).roots()],
    }


def cmd_selftest(sess: Session, args) -> dict:
    rng = random.Random(args.seed)

    def rand_scalar() -> HahnScalar:
        out = None
        for _ in range(rng.randint(1, 3)):
            term = HahnScalar.term(
                gaussian(rng.randint(-4, 4), rng.randint(-2, 2)),
                Fraction(rng.randint(-4, 4), rng.choice([1, 2])))
            out = term if out is None else out + term
        return out if out is not None else ONE

    mult_ok = round_ok = 0
    trials = 200
    for _ in range(trials):
        a, b = rand_scalar(), rand_scalar()
        if (a * b).valuation() == a.valuation() + b.valuation() or a.is_zero() or b.is_zero():
            mult_ok += 1
        if parse_scalar(str(a)) == a:
            round_ok += 1
    return {"seed": args.seed, "trials": trials,
            "valuation_multiplicative": mult_ok, "print_parse_roundtrip": round_ok,
            "ok": mult_ok == trials and round_ok == trials}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="phasetrop",
        description="Phase tropicalization calculator over Hahn-series fields")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("file", nargs="?", default="-",
                       help="session file (default: stdin)")
        p.add_argument("--name", help="object to act on (when several are declared)")
        p.set_defaults(fn=fn)
        return p

    add("val", cmd_val, help="valuations and initial forms of scalars and matrices")
    p = add("init", cmd_init, help="initial polynomial or ideal at a level")
    p.add_argument("--alpha", required=True, help="level, a rational like 3/2")
    p = add("levels", cmd_levels, help="critical-level report of an ideal")
    p.add_argument("--svg", help="write a tropical graph SVG here")
    p = add("fiber", cmd_fiber, help="fiber ideal, homogeneity and dimension at a level")
    p.add_argument("--alpha", required=True)
    p = add("lift", cmd_lift, help="lift a residue root to a truncated solution")
    p.add_argument("--alpha", required=True)
    p.add_argument("--theta", required=True, help="residue root, e.g. '1' or '1+i'")
    p.add_argument("--precision", type=int, default=3)
    add("sl2-limit", cmd_sl2_limit, help="limit matrix of a matrix's tropicalization")
    p = add("sl2-invert", cmd_sl2_invert, help="invert the limit map on a numeric matrix")
    p.add_argument("--s", type=float, help="evaluate the session matrix at t = e^s")
    p.add_argument("--entries", help='JSON [[re,im],...] row-major numeric entries')
    p = add("layers", cmd_layers, help="surface layer decomposition")
    p.add_argument("--svg", help="write a layer-bar SVG here")
    p = add("verify-limit", cmd_verify_limit, help="limit-formula verification harness")
    p.add_argument("--s", required=True, help="comma-separated s values, e.g. 10,20,40,80")
    p = add("realize", cmd_realize, help="build a surface with prescribed roots")
    p.add_argument("--blocks", required=True, help="comma-separated poly names")
    p.add_argument("--roots", default="", help="comma-separated target roots")
    p = add("selftest", cmd_selftest, help="quick seeded self-checks")
    p.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sess = _load_session(args.file)
        out = args.fn(sess, args)
    except ParseError as exc:
        json.dump({"error": {"type": "parse", "message": exc.message,
                             "line": exc.line, "col": exc.col}}, sys.stdout)
        print()
        return 2
    except NonConvergenceError as exc:
        json.dump({"error": {"type": "non-convergence", "message": str(exc),
                             "partial": [str(x) for x in (exc.partial or [])]}},
                  sys.stdout)
        print()
        return 3
    except (ValueError, ZeroDivisionError) as exc:
        json.dump({"error": {"type": "input", "message": str(exc)}}, sys.stdout)
        print()
        return 2
    json.dump(out, sys.stdout, indent=2)
    print()
    if args.command == "layers" and out.get("tags"):
        return 3
    if args.command == "selftest" and not out.get("ok"):
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())

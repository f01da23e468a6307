"""Layer decomposition of surfaces in the SL2 quadric.

A surface is cut out by det - 1 together with one extra polynomial f in
the four matrix entries.  After reducing f modulo det - 1 so that no
positive-level initial polynomial is a multiple of det ("det free"), the
positive critical levels are the tropical roots of f and each fiber is
cut out by det (or det - 1 at level zero) and the initial polynomial
of f.  The construction is reversible: given homogeneous blocks and
target roots, exponents realizing them solve a linear recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NonConvergenceError
from .hahn import GR_ONE, GaussianRational, HahnScalar, ONE
from .ideals import ComplexIdealRep, _grlex_coeff_key, _reduce
from .polys import (ComplexPoly, Monomial, ValuedPoly, initial_poly,
                    tropical_roots, trim_to_tropical_support)


def det_valued() -> ValuedPoly:
    """x1*x4 - x2*x3 over the valued field."""
    return ValuedPoly.from_dict(4, {(1, 0, 0, 1): ONE, (0, 1, 1, 0): -ONE})


def det_complex() -> ComplexPoly:
    return ComplexPoly.from_dict(4, {(1, 0, 0, 1): GR_ONE, (0, 1, 1, 0): -GR_ONE})


def det_minus_one() -> ValuedPoly:
    return det_valued() - ValuedPoly.constant(ONE, 4)


def _divide_by_det(rep: ComplexPoly) -> ComplexPoly | None:
    """Quotient of rep by det when the division is exact, else None."""
    det = det_complex()
    lm_det = det.terms[0][0]
    lc_det = det.terms[0][1]
    quo: dict[Monomial, GaussianRational] = {}
    rem = dict(rep.terms)
    while rem:
        u = max(rem, key=_grlex_coeff_key)
        if not all(a >= b for a, b in zip(u, lm_det)):
            return None
        shift = tuple(a - b for a, b in zip(u, lm_det))
        c = rem[u] / lc_det
        quo[shift] = c  # leading monomials strictly decrease, shifts are new
        for v, d in det.terms:
            w = tuple(a + b for a, b in zip(v, shift))
            s = rem.get(w)
            s = (-c * d) if s is None else s - c * d
            if s.is_zero():
                rem.pop(w, None)
            else:
                rem[w] = s
    return ComplexPoly.from_dict(4, quo)


def _positive_probe_points(f: ValuedPoly) -> list[Fraction]:
    """Positive tropical roots of f plus one interior point per interval."""
    roots = [r for r in tropical_roots(trim_to_tropical_support(f)) if r > 0]
    pts: list[Fraction] = []
    prev = Fraction(0)
    for r in roots:
        pts.append(Fraction(prev + r, 2))
        pts.append(r)
        prev = r
    pts.append(prev + 1)
    return pts


def det_free_reduce(f: ValuedPoly, max_steps: int | None = None) -> ValuedPoly:
    """Subtract multiples of det - 1 until no positive-level initial
    polynomial of f lies in the det ideal.  The vanishing set of
    (det - 1, f) is unchanged.

    Works top-down: at the largest offending level, the det cofactor of
    the initial polynomial is lifted to a polynomial whose leading part
    cancels it.
    """
    if f.nvars != 4:
        raise ValueError("surface polynomials live in the four matrix entries")
    if max_steps is None:
        max_steps = 8 * (f.degree() + 2)
    for _ in range(max_steps):
        if f.is_zero():
            raise ValueError("polynomial reduced to zero: it lies in <det - 1>")
        hit = None
        for a in sorted(_positive_probe_points(f), reverse=True):
            value, rep = initial_poly(f, a)
            quo = _divide_by_det(rep)
            if quo is not None:
                hit = (a, value, quo)
                break
        if hit is None:
            return f
        a, value, quo = hit
        lift: dict[Monomial, HahnScalar] = {}
        for u, c in quo.terms:
            exp = value - 2 * a - a * sum(u)
            lift[u] = HahnScalar.term(c, exp)
        g = ValuedPoly.from_dict(4, lift)
        f = f - g * det_minus_one()
    raise NonConvergenceError(
        "det-free reduction exceeded its step bound; f appears to lie in <det - 1>")


def is_det_free(f: ValuedPoly) -> bool:
    if f.is_zero():
        return False
    return all(_divide_by_det(initial_poly(f, a)[1]) is None
               for a in _positive_probe_points(f))


def monomialize_coefficients(f: ValuedPoly) -> ValuedPoly:
    """Trim to the tropical support and truncate every coefficient to its
    leading Hahn monomial; the tropical polynomial and every initial
    polynomial are preserved."""
    g = trim_to_tropical_support(f)
    acc = {}
    for u, c in g.terms:
        lead = c.initial_form()
        acc[u] = HahnScalar.term(lead.coeff, lead.degree)
    return ValuedPoly.from_dict(f.nvars, acc)


@dataclass(frozen=True)
class LayerDecomposition:
    """Levels with their fiber ideals and the homogeneous interval ideals.

    levels[0] is always 0; interval k covers (levels[k], levels[k+1]) with
    the last one unbounded.  degrees[k] is the total degree of the initial
    polynomial on interval k (nondecreasing).  tags collects non-generic
    findings; an empty tuple means the genericity checks passed.
    """

    levels: tuple[Fraction, ...]
    level_ideals: tuple[ComplexIdealRep, ...]
    interval_ideals: tuple[ComplexIdealRep, ...]
    degrees: tuple[int, ...]
    tags: tuple[str, ...] = field(default=())

    def is_generic(self) -> bool:
        return not self.tags

    def to_json(self) -> dict:
        out = {
            "levels": [str(b) for b in self.levels],
            "at_level": [
                {"level": str(b), "ideal": rep.to_json(),
                 "homogeneous": rep.is_homogeneous(), "dim": rep.dimension()}
                for b, rep in zip(self.levels, self.level_ideals)
            ],
            "intervals": [],
            "degrees": list(self.degrees),
            "tags": list(self.tags),
        }
        his = list(self.levels[1:]) + ["inf"]
        for lo, hi, rep, d in zip(self.levels, his, self.interval_ideals, self.degrees):
            out["intervals"].append({
                "from": str(lo), "to": str(hi), "ideal": rep.to_json(),
                "homogeneous": rep.is_homogeneous(), "dim": rep.dimension(),
                "degree": d,
            })
        return out


def layer_decomposition(f: ValuedPoly) -> LayerDecomposition:
    """Stratify the surface cut out by det - 1 and a det-free f.

    Levels are 0 together with the positive tropical roots of f; each
    level carries the inhomogeneous fiber ideal and each open interval
    the homogeneous one.  Dimension-2 checks are recorded as tags rather
    than rejections.
    """
    if f.nvars != 4:
        raise ValueError("surface polynomials live in the four matrix entries")
    ft = trim_to_tropical_support(f)
    roots = [r for r in tropical_roots(ft) if r > 0]
    levels = [Fraction(0)] + roots

    tags: list[str] = []
    level_ideals = []
    for b in levels:
        ambient = det_minus_one() if b == 0 else det_valued()
        _, rep_f = initial_poly(f, b)
        _, rep_amb = initial_poly(ambient, b)
        rep = ComplexIdealRep((rep_amb, rep_f), 4)
        level_ideals.append(rep)
        if rep.is_unit():
            tags.append(f"empty layer at level {b}")
        elif rep.dimension() != 2:
            tags.append(f"non-generic level {b}: dimension {rep.dimension()}")

    interval_ideals = []
    degrees = []
    uppers = roots + [None]
    lo = Fraction(0)
    det_c = det_complex()
    for hi in uppers:
        mid = Fraction(lo + hi, 2) if hi is not None else lo + 1
        _, rep_f = initial_poly(f, mid)
        if not rep_f.is_homogeneous():
            raise NonConvergenceError(
                f"interval sample at {mid} is inhomogeneous; f is not det free "
                "or its tropical roots were not separated")
        rep = ComplexIdealRep((det_c, rep_f), 4)
        interval_ideals.append(rep)
        degrees.append(rep_f.degree())
        if rep.dimension() != 2:
            tags.append(f"non-generic interval above {lo}: dimension {rep.dimension()}")
        lo = hi if hi is not None else lo

    if any(d2 < d1 for d1, d2 in zip(degrees, degrees[1:])):
        tags.append("interval degrees are not nondecreasing")
    return LayerDecomposition(tuple(levels), tuple(level_ideals),
                              tuple(interval_ideals), tuple(degrees), tuple(tags))


def realize_from_layers(blocks: Sequence[ComplexPoly],
                        roots: Sequence[Fraction]) -> ValuedPoly:
    """Assemble sum_i t^(g_i) * blocks[i] whose tropical roots are exactly
    the prescribed ones.

    blocks must be homogeneous of strictly increasing degrees, one more
    block than roots; consecutive exponents satisfy
    g_i - g_{i+1} = roots[i] * (deg_{i+1} - deg_i) with g_0 = 0.
    """
    if len(blocks) != len(roots) + 1:
        raise ValueError("need exactly one more block than target roots")
    degs = []
    for k, b in enumerate(blocks):
        if b.is_zero() or not b.is_homogeneous():
            raise ValueError(f"block {k} must be nonzero homogeneous")
        degs.append(b.degree())
    if any(d2 <= d1 for d1, d2 in zip(degs, degs[1:])):
        raise ValueError("block degrees must be strictly increasing")
    roots = [Fraction(r) for r in roots]
    if any(r2 <= r1 for r1, r2 in zip(roots, roots[1:])):
        raise ValueError("target roots must be strictly increasing")
    gammas = [Fraction(0)]
    for k, r in enumerate(roots):
        gammas.append(gammas[-1] - r * (degs[k + 1] - degs[k]))
    nvars = blocks[0].nvars
    acc: dict[Monomial, HahnScalar] = {}
    for g, b in zip(gammas, blocks):
        for u, c in b.terms:
            prev = acc.get(u)
            term = HahnScalar.term(c, g)
            acc[u] = term if prev is None else prev + term
    return ValuedPoly.from_dict(nvars, acc)

"""Lifting a residue root of a hypersurface to a truncated Hahn solution.

Given a univariate polynomial f over the valued field, a level alpha and a
simple root theta of the residue polynomial of f at alpha, Newton iteration
in exact field arithmetic produces z with initial form (alpha, theta) whose
residual valuation val(f(z)) drops below val_alpha(f) - p.  The result is
truncated to the finite exponent lattice spanned by f and alpha.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import RamifiedRootError
from .hahn import NEG_INF, GaussianRational, HahnPoly, HahnScalar
from .polys import ValuedPoly, initial_poly


def _lattice_step(f: ValuedPoly, alpha: Fraction) -> Fraction:
    n = alpha.denominator
    for _, c in f.terms:
        for g, _ in list(c.num.terms) + list(c.den.terms):
            d = g.denominator
            n = n * d // gcd(n, d)
    return Fraction(1, n)


def truncate_scalar(x: HahnScalar, cutoff: Fraction) -> HahnScalar:
    """Expand num/den as a Hahn series, keeping exponents strictly above cutoff."""
    num, den = x.num, x.den
    if num.is_zero():
        return x
    kept: list[tuple[Fraction, GaussianRational]] = []
    rem = num
    dg, dc = den.leading()
    while not rem.is_zero():
        g, c = rem.leading()
        q_exp = g - dg
        if q_exp <= cutoff:
            break
        q_coeff = c / dc
        kept.append((q_exp, q_coeff))
        rem = rem - den.scale(q_exp, q_coeff)
    return HahnScalar(HahnPoly.from_terms(kept))


def lift_hypersurface_root(f: ValuedPoly, alpha, theta: GaussianRational,
                           precision: int) -> HahnScalar:
    """Newton-lift a simple residue root to a truncated solution of f.

    Returns z with vector initial form (alpha, theta) and
    val(f(z)) <= val_alpha(f) - precision.
    """
    if f.nvars != 1:
        raise ValueError("lifting expects a univariate polynomial")
    if f.is_zero():
        raise ValueError("cannot lift a root of the zero polynomial")
    if precision < 1:
        raise ValueError("precision must be at least 1")
    if theta.is_zero():
        raise ValueError("theta must be nonzero")
    alpha = Fraction(alpha)
    value, rep = initial_poly(f, alpha)
    if not rep.evaluate([theta]).is_zero():
        raise ValueError(f"{theta} is not a root of the residue polynomial {rep}")
    if rep.derivative().evaluate([theta]).is_zero():
        raise RamifiedRootError(
            f"{theta} is a multiple root of {rep}; only simple roots are lifted")

    fprime = f.derivative()
    target = value - precision
    z = HahnScalar.term(theta, alpha)
    res = f.evaluate([z])
    prev = res.valuation()
    if not (prev < value):
        raise ValueError("initial residual did not drop; inconsistent input")
    steps = 0
    cap = 8 * precision + 64
    while prev != NEG_INF and prev > target:
        steps += 1
        if steps > cap:
            raise RamifiedRootError("Newton iteration stalled; root appears ramified")
        z = z - res / fprime.evaluate([z])
        res = f.evaluate([z])
        cur = res.valuation()
        if not (cur == NEG_INF or cur < prev):
            raise RamifiedRootError("residual valuation failed to decrease strictly")
        prev = cur

    # truncate to the lattice; re-extend if the tail mattered at the boundary
    step = _lattice_step(f, alpha)
    cutoff = alpha - precision
    for _ in range(8):
        zt = truncate_scalar(z, cutoff)
        r = f.evaluate([zt]).valuation()
        if r == NEG_INF or r <= target:
            return zt
        cutoff -= step
    return z


def verify_point(fs, z, bound) -> bool:
    """Check val(f(z)) <= bound for every polynomial in fs (bound may be -inf)."""
    for f in fs:
        v = f.evaluate(list(z)).valuation()
        if bound == NEG_INF:
            if v != NEG_INF:
                return False
        elif v > bound:
            return False
    return True

"""Ideals over the valued field: weight Groebner bases, initial ideals,
ideal comparison over the residue field, and the critical-level search.

One Buchberger engine serves both coefficient fields.  Over the valued
field the leading term of a polynomial is the term with the largest
weighted valuation (ties broken by graded lex, variables in declaration
order); over the residue field the order is plain graded lex.  Division
is exact in both cases since the coefficients are field elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

from .errors import NonConvergenceError
from .hahn import (GR_ONE, GR_ZERO, GaussianRational, HahnPoly, HahnScalar,
                   NEG_INF, poly_exact_div, poly_gcd, rational_content)
from .hahn import _HP_ONE as _HP_UNIT
from .polys import (ComplexPoly, Monomial, ValuedPoly, _grlex_key,
                    dehomogenize, diagonal_weight, homogenize, initial_poly)

_REDUCTION_CAP = 50_000
_PAIR_CAP = 20_000
_BASIS_CAP = 400


# ---------------------------------------------------------------------------
# generic Buchberger engine on dict polynomials

def _leading(p: dict, key) -> tuple[Monomial, object]:
    u = max(p, key=lambda m: key(m, p[m]))
    return u, p[u]


def _divides(v: Monomial, u: Monomial) -> bool:
    return all(a <= b for a, b in zip(v, u))


def _sub_scaled(f: dict, g: dict, coeff, shift: Monomial) -> dict:
    out = dict(f)
    for u, c in g.items():
        w = tuple(a + b for a, b in zip(u, shift))
        s = out.get(w)
        s = (-coeff * c) if s is None else (s - coeff * c)
        if s.is_zero():
            out.pop(w, None)
        else:
            out[w] = s
    return out


def _reduce(f: dict, basis: list[tuple[Monomial, dict]], key) -> dict:
    """Full normal form of f against the basis (leading monomials cached)."""
    rem: dict = {}
    steps = 0
    while f:
        steps += 1
        if steps > _REDUCTION_CAP:
            raise NonConvergenceError("division did not terminate within the cap")
        u, c = _leading(f, key)
        for lm, g in basis:
            if _divides(lm, u):
                shift = tuple(a - b for a, b in zip(u, lm))
                f = _sub_scaled(f, g, c / g[lm], shift)
                break
        else:
            s = rem.get(u)
            s = c if s is None else s + c
            if s.is_zero():
                rem.pop(u, None)
            else:
                rem[u] = s
            del f[u]
    return rem


def _monic(p: dict, key) -> dict:
    _, c = _leading(p, key)
    return {u: v / c for u, v in p.items()}


def _buchberger(gens: Sequence[dict], key) -> list[dict]:
    basis: list[tuple[Monomial, dict]] = []
    for g in gens:
        if g:
            g = _monic(g, key)
            basis.append((_leading(g, key)[0], g))
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    processed = 0
    while pairs:
        pairs.sort(key=lambda ij: _grlex_key(
            tuple(max(a, b) for a, b in zip(basis[ij[0]][0], basis[ij[1]][0]))))
        i, j = pairs.pop(0)
        processed += 1
        if processed > _PAIR_CAP:
            raise NonConvergenceError("Buchberger pair queue exceeded the cap")
        (ui, gi), (uj, gj) = basis[i], basis[j]
        w = tuple(max(a, b) for a, b in zip(ui, uj))
        si = tuple(a - b for a, b in zip(w, ui))
        sj = tuple(a - b for a, b in zip(w, uj))
        shifted = {tuple(a + b for a, b in zip(u, si)): v for u, v in gi.items()}
        s = _sub_scaled(shifted, gj, gi[ui] / gj[uj], sj)
        h = _reduce(s, basis, key)
        if h:
            h = _monic(h, key)
            lm = _leading(h, key)[0]
            k = len(basis)
            basis.append((lm, h))
            if k + 1 > _BASIS_CAP:
                raise NonConvergenceError("Groebner basis exceeded the size cap")
            pairs.extend((i2, k) for i2 in range(k))
    return _interreduce([g for _, g in basis], key)


def _interreduce(basis: list[dict], key) -> list[dict]:
    # drop elements whose leading monomial is divisible by another's
    with_lm = [(_leading(g, key)[0], g) for g in basis]
    minimal = []
    for idx, (lm, g) in enumerate(with_lm):
        if any(_divides(lm2, lm) for k2, (lm2, _) in enumerate(with_lm)
               if k2 != idx and (lm2 != lm or k2 < idx)):
            continue
        minimal.append((lm, g))
    # tail-reduce each against the others
    out = []
    for idx, (lm, g) in enumerate(minimal):
        others = [minimal[k] for k in range(len(minimal)) if k != idx]
        r = _reduce(dict(g), others, key)
        if r:
            out.append(_monic(r, key))
    out.sort(key=lambda p: key(*_leading(p, key)), reverse=True)
    return out


# ---------------------------------------------------------------------------
# valued-field side
#
# Groebner computations over the valued field run in the classical
# polynomial ring Q(i)[s, x0..xn], where s stands for t^(1/N) and N clears
# every exponent denominator of the input.  Each term c * t^(m/N) * x^u
# becomes the monomial s^m x^u, ordered by its weighted value
# m/N + sum(u_i * alpha_i) with graded-lex tie-breaking on the x-part.
# Naive division directly over the field can cycle through monomials with
# ever-decreasing valuations; here the s-exponent is bounded below by 0,
# so on x-homogeneous input every division terminates and the classical
# Buchberger theory applies (shifting all x-weights by a large constant
# makes the order global without changing any comparison between terms of
# an x-homogeneous polynomial).

def _sx_key(n_lat: int, gamma: tuple[Fraction, ...]):
    def key(v: Monomial, _c=None):
        m, u = v[0], v[1:]
        return (Fraction(m, n_lat) + sum((Fraction(e) * g for e, g in zip(u, gamma)),
                                         Fraction(0)),
                _grlex_key(u))
    return key


def _ideal_lattice(gens: Sequence[ValuedPoly]) -> int:
    from math import gcd as _gcd
    n = 1
    for g in gens:
        for _, c in g.terms:
            for gg, _cc in list(c.num.terms) + list(c.den.terms):
                d = gg.denominator
                n = n * d // _gcd(n, d)
    return n


def _to_sx(g: ValuedPoly, n_lat: int) -> dict[Monomial, GaussianRational]:
    """Rewrite a polynomial as an element of Q(i)[s, x], scaled by the unit
    t^(-shift) so that every s-exponent is a nonnegative integer."""
    cleared = _clear_denominators(g)
    shift = min(c.min_exponent() for c in cleared.values())
    out: dict[Monomial, GaussianRational] = {}
    for u, poly in cleared.items():
        for e, c in poly.terms:
            out[(int((e - shift) * n_lat),) + u] = c
    return out


def _from_sx(p: dict[Monomial, GaussianRational], nvars: int,
             n_lat: int) -> ValuedPoly:
    acc: dict[Monomial, list] = {}
    for v, c in p.items():
        acc.setdefault(v[1:], []).append((Fraction(v[0], n_lat), c))
    return ValuedPoly.from_dict(
        nvars, {u: HahnScalar(HahnPoly.from_terms(pairs)) for u, pairs in acc.items()})


def _clear_denominators(p: ValuedPoly) -> dict[Monomial, HahnPoly]:
    """Scale a polynomial by a unit of the field so every coefficient is a
    plain Hahn polynomial."""
    dens = [c.den for _, c in p.terms if c.den != _HP_UNIT]
    out: dict[Monomial, HahnPoly] = {}
    for u, c in p.terms:
        acc = c.num
        skipped = False  # cancel c.den against exactly one matching factor
        for d in dens:
            if not skipped and d == c.den:
                skipped = True
            else:
                acc = acc * d
        out[u] = acc
    return out


def sx_groebner(gens: Sequence[ValuedPoly], alpha,
                nvars: int) -> tuple[list[dict], int]:
    """Classical Groebner basis of the cleared generators in Q(i)[s, x],
    with the first x-variable at weight 0 and the rest at alpha."""
    n_lat = _ideal_lattice(gens)
    gamma = (Fraction(0),) + diagonal_weight(alpha, nvars - 1)
    key = _sx_key(n_lat, gamma)
    basis = _buchberger([_to_sx(g, n_lat) for g in gens], key)
    return basis, n_lat


@dataclass(frozen=True, slots=True)
class ValuedIdeal:
    """Finitely generated ideal of the polynomial ring over the valued field."""

    gens: tuple[ValuedPoly, ...]
    nvars: int

    def __post_init__(self):
        if not self.gens:
            raise ValueError("ideal needs at least one generator")
        for g in self.gens:
            if g.is_zero():
                raise ValueError("zero generator not allowed")
            if g.nvars != self.nvars:
                raise ValueError("generator in the wrong ring")

    @staticmethod
    def of(*gens: ValuedPoly) -> "ValuedIdeal":
        return ValuedIdeal(tuple(gens), gens[0].nvars)


def weight_groebner(ideal: ValuedIdeal, alpha) -> tuple[ValuedPoly, ...]:
    """Groebner basis for the valuation-weighted order at level alpha.

    Generators must be homogeneous; the first variable is treated as the
    degree-completing one and carries weight 0, all others carry alpha.
    Leading terms maximize the weighted valuation with graded-lex ties;
    every S-polynomial reduces to zero (certified in the s-cleared ring).
    Elements are scaled by units so coefficients are t-polynomials.
    """
    for g in ideal.gens:
        if not g.is_homogeneous():
            raise ValueError("weight Groebner bases require homogeneous generators")
    basis, n_lat = sx_groebner(ideal.gens, alpha, ideal.nvars)
    return tuple(_from_sx(b, ideal.nvars, n_lat) for b in basis)


@lru_cache(maxsize=8192)
def _weighted_basis(ideal: ValuedIdeal, alpha: Fraction) -> tuple[ValuedPoly, ...]:
    """Dehomogenized weighted basis: homogenize, run Buchberger, set x0 = 1."""
    hom = ValuedIdeal(tuple(homogenize(g) for g in ideal.gens), ideal.nvars + 1)
    return tuple(dehomogenize(g) for g in weight_groebner(hom, alpha))


@lru_cache(maxsize=8192)
def _initial_ideal_cached(ideal: ValuedIdeal, alpha: Fraction) -> "ComplexIdealRep":
    gens = tuple(initial_poly(g, alpha)[1] for g in _weighted_basis(ideal, alpha))
    return ComplexIdealRep(gens, ideal.nvars)


def initial_ideal(ideal: ValuedIdeal, alpha) -> "ComplexIdealRep":
    """The ideal of initial polynomials at the diagonal level alpha."""
    return _initial_ideal_cached(ideal, Fraction(alpha))


# ---------------------------------------------------------------------------
# residue-field side

def _grlex_coeff_key(u: Monomial, _c=None):
    return _grlex_key(u)


class ComplexIdealRep:
    """Ideal over the residue field with a cached reduced graded-lex basis.

    Equality of ideals is equality of reduced bases; membership is exact
    division by the reduced basis.
    """

    __slots__ = ("gens", "nvars", "_reduced")

    def __init__(self, gens: Sequence[ComplexPoly], nvars: int):
        self.gens = tuple(g for g in gens if not g.is_zero())
        self.nvars = nvars
        self._reduced = None

    def reduced_basis(self) -> tuple[ComplexPoly, ...]:
        if self._reduced is None:
            if not self.gens:
                self._reduced = ()
            else:
                basis = _buchberger([dict(g.terms) for g in self.gens],
                                    _grlex_coeff_key)
                self._reduced = tuple(
                    ComplexPoly.from_dict(self.nvars, b) for b in basis)
        return self._reduced

    def is_zero(self) -> bool:
        return not self.reduced_basis()

    def is_unit(self) -> bool:
        rb = self.reduced_basis()
        return len(rb) == 1 and rb[0].degree() == 0

    def contains(self, f: ComplexPoly) -> bool:
        if f.is_zero():
            return True
        basis = [(max(g.terms, key=lambda t: _grlex_key(t[0]))[0], dict(g.terms))
                 for g in self.reduced_basis()]
        if not basis:
            return False
        return not _reduce(dict(f.terms), basis, _grlex_coeff_key)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.reduced_basis())

    def leading_monomials(self) -> tuple[Monomial, ...]:
        return tuple(max(g.terms, key=lambda t: _grlex_key(t[0]))[0]
                     for g in self.reduced_basis())

    def dimension(self):
        """Krull dimension from the staircase; None for the unit ideal."""
        if self.is_unit():
            return None
        if self.is_zero():
            return self.nvars
        lms = [frozenset(i for i, e in enumerate(u) if e)
               for u in self.leading_monomials()]
        best = 0
        for size in range(self.nvars, 0, -1):
            for subset in combinations(range(self.nvars), size):
                s = frozenset(subset)
                if all(not lm <= s for lm in lms):
                    return size
        return best

    def radical_contains(self, f: ComplexPoly) -> bool:
        """Membership in the radical via the extra-variable trick."""
        if self.contains(f):
            return True
        n = self.nvars

        def extend(p: ComplexPoly) -> dict:
            return {u + (0,): c for u, c in p.terms}

        gens = [extend(g) for g in self.gens]
        aux = {u + (1,): c for u, c in f.terms}  # y * f - 1
        one = (0,) * (n + 1)
        aux[one] = aux.get(one, GR_ZERO) - GR_ONE
        gens.append({u: c for u, c in aux.items() if not c.is_zero()})
        basis = _buchberger(gens, _grlex_coeff_key)
        return any(len(b) == 1 and next(iter(b)) == one for b in basis)

    def variety_within_origin(self) -> bool:
        """True when the vanishing set contains no point besides possibly 0."""
        if self.is_unit():
            return True
        return all(self.radical_contains(ComplexPoly.variable(i, self.nvars))
                   for i in range(self.nvars))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexIdealRep):
            return NotImplemented
        return self.nvars == other.nvars and self.reduced_basis() == other.reduced_basis()

    def __hash__(self) -> int:
        return hash((self.nvars, self.reduced_basis()))

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.reduced_basis()) + ">"

    __repr__ = __str__

    def to_json(self) -> list[str]:
        return [str(g) for g in self.reduced_basis()]


def ideal_equal(a: ComplexIdealRep, b: ComplexIdealRep) -> bool:
    if a.nvars != b.nvars:
        raise ValueError("ideals live in different rings")
    return a == b


def is_homogeneous(a: ComplexIdealRep) -> bool:
    return a.is_homogeneous()


# ---------------------------------------------------------------------------
# critical levels

@dataclass(frozen=True, slots=True)
class LevelData:
    level: Fraction
    ideal: ComplexIdealRep
    homogeneous: bool
    dim: int | None


@dataclass(frozen=True, slots=True)
class IntervalData:
    lo: Fraction | float  # NEG_INF on the leftmost interval
    hi: Fraction | float  # +inf on the rightmost
    ideal: ComplexIdealRep
    homogeneous: bool
    dim: int | None


@dataclass(frozen=True, slots=True)
class CriticalLevelReport:
    levels: tuple[Fraction, ...]
    at_level: tuple[LevelData, ...]
    intervals: tuple[IntervalData, ...]

    def interval_containing(self, alpha: Fraction) -> IntervalData:
        for iv in self.intervals:
            if (iv.lo == NEG_INF or iv.lo < alpha) and (iv.hi == float("inf") or alpha < iv.hi):
                return iv
        raise ValueError(f"{alpha} is a critical level, not interior to an interval")

    def to_json(self) -> dict:
        def fmt(x):
            if x == NEG_INF:
                return "-inf"
            if x == float("inf"):
                return "inf"
            return str(x)

        return {
            "levels": [str(b) for b in self.levels],
            "at_level": [
                {"level": str(l.level), "ideal": l.ideal.to_json(),
                 "homogeneous": l.homogeneous, "dim": l.dim}
                for l in self.at_level
            ],
            "intervals": [
                {"from": fmt(iv.lo), "to": fmt(iv.hi), "ideal": iv.ideal.to_json(),
                 "homogeneous": iv.homogeneous, "dim": iv.dim}
                for iv in self.intervals
            ],
        }


def level_candidates(f: ValuedPoly) -> set[Fraction]:
    """Levels at which two terms of different total degree can tie."""
    out: set[Fraction] = set()
    terms = [(sum(u), c.valuation()) for u, c in f.terms]
    for (d1, v1), (d2, v2) in combinations(terms, 2):
        if d1 != d2:
            out.add(Fraction(v1 - v2, d2 - d1))
    return out


def _probe_points(cands: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Candidate points plus one interior sample per open interval."""
    if not cands:
        return [], [Fraction(0)]
    mids = [cands[0] - 1]
    for a, b in zip(cands, cands[1:]):
        mids.append(Fraction(a + b, 2))
    mids.append(cands[-1] + 1)
    return cands, mids


def critical_levels(ideal: ValuedIdeal, max_rounds: int = 30) -> CriticalLevelReport:
    """Locate the finitely many levels where the initial ideal changes.

    Iterative refinement: candidate tie levels are harvested from the
    weighted bases computed at every probe point (candidates plus interval
    midpoints); newly revealed candidates trigger another round.  At the
    fixpoint, candidates whose ideal agrees with both neighboring interval
    ideals are discarded, and the surviving levels are reported together
    with per-interval data.
    """
    cands: set[Fraction] = set()
    for g in ideal.gens:
        cands |= level_candidates(g)

    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise NonConvergenceError(
                "critical-level refinement did not reach a fixpoint",
                partial=sorted(cands))
        ordered = sorted(cands)
        points, mids = _probe_points(ordered)
        new: set[Fraction] = set()
        for a in points + mids:
            for g in _weighted_basis(ideal, Fraction(a)):
                new |= level_candidates(g)
        fresh = new - cands
        if fresh:
            cands |= fresh
            continue
        # interval samples must give homogeneous ideals; a failure means the
        # sample accidentally sits on an undiscovered level
        bad = [m for m in mids if not initial_ideal(ideal, m).is_homogeneous()]
        if bad:
            cands |= set(bad)
            continue
        break

    ordered = sorted(cands)
    points, mids = _probe_points(ordered)
    ideals_at = {a: initial_ideal(ideal, a) for a in points + mids}

    levels: list[Fraction] = []
    for i, b in enumerate(ordered):
        left, right = ideals_at[mids[i]], ideals_at[mids[i + 1]]
        here = ideals_at[b]
        if not (left == here == right):
            levels.append(b)

    # merge the open intervals between surviving levels
    intervals: list[IntervalData] = []
    cut_mids: list[Fraction] = []
    if not levels:
        cut_mids = [mids[0]] if mids else [Fraction(0)]
    else:
        idx = [ordered.index(b) for b in levels]
        cut_mids.append(mids[idx[0]])
        for a, b in zip(idx, idx[1:]):
            cut_mids.append(mids[a + 1])
        cut_mids.append(mids[idx[-1] + 1])
        # pruned candidates inside a merged interval must agree with it
        for k, m in enumerate(cut_mids):
            lo = NEG_INF if k == 0 else levels[k - 1]
            hi = float("inf") if k == len(cut_mids) - 1 else levels[k]
            for c in ordered:
                if c in levels:
                    continue
                if (lo == NEG_INF or lo < c) and (hi == float("inf") or c < hi):
                    if ideals_at.get(c, initial_ideal(ideal, c)) != ideals_at[m]:
                        raise NonConvergenceError(
                            "inconsistent ideal inside a merged interval",
                            partial=sorted(levels))

    bounds = [NEG_INF] + list(levels) + [float("inf")]
    for k, m in enumerate(cut_mids):
        rep = ideals_at[m]
        intervals.append(IntervalData(bounds[k], bounds[k + 1], rep,
                                      rep.is_homogeneous(), rep.dimension()))

    at_level = tuple(
        LevelData(b, ideals_at[b], ideals_at[b].is_homogeneous(),
                  ideals_at[b].dimension())
        for b in levels
    )
    return CriticalLevelReport(tuple(levels), at_level, tuple(intervals))


@dataclass(frozen=True, slots=True)
class FiberReport:
    ideal: ComplexIdealRep
    homogeneous: bool
    dimension: int | None  # None means the fiber (away from 0) is empty

    def to_json(self) -> dict:
        return {"ideal": self.ideal.to_json(), "homogeneous": self.homogeneous,
                "dim": self.dimension}


def fiber_report(ideal: ValuedIdeal, alpha) -> FiberReport:
    """Initial ideal at alpha with homogeneity flag and fiber dimension.

    The dimension is None when the vanishing set minus the origin is empty
    (unit ideal, or a variety contained in the origin).
    """
    rep = initial_ideal(ideal, alpha)
    hom = rep.is_homogeneous()
    if rep.variety_within_origin():
        return FiberReport(rep, hom, None)
    return FiberReport(rep, hom, rep.dimension())

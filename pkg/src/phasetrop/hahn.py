"""Exact arithmetic in a valued field of finite-support Hahn series.

Scalars are fractions of "Hahn polynomials": finite sums ``sum c_g * t^g``
with Gaussian-rational coefficients ``c_g`` and rational exponents ``g``.
The valuation of a nonzero Hahn polynomial is the LARGEST exponent in its
support, so ``val(t) = 1`` and ``val(t^-1) = -1``, and it extends to
fractions by ``val(a/b) = val(a) - val(b)``.

Note the sign convention: the bounded elements are those with ``val <= 0``
(t^-1 is small, t is large).  This is the opposite of the usual t-adic
convention, and every comparison in this package is written against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import exp, gcd as _int_gcd
from typing import Iterable

NEG_INF = float("-inf")

_FR_ZERO = Fraction(0)
_FR_ONE = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """An element of Q(i): exact stand-in for a complex coefficient."""

    re: Fraction = _FR_ZERO
    im: Fraction = _FR_ZERO

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def inverse(self) -> "GaussianRational":
        return GR_ONE / self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}*i"
        im = "+i" if self.im == 1 else ("-i" if self.im == -1 else
                                        (f"+{self.im}*i" if self.im > 0 else f"{self.im}*i"))
        return f"({self.re}{im})"

    __repr__ = __str__


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(_FR_ONE)
GR_I = GaussianRational(_FR_ZERO, _FR_ONE)


def gaussian(re, im=0) -> GaussianRational:
    return GaussianRational(_as_fraction(re), _as_fraction(im))


def _is_negativeish(c: GaussianRational) -> bool:
    # display convention only: decides "+ term" versus "- term"
    return c.re < 0 or (c.re == 0 and c.im < 0)


def _exponent_text(g: Fraction) -> str:
    if g == 0:
        return ""
    if g == 1:
        return "t"
    if g.denominator == 1:
        return f"t^{g}"
    return f"t^({g})"


def _term_text(g: Fraction, c: GaussianRational) -> str:
    tp = _exponent_text(g)
    if not tp:
        return str(c)
    if c == GR_ONE:
        return tp
    if c == -GR_ONE:
        return f"-{tp}"
    return f"{str(c)}*{tp}"


@dataclass(frozen=True, slots=True)
class HahnPoly:
    """Finite-support Hahn polynomial, terms sorted by descending exponent."""

    terms: tuple[tuple[Fraction, GaussianRational], ...] = ()

    @staticmethod
    def from_terms(pairs: Iterable[tuple[Fraction, GaussianRational]]) -> "HahnPoly":
        acc: dict[Fraction, GaussianRational] = {}
        for g, c in pairs:
            g = _as_fraction(g)
            s = acc.get(g, GR_ZERO) + c
            if s.is_zero():
                acc.pop(g, None)
            else:
                acc[g] = s
        return HahnPoly(tuple(sorted(acc.items(), key=lambda kv: kv[0], reverse=True)))

    def is_zero(self) -> bool:
        return not self.terms

    def leading(self) -> tuple[Fraction, GaussianRational]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0]

    def valuation(self):
        return self.terms[0][0] if self.terms else NEG_INF

    def min_exponent(self) -> Fraction:
        return self.terms[-1][0]

    def __add__(self, other: "HahnPoly") -> "HahnPoly":
        return HahnPoly.from_terms(list(self.terms) + list(other.terms))

    def __neg__(self) -> "HahnPoly":
        return HahnPoly(tuple((g, -c) for g, c in self.terms))

    def __sub__(self, other: "HahnPoly") -> "HahnPoly":
        return self + (-other)

    def __mul__(self, other: "HahnPoly") -> "HahnPoly":
        acc: dict[Fraction, GaussianRational] = {}
        for g1, c1 in self.terms:
            for g2, c2 in other.terms:
                g = g1 + g2
                s = acc.get(g, GR_ZERO) + c1 * c2
                if s.is_zero():
                    acc.pop(g, None)
                else:
                    acc[g] = s
        return HahnPoly(tuple(sorted(acc.items(), key=lambda kv: kv[0], reverse=True)))

    def scale(self, exponent: Fraction, coeff: GaussianRational) -> "HahnPoly":
        """Multiply by the monomial coeff * t^exponent (a unit)."""
        if coeff.is_zero():
            return HahnPoly()
        return HahnPoly(tuple((g + exponent, c * coeff) for g, c in self.terms))

    def evaluate(self, s: float) -> complex:
        return sum((c.to_complex() * exp(s * float(g)) for g, c in self.terms), 0j)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for k, (g, c) in enumerate(self.terms):
            if k == 0:
                out.append(_term_text(g, c))
            elif _is_negativeish(c):
                out.append(" - " + _term_text(g, -c))
            else:
                out.append(" + " + _term_text(g, c))
        return "".join(out)

    __repr__ = __str__


_HP_ZERO = HahnPoly()
_HP_ONE = HahnPoly(((_FR_ZERO, GR_ONE),))


# ---------------------------------------------------------------------------
# gcd of Hahn polynomials on a common exponent lattice
#
# Exponents of a finite-support element lie in (1/N)Z; after shifting by the
# minimum exponent both operands become ordinary polynomials in s = t^(1/N).
# The gcd runs as a primitive polynomial remainder sequence over the Gaussian
# integers: naive Euclid over Q(i) blows coefficient sizes up exponentially,
# while content-normalized pseudo-division keeps them tame.

def _divmod_int(a: dict[int, GaussianRational], b: dict[int, GaussianRational]):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = max(b)
    lb = b[db]
    q: dict[int, GaussianRational] = {}
    r = dict(a)
    while r:
        dr = max(r)
        if dr < db:
            break
        c = r[dr] / lb
        q[dr - db] = c
        for e, v in b.items():
            k = dr - db + e
            s = r.get(k, GR_ZERO) - c * v
            if s.is_zero():
                r.pop(k, None)
            else:
                r[k] = s
    return q, r


# Gaussian integers as plain (re, im) int pairs.

def _gi_mul(z, w):
    return (z[0] * w[0] - z[1] * w[1], z[0] * w[1] + z[1] * w[0])


def _gi_sub(z, w):
    return (z[0] - w[0], z[1] - w[1])


def _gi_norm(z):
    return z[0] * z[0] + z[1] * z[1]


def _gi_divmod(z, w):
    """Nearest-lattice-point division: remainder norm <= norm(w)/2."""
    n = _gi_norm(w)
    p = _gi_mul(z, (w[0], -w[1]))
    q = ((2 * p[0] + n) // (2 * n), (2 * p[1] + n) // (2 * n))
    return q, _gi_sub(z, _gi_mul(q, w))


def _gi_gcd(z, w):
    while w != (0, 0):
        _, r = _gi_divmod(z, w)
        z, w = w, r
    return z


def _gi_exact_div(z, w):
    n = _gi_norm(w)
    p = _gi_mul(z, (w[0], -w[1]))
    if p[0] % n or p[1] % n:
        raise ArithmeticError("inexact Gaussian division")
    return (p[0] // n, p[1] // n)


def _to_gauss(a: dict[int, GaussianRational]) -> dict[int, tuple[int, int]]:
    lcm = 1
    for c in a.values():
        for d in (c.re.denominator, c.im.denominator):
            lcm = lcm * d // _int_gcd(lcm, d)
    return {e: (int(c.re * lcm), int(c.im * lcm)) for e, c in a.items()}


def _primitive(a: dict[int, tuple[int, int]]) -> dict[int, tuple[int, int]]:
    g = (0, 0)
    for c in a.values():
        g = _gi_gcd(g, c)
        if _gi_norm(g) == 1:
            return a
    return {e: _gi_exact_div(c, g) for e, c in a.items()}


def _gi_content(a: dict[int, tuple[int, int]]) -> tuple[int, int]:
    g = (0, 0)
    for c in a.values():
        g = _gi_gcd(g, c)
        if _gi_norm(g) == 1:
            break
    return g


def _strip_content(a: dict[int, tuple[int, int]]) -> dict[int, tuple[int, int]]:
    g = _gi_content(a)
    if _gi_norm(g) <= 1:
        return a
    return {e: _gi_exact_div(c, g) for e, c in a.items()}


def _pseudo_rem_primitive(a, b):
    """Remainder of a modulo b in Z[i][s], content-stripped at every
    elimination step so coefficient sizes stay near the input sizes."""
    db = max(b)
    while a:
        da = max(a)
        if da < db:
            break
        lb = b[db]
        la = a.pop(da)
        nxt = {e: _gi_mul(lb, c) for e, c in a.items()}
        for e, c in b.items():
            if e == db:
                continue
            k = da - db + e
            s = _gi_sub(nxt.get(k, (0, 0)), _gi_mul(la, c))
            if s == (0, 0):
                nxt.pop(k, None)
            else:
                nxt[k] = s
        a = _strip_content(nxt)
    return a


def _gcd_int(a: dict[int, GaussianRational], b: dict[int, GaussianRational]):
    """Monic gcd in Q(i)[s] via a fully content-stripped remainder sequence."""
    ga = _strip_content(_to_gauss(a))
    gb = _strip_content(_to_gauss(b))
    while gb:
        ga, gb = gb, _pseudo_rem_primitive(ga, gb)
    lead = ga[max(ga)]
    lead_gr = GaussianRational(Fraction(lead[0]), Fraction(lead[1]))
    return {e: GaussianRational(Fraction(c[0]), Fraction(c[1])) / lead_gr
            for e, c in ga.items()}


def rational_content(polys: Iterable[HahnPoly]) -> GaussianRational:
    """Gaussian-rational c such that dividing every coefficient of every
    polynomial by c yields Gaussian integers with joint content 1."""
    lcm = 1
    coeffs: list[GaussianRational] = []
    for p in polys:
        for _, c in p.terms:
            coeffs.append(c)
            for d in (c.re.denominator, c.im.denominator):
                lcm = lcm * d // _int_gcd(lcm, d)
    g = (0, 0)
    for c in coeffs:
        g = _gi_gcd(g, (int(c.re * lcm), int(c.im * lcm)))
        if _gi_norm(g) == 1:
            break
    if g == (0, 0):
        return GR_ONE
    return GaussianRational(Fraction(g[0], lcm), Fraction(g[1], lcm))


# -- gcd/exact division directly on Hahn polynomials (shared lattice) -------

def poly_gcd(polys: Iterable[HahnPoly]) -> HahnPoly:
    """gcd of finitely many Hahn polynomials, up to a unit monomial."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return _HP_ZERO
    n_lat = _lattice_denominator(*polys)
    shift = min(p.min_exponent() for p in polys)
    dicts = [{int((g - shift) * n_lat): c for g, c in p.terms} for p in polys]
    g = dicts[0]
    for d in dicts[1:]:
        if len(g) == 1:  # a single term is a unit times a monomial
            break
        g = _gcd_int(g, d)
    return HahnPoly.from_terms((Fraction(e, n_lat) + shift, c) for e, c in g.items())


def poly_exact_div(a: HahnPoly, g: HahnPoly) -> HahnPoly:
    """Divide a by a known factor g (up to unit monomials)."""
    if a.is_zero():
        return _HP_ZERO
    if len(g.terms) == 1:
        ge, gc = g.leading()
        return a.scale(-ge, gc.inverse())
    n_lat = _lattice_denominator(a, g)
    sa, sg = a.min_exponent(), g.min_exponent()
    da = {int((e - sa) * n_lat): c for e, c in a.terms}
    dg = {int((e - sg) * n_lat): c for e, c in g.terms}
    q, r = _divmod_int(da, dg)
    if r:
        raise ArithmeticError("inexact Hahn polynomial division")
    return HahnPoly.from_terms(
        (Fraction(e, n_lat) + sa - sg, c) for e, c in q.items())


def _lattice_denominator(*polys: HahnPoly) -> int:
    n = 1
    for p in polys:
        for g, _ in p.terms:
            d = g.denominator
            n = n * d // _int_gcd(n, d)
    return n


def _normalize_fraction(num: HahnPoly, den: HahnPoly) -> tuple[HahnPoly, HahnPoly]:
    if den.is_zero():
        raise ZeroDivisionError("Hahn scalar with zero denominator")
    if num.is_zero():
        return _HP_ZERO, _HP_ONE
    if len(den.terms) == 1:
        g, c = den.leading()
        return num.scale(-g, c.inverse()), _HP_ONE
    if len(num.terms) > 1:  # a one-term side makes the gcd a unit monomial
        n_lat = _lattice_denominator(num, den)
        shift = min(num.min_exponent(), den.min_exponent())
        a = {int((g - shift) * n_lat): c for g, c in num.terms}
        b = {int((g - shift) * n_lat): c for g, c in den.terms}
        g = _gcd_int(a, b)
        if max(g) > 0 or len(g) > 1:
            a = _divmod_int(a, g)[0]
            b = _divmod_int(b, g)[0]
            num = HahnPoly.from_terms(
                (Fraction(e, n_lat) + shift, c) for e, c in a.items())
            den = HahnPoly.from_terms(
                (Fraction(e, n_lat) + shift, c) for e, c in b.items())
    ge, gc = den.leading()
    return num.scale(-ge, gc.inverse()), den.scale(-ge, gc.inverse())


@dataclass(frozen=True, slots=True)
class GradedMonomial:
    """A nonzero homogeneous element of the graded algebra: coeff * t^degree."""

    degree: Fraction
    coeff: GaussianRational

    def __post_init__(self):
        if self.coeff.is_zero():
            raise ValueError("graded monomial must be nonzero")

    def __mul__(self, other: "GradedMonomial") -> "GradedMonomial":
        return GradedMonomial(self.degree + other.degree, self.coeff * other.coeff)

    def __str__(self) -> str:
        return _term_text(self.degree, self.coeff)


class HahnScalar:
    """An element of the valued field, kept in a canonical normal form.

    The normal form makes the denominator monic with leading exponent 0 and
    strips common factors, so equality is plain structural comparison.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: HahnPoly, den: HahnPoly = _HP_ONE):
        num, den = _normalize_fraction(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("HahnScalar is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_coeff(c: GaussianRational) -> "HahnScalar":
        return HahnScalar(HahnPoly.from_terms([(_FR_ZERO, c)]))

    @staticmethod
    def term(coeff: GaussianRational, exponent) -> "HahnScalar":
        return HahnScalar(HahnPoly.from_terms([(_as_fraction(exponent), coeff)]))

    @staticmethod
    def rational(x) -> "HahnScalar":
        return HahnScalar.from_coeff(gaussian(x))

    # -- predicates / accessors --------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_term(self) -> bool:
        """True when the scalar is a single monomial c * t^g."""
        return len(self.num.terms) == 1 and self.den == _HP_ONE

    def valuation(self):
        if self.num.is_zero():
            return NEG_INF
        return self.num.valuation() - self.den.valuation()

    def initial_form(self) -> GradedMonomial:
        if self.is_zero():
            raise ValueError("initial form of 0 is undefined")
        gn, cn = self.num.leading()
        gd, cd = self.den.leading()
        return GradedMonomial(gn - gd, cn / cd)

    def leading_coefficient(self) -> GaussianRational:
        return self.initial_form().coeff

    def residue(self) -> GaussianRational:
        """Image in the residue field; requires valuation exactly 0."""
        if self.valuation() != 0:
            raise ValueError(f"residue requires valuation 0, got {self.valuation()}")
        return self.initial_form().coeff

    # -- field arithmetic ----------------------------------------------------

    def __add__(self, other: "HahnScalar") -> "HahnScalar":
        if self.den == other.den:
            return HahnScalar(self.num + other.num, self.den)
        return HahnScalar(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __sub__(self, other: "HahnScalar") -> "HahnScalar":
        return self + (-other)

    def __neg__(self) -> "HahnScalar":
        out = object.__new__(HahnScalar)
        object.__setattr__(out, "num", -self.num)
        object.__setattr__(out, "den", self.den)
        object.__setattr__(out, "_hash", None)
        return out

    def __mul__(self, other: "HahnScalar") -> "HahnScalar":
        return HahnScalar(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "HahnScalar") -> "HahnScalar":
        if other.is_zero():
            raise ZeroDivisionError("division by zero Hahn scalar")
        return HahnScalar(self.num * other.den, self.den * other.num)

    def inverse(self) -> "HahnScalar":
        return ONE / self

    def __pow__(self, k: int) -> "HahnScalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- misc ----------------------------------------------------------------

    def evaluate_numeric(self, s: float) -> complex:
        """Evaluate at t = e^s; parameterizing by the log keeps exponents tame."""
        d = self.den.evaluate(s)
        if d == 0:
            raise ZeroDivisionError("denominator evaluates to zero")
        return self.num.evaluate(s) / d

    def __eq__(self, other) -> bool:
        if not isinstance(other, HahnScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self) -> str:
        if self.den == _HP_ONE:
            return str(self.num)
        ns = str(self.num)
        if len(self.num.terms) > 1:
            ns = f"({ns})"
        return f"{ns}/({self.den})"

    __repr__ = __str__


ZERO = HahnScalar(_HP_ZERO)
ONE = HahnScalar(_HP_ONE)


def t_power(exponent) -> HahnScalar:
    """The splitting element t^exponent."""
    return HahnScalar.term(GR_ONE, exponent)


def field_arithmetic(a: HahnScalar, b: HahnScalar, op: str) -> HahnScalar:
    """Dispatch form of the four field operations (mainly for the CLI)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def valuation(a: HahnScalar):
    return a.valuation()


def initial_form(a: HahnScalar) -> GradedMonomial:
    return a.initial_form()


def residue(a: HahnScalar) -> GaussianRational:
    return a.residue()


def evaluate_numeric(a: HahnScalar, s: float) -> complex:
    return a.evaluate_numeric(s)

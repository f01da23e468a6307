"""Multivariate polynomials over the valued field and their initial data.

Carries the monomial valuations, leading parts, initial polynomials in the
residue representation, tropical polynomials with their roots, the support
trimming and homogenization helpers, and valuation-compatible substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .hahn import (GR_ONE, GR_ZERO, NEG_INF, ONE, ZERO, GaussianRational,
                   HahnScalar, _is_negativeish)

Monomial = tuple[int, ...]


def _grlex_key(u: Monomial):
    return (sum(u), u)


def _default_names(nvars: int, upper: bool) -> list[str]:
    if nvars == 1:
        return ["X" if upper else "x"]
    stem = "X" if upper else "x"
    return [f"{stem}{i + 1}" for i in range(nvars)]


def _monomial_text(u: Monomial, names: Sequence[str]) -> str:
    parts = []
    for i, e in enumerate(u):
        if e == 1:
            parts.append(names[i])
        elif e > 1:
            parts.append(f"{names[i]}^{e}")
    return "*".join(parts)


@dataclass(frozen=True, slots=True)
class ValuedPoly:
    """Polynomial with Hahn-scalar coefficients, canonical term order, no zeros."""

    nvars: int
    terms: tuple[tuple[Monomial, HahnScalar], ...]

    @staticmethod
    def from_dict(nvars: int, d: Mapping[Monomial, HahnScalar]) -> "ValuedPoly":
        items = [(tuple(u), c) for u, c in d.items() if not c.is_zero()]
        for u, _ in items:
            if len(u) != nvars or any(e < 0 for e in u):
                raise ValueError(f"bad exponent vector {u} for {nvars} variables")
        items.sort(key=lambda t: _grlex_key(t[0]), reverse=True)
        return ValuedPoly(nvars, tuple(items))

    @staticmethod
    def zero(nvars: int) -> "ValuedPoly":
        return ValuedPoly(nvars, ())

    @staticmethod
    def constant(c: HahnScalar, nvars: int) -> "ValuedPoly":
        if c.is_zero():
            return ValuedPoly.zero(nvars)
        return ValuedPoly(nvars, (((0,) * nvars, c),))

    @staticmethod
    def variable(i: int, nvars: int) -> "ValuedPoly":
        u = tuple(1 if j == i else 0 for j in range(nvars))
        return ValuedPoly(nvars, ((u, ONE),))

    # -- ring structure ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _acc(self) -> dict[Monomial, HahnScalar]:
        return dict(self.terms)

    def __add__(self, other: "ValuedPoly") -> "ValuedPoly":
        if self.nvars != other.nvars:
            raise ValueError("mismatched number of variables")
        acc = self._acc()
        for u, c in other.terms:
            s = acc.get(u, ZERO) + c
            if s.is_zero():
                acc.pop(u, None)
            else:
                acc[u] = s
        return ValuedPoly.from_dict(self.nvars, acc)

    def __neg__(self) -> "ValuedPoly":
        return ValuedPoly(self.nvars, tuple((u, -c) for u, c in self.terms))

    def __sub__(self, other: "ValuedPoly") -> "ValuedPoly":
        return self + (-other)

    def __mul__(self, other: "ValuedPoly") -> "ValuedPoly":
        if self.nvars != other.nvars:
            raise ValueError("mismatched number of variables")
        acc: dict[Monomial, HahnScalar] = {}
        for u, c in self.terms:
            for v, d in other.terms:
                w = tuple(a + b for a, b in zip(u, v))
                s = acc.get(w, ZERO) + c * d
                if s.is_zero():
                    acc.pop(w, None)
                else:
                    acc[w] = s
        return ValuedPoly.from_dict(self.nvars, acc)

    def scale(self, c: HahnScalar) -> "ValuedPoly":
        if c.is_zero():
            return ValuedPoly.zero(self.nvars)
        return ValuedPoly(self.nvars, tuple((u, ci * c) for u, ci in self.terms))

    def __pow__(self, k: int) -> "ValuedPoly":
        if k < 0:
            raise ValueError("negative polynomial power")
        out = ValuedPoly.constant(ONE, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(u) for u, _ in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(u) for u, _ in self.terms}) <= 1

    def evaluate(self, point: Sequence[HahnScalar]) -> HahnScalar:
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        out = ZERO
        for u, c in self.terms:
            term = c
            for i, e in enumerate(u):
                if e:
                    term = term * point[i] ** e
            out = out + term
        return out

    def derivative(self, var: int = 0) -> "ValuedPoly":
        acc: dict[Monomial, HahnScalar] = {}
        for u, c in self.terms:
            e = u[var]
            if e == 0:
                continue
            w = tuple(x - 1 if i == var else x for i, x in enumerate(u))
            acc[w] = acc.get(w, ZERO) + c * HahnScalar.rational(e)
        return ValuedPoly.from_dict(self.nvars, acc)

    def __str__(self) -> str:
        return poly_text(self)

    __repr__ = __str__


def poly_text(f: ValuedPoly, names: Sequence[str] | None = None) -> str:
    if f.is_zero():
        return "0"
    names = names or _default_names(f.nvars, upper=False)

    def coeff_text(c: HahnScalar, has_mon: bool) -> tuple[bool, str]:
        neg = _is_negativeish(c.num.leading()[1])
        if neg:
            c = -c
        s = str(c)
        if has_mon:
            if c == ONE:
                return neg, ""
            if len(c.num.terms) > 1 and c.den.terms == ((Fraction(0), GR_ONE),):
                s = f"({s})"
            elif c.den.terms != ((Fraction(0), GR_ONE),):
                s = f"({s})"
        return neg, s

    chunks = []
    for k, (u, c) in enumerate(f.terms):
        mon = _monomial_text(u, names)
        neg, cs = coeff_text(c, bool(mon))
        body = f"{cs}*{mon}" if cs and mon else (cs or mon or "1")
        if k == 0:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append((" - " if neg else " + ") + body)
    return "".join(chunks)


# ---------------------------------------------------------------------------
# residue-coefficient polynomials

@dataclass(frozen=True, slots=True)
class ComplexPoly:
    """Polynomial over the residue field (Gaussian rationals)."""

    nvars: int
    terms: tuple[tuple[Monomial, GaussianRational], ...]

    @staticmethod
    def from_dict(nvars: int, d: Mapping[Monomial, GaussianRational]) -> "ComplexPoly":
        items = [(tuple(u), c) for u, c in d.items() if not c.is_zero()]
        items.sort(key=lambda t: _grlex_key(t[0]), reverse=True)
        return ComplexPoly(nvars, tuple(items))

    @staticmethod
    def zero(nvars: int) -> "ComplexPoly":
        return ComplexPoly(nvars, ())

    @staticmethod
    def constant(c: GaussianRational, nvars: int) -> "ComplexPoly":
        if c.is_zero():
            return ComplexPoly.zero(nvars)
        return ComplexPoly(nvars, (((0,) * nvars, c),))

    @staticmethod
    def variable(i: int, nvars: int) -> "ComplexPoly":
        u = tuple(1 if j == i else 0 for j in range(nvars))
        return ComplexPoly(nvars, ((u, GR_ONE),))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        acc = dict(self.terms)
        for u, c in other.terms:
            s = acc.get(u, GR_ZERO) + c
            if s.is_zero():
                acc.pop(u, None)
            else:
                acc[u] = s
        return ComplexPoly.from_dict(self.nvars, acc)

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(self.nvars, tuple((u, -c) for u, c in self.terms))

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return self + (-other)

    def __mul__(self, other: "ComplexPoly") -> "ComplexPoly":
        acc: dict[Monomial, GaussianRational] = {}
        for u, c in self.terms:
            for v, d in other.terms:
                w = tuple(a + b for a, b in zip(u, v))
                s = acc.get(w, GR_ZERO) + c * d
                if s.is_zero():
                    acc.pop(w, None)
                else:
                    acc[w] = s
        return ComplexPoly.from_dict(self.nvars, acc)

    def scale(self, c: GaussianRational) -> "ComplexPoly":
        if c.is_zero():
            return ComplexPoly.zero(self.nvars)
        return ComplexPoly(self.nvars, tuple((u, ci * c) for u, ci in self.terms))

    def __pow__(self, k: int) -> "ComplexPoly":
        out = ComplexPoly.constant(GR_ONE, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(u) for u, _ in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(u) for u, _ in self.terms}) <= 1

    def evaluate(self, point: Sequence[GaussianRational]) -> GaussianRational:
        out = GR_ZERO
        for u, c in self.terms:
            term = c
            for i, e in enumerate(u):
                for _ in range(e):
                    term = term * point[i]
            out = out + term
        return out

    def derivative(self, var: int = 0) -> "ComplexPoly":
        acc: dict[Monomial, GaussianRational] = {}
        for u, c in self.terms:
            e = u[var]
            if e == 0:
                continue
            w = tuple(x - 1 if i == var else x for i, x in enumerate(u))
            acc[w] = acc.get(w, GR_ZERO) + c * GaussianRational(Fraction(e))
        return ComplexPoly.from_dict(self.nvars, acc)

    def __str__(self) -> str:
        return complex_poly_text(self)

    __repr__ = __str__


def complex_poly_text(f: ComplexPoly, names: Sequence[str] | None = None) -> str:
    if f.is_zero():
        return "0"
    names = names or _default_names(f.nvars, upper=True)
    chunks = []
    for k, (u, c) in enumerate(f.terms):
        neg = _is_negativeish(c)
        if neg:
            c = -c
        mon = _monomial_text(u, names)
        if not mon:
            body = str(c)
        elif c == GR_ONE:
            body = mon
        else:
            body = f"{c}*{mon}"
        if k == 0:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append((" - " if neg else " + ") + body)
    return "".join(chunks)


# ---------------------------------------------------------------------------
# monomial valuations and initial polynomials

WeightVector = tuple[Fraction, ...]


def diagonal_weight(alpha, nvars: int) -> WeightVector:
    a = Fraction(alpha)
    return (a,) * nvars


def _term_value(u: Monomial, c: HahnScalar, gamma: WeightVector) -> Fraction:
    return c.valuation() + sum((Fraction(e) * g for e, g in zip(u, gamma)), Fraction(0))


def monomial_valuation(f: ValuedPoly, gamma: WeightVector):
    """max over terms of val(c_u) + u . gamma; -inf on the zero polynomial."""
    if f.is_zero():
        return NEG_INF
    if len(gamma) != f.nvars:
        raise ValueError("weight vector length mismatch")
    return max(_term_value(u, c, gamma) for u, c in f.terms)


def leading_part(f: ValuedPoly, gamma: WeightVector) -> ValuedPoly:
    """Restriction of f to the terms attaining the monomial valuation."""
    if f.is_zero():
        raise ValueError("leading part of 0 is undefined")
    v = monomial_valuation(f, gamma)
    return ValuedPoly(f.nvars, tuple(
        (u, c) for u, c in f.terms if _term_value(u, c, gamma) == v))


def initial_poly(f: ValuedPoly, alpha) -> tuple[Fraction, ComplexPoly]:
    """Initial polynomial at the diagonal weight, in residue coordinates.

    Returns (value, rep) where value is the monomial valuation of f at the
    diagonal weight alpha and rep collects the leading residue coefficient
    of every term attaining it.
    """
    if f.is_zero():
        raise ValueError("initial polynomial of 0 is undefined")
    alpha = Fraction(alpha)
    gamma = diagonal_weight(alpha, f.nvars)
    v = monomial_valuation(f, gamma)
    rep: dict[Monomial, GaussianRational] = {}
    for u, c in f.terms:
        if _term_value(u, c, gamma) == v:
            rep[u] = c.initial_form().coeff
    return v, ComplexPoly.from_dict(f.nvars, rep)


# ---------------------------------------------------------------------------
# tropical polynomials

@dataclass(frozen=True, slots=True)
class TropicalPoly:
    """Upper envelope of the affine pieces intercept + slope * alpha."""

    pieces: tuple[tuple[int, Fraction], ...]  # (slope, intercept), slopes distinct

    @staticmethod
    def from_poly(f: ValuedPoly) -> "TropicalPoly":
        if f.is_zero():
            raise ValueError("tropical polynomial of 0 is undefined")
        best: dict[int, Fraction] = {}
        for u, c in f.terms:
            s = sum(u)
            v = c.valuation()
            if s not in best or v > best[s]:
                best[s] = v
        return TropicalPoly(tuple(sorted(best.items())))

    def evaluate(self, alpha) -> Fraction:
        a = Fraction(alpha)
        return max(b + s * a for s, b in self.pieces)

    def roots(self) -> tuple[Fraction, ...]:
        """Exact bend points: where the attaining slope set changes."""
        lines = list(self.pieces)  # slope-ascending, distinct slopes
        if len(lines) < 2:
            return ()
        stack = [lines[0]]
        xs: list[Fraction] = []
        for s, b in lines[1:]:
            while stack:
                s0, b0 = stack[-1]
                x = Fraction(b0 - b, s - s0)  # where the steeper line takes over
                if xs and x <= xs[-1]:
                    stack.pop()
                    xs.pop()
                else:
                    stack.append((s, b))
                    xs.append(x)
                    break
            else:
                stack.append((s, b))
        return tuple(xs)

    def to_json(self) -> dict:
        return {"pieces": [{"slope": s, "intercept": str(b)} for s, b in self.pieces]}


def tropical_poly(f: ValuedPoly) -> TropicalPoly:
    return TropicalPoly.from_poly(f)


def tropical_roots(f: ValuedPoly) -> tuple[Fraction, ...]:
    return TropicalPoly.from_poly(f).roots()


def trim_to_tropical_support(f: ValuedPoly) -> ValuedPoly:
    """Drop every term whose affine piece never attains the tropical maximum.

    The result has the same tropical polynomial and the same initial
    polynomial at every level.
    """
    if f.is_zero():
        raise ValueError("cannot trim the zero polynomial")
    best: dict[int, Fraction] = {}
    for u, c in f.terms:
        s = sum(u)
        v = c.valuation()
        if s not in best or v > best[s]:
            best[s] = v
    kept = []
    for u, c in f.terms:
        s = sum(u)
        v = c.valuation()
        if v != best[s]:
            continue
        lo, hi = None, None  # feasibility interval for attaining the max
        ok = True
        for s2, b2 in best.items():
            if s2 == s:
                continue
            bound = Fraction(v - b2, s2 - s)
            if s2 > s:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        if lo is not None and hi is not None and lo > hi:
            ok = False
        if ok:
            kept.append((u, c))
    return ValuedPoly(f.nvars, tuple(kept))


# ---------------------------------------------------------------------------
# homogenization

def homogenize(f: ValuedPoly) -> ValuedPoly:
    """Add a degree-completing variable in position 0 (weight 0)."""
    d = f.degree()
    acc = {}
    for u, c in f.terms:
        acc[(d - sum(u),) + u] = c
    return ValuedPoly.from_dict(f.nvars + 1, acc)


def dehomogenize(f: ValuedPoly) -> ValuedPoly:
    """Set the variable in position 0 to 1."""
    acc: dict[Monomial, HahnScalar] = {}
    for u, c in f.terms:
        w = u[1:]
        s = acc.get(w, ZERO) + c
        if s.is_zero():
            acc.pop(w, None)
        else:
            acc[w] = s
    return ValuedPoly.from_dict(f.nvars - 1, acc)


# ---------------------------------------------------------------------------
# substitution

def substitute(f: ValuedPoly, images: Sequence[ValuedPoly]) -> ValuedPoly:
    """Ring morphism sending variable i to images[i] (exact composition)."""
    if len(images) != f.nvars:
        raise ValueError("need one image per variable")
    m = images[0].nvars if images else f.nvars
    if any(g.nvars != m for g in images):
        raise ValueError("images live in different rings")
    powers: list[dict[int, ValuedPoly]] = [dict() for _ in range(f.nvars)]

    def power(i: int, e: int) -> ValuedPoly:
        cache = powers[i]
        if e not in cache:
            cache[e] = images[i] ** e
        return cache[e]

    out = ValuedPoly.zero(m)
    for u, c in f.terms:
        term = ValuedPoly.constant(c, m)
        for i, e in enumerate(u):
            if e:
                term = term * power(i, e)
        out = out + term
    return out


def linear_substitute(f: ValuedPoly, matrix: Sequence[Sequence[HahnScalar]]) -> ValuedPoly:
    """Compose f with the invertible linear change of variables
    x_i -> sum_j matrix[i][j] * y_j."""
    n = f.nvars
    if len(matrix) != n or any(len(r) != n for r in matrix):
        raise ValueError("matrix must be square of size nvars")
    if invert_matrix(matrix) is None:
        raise ValueError("substitution matrix is singular")
    images = [
        ValuedPoly.from_dict(n, {
            tuple(1 if j == k else 0 for k in range(n)): matrix[i][j]
            for j in range(n) if not matrix[i][j].is_zero()
        })
        for i in range(n)
    ]
    return substitute(f, images)


def invert_matrix(matrix: Sequence[Sequence[HahnScalar]]):
    """Exact inverse over the field, or None when singular."""
    n = len(matrix)
    a = [list(row) for row in matrix]
    inv = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        a[col] = [x / d for x in a[col]]
        inv[col] = [x / d for x in inv[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - factor * y for x, y in zip(inv[r], inv[col])]
    return inv


def graded_substitute(F: ComplexPoly, alpha,
                      matrix: Sequence[Sequence[HahnScalar]]) -> ComplexPoly:
    """Image of a residue-representation initial polynomial under the graded
    map of an invertible linear substitution.

    The substitution must preserve the diagonal monomial valuation in both
    directions: every variable image, and every inverse image, must have
    monomial valuation exactly alpha.  Each residue variable then maps to
    the initial polynomial of its image; terms whose coefficient valuation
    drops below 0 disappear from that image.
    """
    n = F.nvars
    alpha = Fraction(alpha)
    if len(matrix) != n or any(len(r) != n for r in matrix):
        raise ValueError("matrix must be square of size nvars")
    inv = invert_matrix(matrix)
    if inv is None:
        raise ValueError("substitution matrix is singular")
    gamma = diagonal_weight(alpha, n)
    images = []
    for i in range(n):
        img = ValuedPoly.from_dict(n, {
            tuple(1 if j == k else 0 for k in range(n)): matrix[i][j]
            for j in range(n) if not matrix[i][j].is_zero()
        })
        if img.is_zero() or monomial_valuation(img, gamma) != alpha:
            raise ValueError(
                f"variable {i + 1}: image does not preserve the valuation at {alpha}")
        images.append(img)
    for i in range(n):
        pre = ValuedPoly.from_dict(n, {
            tuple(1 if j == k else 0 for k in range(n)): inv[i][j]
            for j in range(n) if not inv[i][j].is_zero()
        })
        if pre.is_zero() or monomial_valuation(pre, gamma) != alpha:
            raise ValueError(
                f"variable {i + 1}: inverse image does not preserve the valuation at {alpha}")
    reps = [initial_poly(img, alpha)[1] for img in images]
    out = ComplexPoly.zero(n)
    for u, c in F.terms:
        term = ComplexPoly.constant(c, n)
        for i, e in enumerate(u):
            if e:
                term = term * reps[i] ** e
        out = out + term
    return out


def poly_arithmetic(f: ValuedPoly, g: ValuedPoly, op: str) -> ValuedPoly:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")

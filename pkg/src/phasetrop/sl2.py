"""Numeric geometry of SL2(C) degenerations.

Polar decomposition and the stretch operator, the limit map from
tropical data (level, ray) into SL2(C) and its inverse, amoeba and
coamoeba projections, exact valuative tropicalization of Hahn matrices,
and the harness comparing stretched numeric families against the limit
formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InternalInvariantError
from .hahn import GR_ONE, HahnScalar, ONE
from .phase import vector_initial_form

DET_TOL = 1e-9
UNITARY_TOL = 1e-7

_I2 = np.eye(2, dtype=complex)


def det2(c: np.ndarray) -> complex:
    return c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0]


def adj2(c: np.ndarray) -> np.ndarray:
    """Adjugate: adj(C) = tr(C) I - C for 2x2, so C adj(C) = det(C) I."""
    return np.array([[c[1, 1], -c[0, 1]], [-c[1, 0], c[0, 0]]], dtype=complex)


def normalize_unimodular(c: np.ndarray) -> np.ndarray:
    """Scale by det^(-1/2); requires a positive real determinant."""
    d = det2(c)
    if not (abs(d.imag) <= DET_TOL * max(1.0, abs(d)) and d.real > 0):
        raise ValueError(f"normalization needs det in R_>0, got {d}")
    return c / math.sqrt(d.real)


def frobenius(c: np.ndarray) -> float:
    return float(np.linalg.norm(c))


def _log_svd(c: np.ndarray, det_abs: float | None = None):
    """SVD with log-domain singular values, the small one recovered from
    the determinant.

    For a 2x2 matrix the singular values multiply to |det|; the direct SVD
    estimate of the small one drowns in rounding error once the condition
    number passes 1/eps, while the determinant is far better conditioned.
    Callers who know |det| exactly (e.g. unimodular families evaluated at
    huge arguments, where even forming the determinant numerically cancels
    catastrophically) pass it in.
    """
    scale = float(np.max(np.abs(c)))
    if scale == 0:
        raise ValueError("zero matrix")
    cs = c / scale
    v, s, wh = np.linalg.svd(cs)
    if s[0] == 0:
        raise ValueError("matrix is numerically singular")
    log_scale = math.log(scale)
    log_s1 = log_scale + math.log(float(s[0]))
    if det_abs is None:
        d = abs(det2(cs))
        if d == 0:
            raise ValueError("matrix is numerically singular")
        log_s2 = log_scale + math.log(d) - math.log(float(s[0]))
    else:
        if det_abs <= 0:
            raise ValueError("det_abs must be positive")
        log_s2 = math.log(det_abs) - log_s1
    return (log_s1, log_s2), v, wh


def polar_decompose(c: np.ndarray, det_abs: float | None = None
                    ) -> tuple[np.ndarray, np.ndarray]:
    """C = P U with P Hermitian positive definite, U unitary."""
    (l1, l2), v, wh = _log_svd(c, det_abs)
    p = (v * np.array([math.exp(l1), math.exp(l2)])) @ v.conj().T
    u = v @ wh
    return p, u


def stretch(c: np.ndarray, h: float, det_abs: float | None = None) -> np.ndarray:
    """Replace the Hermitian polar factor P by P^h.

    Singular values are raised to the power h in the log domain, so the
    operator stays accurate for entries up to about exp(700).
    """
    if h <= 0:
        raise ValueError("stretch exponent must be positive")
    (l1, l2), v, wh = _log_svd(c, det_abs)
    ph = np.array([math.exp(h * l1), math.exp(h * l2)])
    return (v * ph) @ wh


def coamoeba(c: np.ndarray) -> np.ndarray:
    """Unitary polar factor of a unimodular matrix, via C + (C*)^adj."""
    return normalize_unimodular(c + adj2(c.conj().T))


def stretch_unimodular(c: np.ndarray, h: float) -> np.ndarray:
    """Stable stretch for matrices with |det| = 1 at extreme magnitudes.

    The unitary factor comes from the adjugate identity
    C + (C*)^adj = (mu + 1/mu) U, and the Hermitian factor's power uses
    only the top eigenvector of CC* (its complement is exactly
    orthogonal), so no information is needed at the tiny singular scale.
    SVD-based stretching loses the phase of the small singular pair once
    the condition number of the evaluated matrix passes 1/eps.
    """
    if h <= 0:
        raise ValueError("stretch exponent must be positive")
    s = c + adj2(c.conj().T)
    ds = det2(s)
    if not (ds.real > 0 and abs(ds.imag) <= 1e-9 * abs(ds)):
        raise ValueError(f"adjugate identity violated; det sum = {ds} (|det C| != 1?)")
    u = s / math.sqrt(ds.real)
    scale = float(np.max(np.abs(c)))
    ct = c / scale
    hm = ct @ ct.conj().T
    tr = hm[0, 0].real + hm[1, 1].real
    det_hm = scale ** -4  # |det C| = 1
    disc = math.sqrt(max(tr * tr - 4.0 * det_hm, 0.0))
    lam_top = 0.5 * (tr + disc)
    log_top = 2.0 * math.log(scale) + math.log(lam_top)
    v1 = np.array([hm[0, 1], lam_top - hm[0, 0]])
    v2 = np.array([lam_top - hm[1, 1], hm[1, 0]])
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    nv = np.linalg.norm(v)
    if nv < 1e-14 * max(1.0, lam_top):
        # CC* is (numerically) scalar: Hermitian part is a multiple of I
        return math.exp(0.5 * h * log_top) * u
    v = (v / nv).reshape(2, 1)
    w = np.array([[-np.conj(v[1, 0])], [np.conj(v[0, 0])]])
    ph = (math.exp(0.5 * h * log_top) * (v @ v.conj().T)
          + math.exp(-0.5 * h * log_top) * (w @ w.conj().T))
    return ph @ u


@dataclass(frozen=True)
class HermitianProjections:
    kappa: np.ndarray        # C C*
    kappa_star: np.ndarray   # C* C
    kappa_hat: tuple[np.ndarray, np.ndarray]
    dist_origin: float


def hermitian_projections(c: np.ndarray) -> HermitianProjections:
    """Both Hermitian squares of a unimodular matrix and the hyperbolic
    distance of the Hermitian polar part from the identity."""
    k = c @ c.conj().T
    ks = c.conj().T @ c
    w = np.linalg.eigvalsh(k)
    dist = 0.5 * abs(math.log(w[-1]))
    return HermitianProjections(k, ks, (k, ks), dist)


class SL2TropPoint:
    """A point of the SL2 valuative tropicalization: level alpha >= 0 and a
    phase matrix with det 0 (alpha > 0) or det 1 (alpha = 0)."""

    __slots__ = ("level", "phase", "branch")

    def __init__(self, level, phase: np.ndarray, branch: str | None = None):
        lv = float(level)
        if lv < -1e-12:
            raise ValueError(f"level must be nonnegative, got {level}")
        phase = np.asarray(phase, dtype=complex)
        nrm = frobenius(phase)
        if nrm == 0:
            raise ValueError("phase matrix must be nonzero")
        d = det2(phase)
        if branch is None:
            branch = "unitary" if lv <= UNITARY_TOL else "cone"
        if branch == "unitary":
            if abs(d - 1) > 1e-6:
                raise ValueError(f"level-0 phase needs det 1, got {d}")
        else:
            if lv <= 0:
                raise ValueError("positive level required away from the unitary branch")
            if abs(d) > 1e-6 * nrm * nrm:
                raise ValueError(f"positive-level phase needs det 0, got {d}")
        self.level = level
        self.phase = phase
        self.branch = branch

    def __repr__(self) -> str:
        return f"SL2TropPoint(level={self.level}, branch={self.branch!r}, phase={self.phase.tolist()})"

    def to_json(self) -> dict:
        return {
            "level": str(self.level),
            "branch": self.branch,
            "phase": [[[z.real, z.imag] for z in row] for row in self.phase.tolist()],
        }


def sl2_limit(p: SL2TropPoint) -> np.ndarray:
    """Limit matrix of a tropical point: [[e^a B + e^-a (B*)^adj]].

    On the unitary branch (a = 0) this is B itself whenever B is unitary,
    and in general the unitary polar factor of B.
    """
    a = float(p.level)
    b = p.phase
    m = math.exp(a) * b + math.exp(-a) * adj2(b.conj().T)
    return normalize_unimodular(m)


def sl2_limit_inverse(c: np.ndarray) -> SL2TropPoint:
    """Invert the limit map on SL2(C).

    The level is half the log of the top eigenvalue of CC*; the ray is
    recovered by projecting C onto the top eigenspace, which kills the
    adjugate summand of the limit formula.  Near-unitary inputs route to
    the level-0 branch.
    """
    d = det2(c)
    if abs(d - 1) > DET_TOL:
        raise ValueError(f"need det 1 within {DET_TOL}, got {d}")
    h = c @ c.conj().T
    w, v = np.linalg.eigh(h)
    alpha = 0.5 * math.log(float(w[-1]))
    if alpha < UNITARY_TOL:
        return SL2TropPoint(0.0, c, "unitary")
    top = v[:, -1].reshape(2, 1)
    proj = top @ top.conj().T
    ray = proj @ c
    ray = ray / frobenius(ray)
    return SL2TropPoint(alpha, ray, "cone")


def canonical_ray(b: np.ndarray) -> np.ndarray:
    """Unit-Frobenius representative, sign-fixed so the first nonzero entry
    has nonnegative real part (positive imaginary part when the real part
    vanishes)."""
    out = b / frobenius(b)
    for z in out.flat:
        if abs(z) > 1e-12:
            if z.real < -1e-15 or (abs(z.real) <= 1e-15 and z.imag < 0):
                out = -out
            break
    return out


def polar_project(p: SL2TropPoint) -> tuple[float, np.ndarray, str]:
    """Project a tropical point to its polar data.

    Positive level: the canonical ray representative of the phase.
    Level zero: the unitary polar factor of the phase.
    """
    if p.branch == "unitary":
        _, u = polar_decompose(p.phase)
        return 0.0, u, "unitary"
    return float(p.level), canonical_ray(p.phase), "ray"


# ---------------------------------------------------------------------------
# exact Hahn matrices

@dataclass(frozen=True, slots=True)
class HahnMat2:
    """2x2 matrix of Hahn scalars (row major)."""

    entries: tuple[HahnScalar, HahnScalar, HahnScalar, HahnScalar]

    def det(self) -> HahnScalar:
        a, b, c, d = self.entries
        return a * d - b * c

    def is_sl2(self) -> bool:
        return self.det() == ONE

    def evaluate(self, s: float) -> np.ndarray:
        a, b, c, d = (e.evaluate_numeric(s) for e in self.entries)
        return np.array([[a, b], [c, d]], dtype=complex)

    def is_monomial(self) -> bool:
        """True when every nonzero entry is a single Hahn term."""
        return all(e.is_zero() or e.is_term() for e in self.entries)

    def __mul__(self, other: "HahnMat2") -> "HahnMat2":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return HahnMat2((a * e + b * g, a * f + b * h,
                         c * e + d * g, c * f + d * h))

    def __str__(self) -> str:
        a, b, c, d = self.entries
        return f"[[{a}, {b}],[{c}, {d}]]"


def valuative_tropicalization(a: HahnMat2) -> SL2TropPoint:
    """Exact initial form of the entry vector of an SL2 Hahn matrix."""
    if not a.is_sl2():
        raise ValueError(f"matrix determinant is {a.det()}, expected 1")
    p = vector_initial_form(list(a.entries))
    if p.level < 0:
        raise InternalInvariantError(
            "negative level for an exact SL2 matrix; this cannot happen")
    t11, t12, t21, t22 = p.phase
    detb = t11 * t22 - t12 * t21
    if p.level == 0:
        if detb != GR_ONE:
            raise InternalInvariantError("level-0 phase of an SL2 matrix must have det 1")
        branch = "unitary"
    else:
        if not detb.is_zero():
            raise InternalInvariantError("positive-level phase of an SL2 matrix must have det 0")
        branch = "cone"
    phase = np.array([[t11.to_complex(), t12.to_complex()],
                      [t21.to_complex(), t22.to_complex()]])
    return SL2TropPoint(p.level, phase, branch)


# ---------------------------------------------------------------------------
# limit verification harness

@dataclass(frozen=True)
class LimitSample:
    matrix: str
    errors: tuple[tuple[float, float], ...]  # (s, eps)
    exact: bool               # flat at rounding error for every s
    has_subleading: bool      # some entry carries more than its leading term
    strictly_decreasing: bool
    ratios: tuple[float, ...]
    rate_ok: bool

    def to_json(self) -> dict:
        return {
            "matrix": self.matrix,
            "errors": [{"s": s, "eps": e} for s, e in self.errors],
            "exact": self.exact,
            "has_subleading": self.has_subleading,
            "strictly_decreasing": self.strictly_decreasing,
            "ratios": list(self.ratios),
            "rate_ok": self.rate_ok,
        }


def verify_limit(a: HahnMat2, s_values: Sequence[float]) -> LimitSample:
    """Compare the stretched numeric family against the limit formula.

    eps(s) is the Frobenius distance between R_{1/s} applied to the matrix
    evaluated at t = e^s and the limit of its valuative tropicalization.
    Generic samples decay like 1/s (the power 1/(2s) on the top eigenvalue
    contributes a log/s correction); a sample is reported exact when every
    eps sits at rounding error.
    """
    target = sl2_limit(valuative_tropicalization(a))
    errors = []
    for s in s_values:
        approx = stretch_unimodular(a.evaluate(float(s)), 1.0 / float(s))
        errors.append((float(s), frobenius(approx - target)))
    eps = [e for _, e in errors]
    exact = all(e < 1e-12 for e in eps)
    subleading = not a.is_monomial()
    decreasing = all(b < x for x, b in zip(eps, eps[1:]))
    ratios = tuple(b / x if x > 0 else 0.0 for x, b in zip(eps, eps[1:]))
    if exact:
        rate_ok = True
    else:
        rate_ok = decreasing and eps[-1] < 0.05
        if subleading and len(errors) >= 2 and \
                abs(errors[-1][0] / errors[-2][0] - 2.0) < 1e-9:
            rate_ok = rate_ok and 0.3 <= ratios[-1] <= 0.7
    return LimitSample(str(a), tuple(errors), exact, subleading,
                       decreasing, ratios, rate_ok)

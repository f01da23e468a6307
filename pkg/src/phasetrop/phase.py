"""Phase space of vectors over the valued field.

A nonzero vector z of Hahn scalars has a sup-valuation (the max of the
entry valuations) and an initial form: the pair (level, phase) where the
phase keeps the leading residue coefficient of every entry that attains
the level and zeroes out the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .hahn import (GR_ZERO, NEG_INF, GaussianRational, GradedMonomial,
                   HahnScalar)


@dataclass(frozen=True, slots=True)
class PhasePoint:
    """Initial form of a nonzero vector: a level and a nonzero phase vector."""

    level: Fraction
    phase: tuple[GaussianRational, ...]

    def __post_init__(self):
        if all(c.is_zero() for c in self.phase):
            raise ValueError("phase vector must be nonzero")

    def to_json(self) -> dict:
        return {
            "level": str(self.level),
            "phase": [[str(c.re), str(c.im)] for c in self.phase],
        }

    def __str__(self) -> str:
        return f"({self.level}, ({', '.join(str(c) for c in self.phase)}))"


def sup_norm(z: Sequence[HahnScalar]):
    """max of the entry valuations; -inf exactly on the zero vector."""
    vals = [zi.valuation() for zi in z]
    return max(vals) if vals else NEG_INF


def vector_initial_form(z: Sequence[HahnScalar]) -> PhasePoint:
    level = sup_norm(z)
    if level == NEG_INF:
        raise ValueError("initial form of the zero vector is undefined")
    phase = tuple(
        zi.initial_form().coeff if zi.valuation() == level else GR_ZERO
        for zi in z
    )
    return PhasePoint(level, phase)


def graded_scalar_action(m: GradedMonomial, p: PhasePoint) -> PhasePoint:
    """Scalar multiplication by a homogeneous element: degrees add, phases scale."""
    return PhasePoint(p.level + m.degree, tuple(m.coeff * c for c in p.phase))


def phase_linear_action(rows: Sequence[Sequence[HahnScalar]], p: PhasePoint) -> PhasePoint:
    """Push a phase point through a sup-valuation-preserving linear map.

    The map is given by its matrix of bounded scalars (valuation <= 0);
    on phases it acts through the entrywise residues, entries of negative
    valuation contributing zero.
    """
    n = len(p.phase)
    if any(len(r) != n for r in rows) or len(rows) != n:
        raise ValueError("matrix shape does not match the phase vector")
    reduced = []
    for r in rows:
        row = []
        for a in r:
            v = a.valuation()
            if v == 0:
                row.append(a.initial_form().coeff)
            elif v == NEG_INF or v < 0:
                row.append(GR_ZERO)
            else:
                raise ValueError("matrix entries must have valuation <= 0")
        reduced.append(row)
    phase = tuple(
        sum((reduced[i][j] * p.phase[j] for j in range(n)), GR_ZERO)
        for i in range(n)
    )
    return PhasePoint(p.level, phase)

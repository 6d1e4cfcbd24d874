"""Projective points, curves, exact incidence predicates and enumeration."""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .exactfield import CycloElem, FieldMatrix, as_elem, det_small, is_real, nullspace

__all__ = [
    "AffineOnlyError",
    "ArityError",
    "Basis",
    "ConicCensus",
    "Curve",
    "DuplicatePointError",
    "IncidentSet",
    "PPoint",
    "collinear",
    "concyclic",
    "conic_census",
    "enumerate_circles",
    "enumerate_conics",
    "enumerate_lines",
    "fit_curve",
    "join",
    "lift_points",
    "meet",
    "on_curve",
    "transform",
]


class AffineOnlyError(ValueError):
    """A circle predicate received a point at infinity."""


class ArityError(ValueError):
    """Wrong number of points for the requested curve fit."""


class DuplicatePointError(ValueError):
    """Two input points are the same projective point."""


def _lift3(x, y, z):
    m = math.lcm(*(v.m for v in (x, y, z) if isinstance(v, CycloElem)), 1)
    return as_elem(x, m), as_elem(y, m), as_elem(z, m)


@dataclass(frozen=True)
class PPoint:
    """Projective point (x : y : z) with real cyclotomic coordinates.

    Stored with the last nonzero coordinate scaled to 1, so affine points
    read (x, y, 1) and points at infinity (x, 1, 0) or (1, 0, 0).
    """

    x: CycloElem
    y: CycloElem
    z: CycloElem

    def __post_init__(self):
        x, y, z = _lift3(self.x, self.y, self.z)
        if not (x or y or z):
            raise ValueError("(0 : 0 : 0) is not a projective point")
        for c in (x, y, z):
            if not is_real(c):
                raise ValueError(f"coordinate {c!r} is not real")
        last = z if z else (y if y else x)
        if last != 1:
            s = last.inv()
            x, y, z = x * s, y * s, z * s
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @classmethod
    def affine(cls, x, y) -> "PPoint":
        return cls(*_lift3(x, y, 1))

    @classmethod
    def at_infinity(cls, dx, dy) -> "PPoint":
        return cls(*_lift3(dx, dy, 0))

    @property
    def m(self) -> int:
        return self.x.m

    @property
    def coords(self) -> tuple[CycloElem, CycloElem, CycloElem]:
        return self.x, self.y, self.z

    @property
    def is_infinite(self) -> bool:
        return self.z.is_zero()

    def lift(self, L: int) -> "PPoint":
        if L == self.m:
            return self
        return PPoint(self.x.lift(L), self.y.lift(L), self.z.lift(L))

    def to_float(self) -> tuple[float, float, float]:
        return float(self.x), float(self.y), float(self.z)

    def __repr__(self) -> str:
        if self.is_infinite:
            return f"PPoint(inf, dir=({float(self.x):.6g}, {float(self.y):.6g}))"
        return f"PPoint({float(self.x):.6g}, {float(self.y):.6g})"


def lift_points(points: Sequence[PPoint]) -> list[PPoint]:
    L = math.lcm(*(p.m for p in points), 1)
    return [p.lift(L) for p in points]


class Basis(enum.Enum):
    LINE = "line"
    CIRCLE = "circle"
    CONIC = "conic"
    CUBIC = "cubic"

    @property
    def size(self) -> int:
        return {"line": 3, "circle": 4, "conic": 6, "cubic": 10}[self.value]

    def monomials(self, p: PPoint) -> list[CycloElem]:
        x, y, z = p.coords
        if self is Basis.LINE:
            return [x, y, z]
        if self is Basis.CIRCLE:
            return [x * x + y * y, x * z, y * z, z * z]
        if self is Basis.CONIC:
            return [x * x, x * y, y * y, x * z, y * z, z * z]
        xx, yy, zz = x * x, y * y, z * z
        return [xx * x, xx * y, x * yy, yy * y, xx * z, x * y * z, yy * z, x * zz, y * zz, zz * z]


def _canonical(coeffs: Sequence[CycloElem]) -> tuple[CycloElem, ...]:
    lead = next((c for c in coeffs if c), None)
    if lead is None:
        raise ValueError("zero coefficient vector does not define a curve")
    if lead == 1:
        return tuple(coeffs)
    s = lead.inv()
    return tuple(c * s for c in coeffs)


@dataclass(frozen=True)
class Curve:
    """A curve given by coefficients over one of the monomial bases,
    canonically scaled so the first nonzero coefficient is 1."""

    basis: Basis
    coeffs: tuple[CycloElem, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.basis.size:
            raise ValueError(f"{self.basis.name} needs {self.basis.size} coefficients")
        m = math.lcm(*(c.m for c in self.coeffs if isinstance(c, CycloElem)), 1)
        coeffs = _canonical([as_elem(c, m) for c in self.coeffs])
        object.__setattr__(self, "coeffs", coeffs)

    def evaluate(self, p: PPoint) -> CycloElem:
        total = 0
        for a, mono in zip(self.coeffs, self.basis.monomials(p)):
            if a and mono:
                total = a * mono + total
        return as_elem(total, p.m)

    @property
    def is_line_like(self) -> bool:
        # a CIRCLE-basis curve with vanishing quadratic part is a line (or z = 0)
        return self.basis is Basis.LINE or (self.basis is Basis.CIRCLE and not self.coeffs[0])


@dataclass(frozen=True)
class IncidentSet:
    """A curve together with all configuration points (by index) on it."""

    curve: Curve
    members: tuple[int, ...]
    degenerate: bool = False  # a line reported among circles

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.members, self.members[1:])):
            raise ValueError("members must be strictly increasing")

    def __len__(self) -> int:
        return len(self.members)


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def join(p: PPoint, q: PPoint) -> tuple[CycloElem, CycloElem, CycloElem]:
    """Line coordinates through two points (cross product)."""
    (a, b, c), (d, e, f) = p.coords, q.coords
    return b * f - c * e, c * d - a * f, a * e - b * d


def meet(l1: Sequence, l2: Sequence) -> PPoint:
    """Intersection point of two distinct lines given by coordinates."""
    (a, b, c), (d, e, f) = l1, l2
    return PPoint(b * f - c * e, c * d - a * f, a * e - b * d)


def _dot(line, p: PPoint):
    a, b, c = line
    x, y, z = p.coords
    return a * x + b * y + c * z


def collinear(p: PPoint, q: PPoint, r: PPoint) -> bool:
    return not det_small([list(p.coords), list(q.coords), list(r.coords)])


def _circle_row(p: PPoint) -> list[CycloElem]:
    if p.is_infinite:
        raise AffineOnlyError("circle predicates are affine-only")
    return [p.x * p.x + p.y * p.y, p.x, p.y, p.z]


def concyclic(p: PPoint, q: PPoint, r: PPoint, s: PPoint) -> bool:
    """True when the four affine points lie on one circle or one line."""
    return not det_small([_circle_row(t) for t in (p, q, r, s)])


def on_curve(c: Curve, p: PPoint) -> bool:
    return c.evaluate(p).is_zero()


_FIT_ARITY = {Basis.LINE: 2, Basis.CIRCLE: 3, Basis.CONIC: 5, Basis.CUBIC: 9}


def fit_curve(points: Sequence[PPoint], basis: Basis) -> tuple[Curve, int]:
    """Curve through the points and the nullity of the evaluation matrix.

    Nullity 1 means the curve is unique; larger nullity means the fit is
    degenerate and the returned curve is just one member of the pencil.
    """
    if len(points) != _FIT_ARITY[basis]:
        raise ArityError(f"{basis.name} fit needs {_FIT_ARITY[basis]} points, got {len(points)}")
    if basis is Basis.CIRCLE and any(p.is_infinite for p in points):
        raise AffineOnlyError("circle fits are affine-only")
    points = lift_points(points)
    r, basis_vecs = nullspace(FieldMatrix([basis.monomials(p) for p in points]))
    return Curve(basis, tuple(basis_vecs[0])), len(basis_vecs)


def transform(points: Iterable[PPoint], H: Sequence[Sequence]) -> list[PPoint]:
    """Apply a 3x3 projective transformation to homogeneous coordinates."""
    out = []
    for p in points:
        v = p.coords
        out.append(PPoint(*(sum((h * c for h, c in zip(row, v)), 0 * v[0]) for row in H)))
    return out


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _check_distinct(points: Sequence[PPoint]) -> None:
    seen: dict[PPoint, int] = {}
    for i, p in enumerate(points):
        if p in seen:
            raise DuplicatePointError(f"points {seen[p]} and {i} coincide")
        seen[p] = i


def enumerate_lines(points: Sequence[PPoint]) -> list[IncidentSet]:
    """All maximal collinear subsets of size >= 2, sorted by member tuple."""
    points = lift_points(points)
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    _check_distinct(points)
    covered = [[False] * n for _ in range(n)]
    found = []
    for i in range(n):
        for j in range(i + 1, n):
            if covered[i][j]:
                continue
            line = join(points[i], points[j])
            members = [k for k in range(n) if k in (i, j) or not _dot(line, points[k])]
            for a, b in itertools.combinations(members, 2):
                covered[a][b] = True
            found.append(IncidentSet(Curve(Basis.LINE, line), tuple(members)))
    found.sort(key=lambda s: s.members)
    return found


def _circle_through(rows: Sequence[Sequence[CycloElem]]) -> list[CycloElem]:
    # coefficients (a, b, c, d) with a w + b x + c y + d = 0 through three rows
    coeffs = []
    for col in range(4):
        minor = [[r[k] for k in range(4) if k != col] for r in rows]
        d = det_small(minor)
        coeffs.append(d if col % 2 == 0 else -d)
    return coeffs


def enumerate_circles(points: Sequence[PPoint]) -> list[IncidentSet]:
    """Maximal concyclic subsets of size >= 3, lines included as degenerate circles.

    Circles only pass through affine points; points at infinity only take
    part through lines.
    """
    points = lift_points(points)
    n = len(points)
    _check_distinct(points)
    found = [
        IncidentSet(s.curve, s.members, degenerate=True)
        for s in (enumerate_lines(points) if n >= 2 else [])
        if len(s) >= 3
    ]
    affine = [i for i in range(n) if not points[i].is_infinite]
    rows = {i: _circle_row(points[i]) for i in affine}
    covered: set[tuple[int, int, int]] = set()
    for s in found:
        covered.update(itertools.combinations(s.members, 3))
    circles = []
    for tri in itertools.combinations(affine, 3):
        if tri in covered:
            continue
        coeffs = _circle_through([rows[i] for i in tri])
        if not coeffs[0]:
            # collinear triple, already reported as a line
            covered.add(tri)
            continue
        members = [k for k in affine if k in tri or not sum(
            (a * v for a, v in zip(coeffs, rows[k]) if a and v), 0 * coeffs[0])]
        covered.update(itertools.combinations(members, 3))
        circles.append(IncidentSet(Curve(Basis.CIRCLE, tuple(coeffs)), tuple(members)))
    found.extend(circles)
    found.sort(key=lambda s: s.members)
    return found


class ConicCensus(NamedTuple):
    objects: list[IncidentSet]
    degenerate_subsets: int


def conic_census(points: Sequence[PPoint]) -> ConicCensus:
    """Conics through >= 5 points from nondegenerate 5-point fits.

    5-subsets whose fit has nullity >= 2 do not determine a conic and are
    only counted.
    """
    points = lift_points(points)
    n = len(points)
    if n < 5:
        raise ValueError("need at least five points")
    _check_distinct(points)
    monos = [Basis.CONIC.monomials(p) for p in points]
    covered: set[tuple[int, ...]] = set()
    degenerate = 0
    found = []
    for sub in itertools.combinations(range(n), 5):
        if sub in covered:
            continue
        _, vecs = nullspace(FieldMatrix([monos[i] for i in sub]))
        if len(vecs) != 1:
            degenerate += 1
            continue
        coeffs = vecs[0]
        members = [k for k in range(n) if k in sub or not sum(
            (a * v for a, v in zip(coeffs, monos[k]) if a and v), 0 * coeffs[0])]
        covered.update(itertools.combinations(members, 5))
        found.append(IncidentSet(Curve(Basis.CONIC, tuple(coeffs)), tuple(members)))
    found.sort(key=lambda s: s.members)
    return ConicCensus(found, degenerate)


def enumerate_conics(points: Sequence[PPoint]) -> list[IncidentSet]:
    return conic_census(points).objects

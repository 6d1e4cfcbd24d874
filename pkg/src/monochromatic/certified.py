"""Interval-certified circle incidences for configurations with irrational points.

Coordinates are mpmath intervals.  Incidences that hold because of how the
points were built are recorded exactly; every other incidence decision must
come from an interval that excludes zero, otherwise
:class:`UncertifiedError` is raised.
"""
from __future__ import annotations

import itertools
from contextlib import contextmanager
from dataclasses import dataclass, field
from mpmath import iv

from .chromatic import Color

__all__ = ["CertifiedConfig", "UncertifiedError", "certified_circles", "interval_sign", "precision"]


@contextmanager
def precision(dps: int):
    """Temporarily set the interval context's decimal precision."""
    saved = iv.dps
    iv.dps = dps
    try:
        yield
    finally:
        iv.dps = saved


class UncertifiedError(ArithmeticError):
    """Interval too wide to decide a sign; retry with more precision."""


def interval_sign(x) -> int:
    if x.a > 0:
        return 1
    if x.b < 0:
        return -1
    if x.a == 0 and x.b == 0:
        return 0
    raise UncertifiedError(f"cannot certify the sign of {x}")


def _det3(r):
    (a, b, c), (d, e, f), (g, h, i) = r
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


@dataclass
class CertifiedConfig:
    points: list[tuple]  # (x, y) pairs of mpmath intervals
    colors: list[Color]
    circles: list[frozenset] = field(default_factory=list)  # concyclic by construction
    dps: int = 50
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.points)

    def _row(self, k):
        x, y = self.points[k]
        return x * x + y * y, x, y

    def orientation(self, i, j, k) -> int:
        rows = [(self.points[t][0], self.points[t][1], iv.mpf(1)) for t in (i, j, k)]
        return interval_sign(_det3(rows))

    def cocircular_sign(self, i, j, k, l) -> int:
        w = [self._row(t) for t in (i, j, k, l)]
        # 4x4 determinant [w x y 1] expanded along the last column
        total = 0
        for idx in range(4):
            minor = [w[t] for t in range(4) if t != idx]
            term = _det3(minor)
            total = total + term if idx % 2 == 1 else total - term
        return interval_sign(total)

    def distinct(self) -> bool:
        for i, j in itertools.combinations(range(self.n), 2):
            (xi, yi), (xj, yj) = self.points[i], self.points[j]
            dx, dy = xi - xj, yi - yj
            if interval_sign(dx * dx + dy * dy) == 0:
                return False
        return True


def certified_circles(cfg: CertifiedConfig) -> list[tuple[tuple[int, ...], bool]]:
    """Maximal sets of >= 3 points on a common circle or line.

    Returns (members, is_line) pairs sorted by members.  Raises
    UncertifiedError when some incidence cannot be decided.
    """
    with precision(cfg.dps):
        return _certified_circles(cfg)


def _certified_circles(cfg: CertifiedConfig) -> list[tuple[tuple[int, ...], bool]]:
    n = cfg.n
    if not cfg.distinct():
        raise UncertifiedError("points are not certifiably distinct")
    recorded = [tuple(sorted(c)) for c in cfg.circles]
    covered: set[tuple[int, int, int]] = set()
    found: list[tuple[tuple[int, ...], bool]] = []
    for tri in itertools.combinations(range(n), 3):
        if tri in covered:
            continue
        is_line = cfg.orientation(*tri) == 0
        base = next((c for c in recorded if set(tri) <= set(c)), None)
        members = set(base) if base is not None else set(tri)
        for k in range(n):
            if k in members:
                continue
            if is_line:
                on = cfg.orientation(tri[0], tri[1], k) == 0
            else:
                on = cfg.cocircular_sign(*tri, k) == 0
            if on:
                members.add(k)
        ordered = tuple(sorted(members))
        covered.update(itertools.combinations(ordered, 3))
        found.append((ordered, is_line))
    return sorted(found)

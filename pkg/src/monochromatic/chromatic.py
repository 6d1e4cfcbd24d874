"""Two-colored configurations, t_{i,j} statistics and the counting bounds."""
from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactfield import parse_rational
from .incidence import (
    DuplicatePointError,
    IncidentSet,
    PPoint,
    enumerate_circles,
    enumerate_conics,
    enumerate_lines,
    lift_points,
)

__all__ = [
    "AbstractGeometry",
    "BoundsReport",
    "Color",
    "ColoredConfig",
    "GroupSystem",
    "InapplicableError",
    "IncidenceStats",
    "Kind",
    "abstract_mono",
    "abstract_stats",
    "bounds_report",
    "compute_stats",
    "corollary_predicate",
    "expected_mono",
    "lemma1_bound",
    "lemma1_exact",
    "mono_count",
    "near_pencil_expectation",
    "propk_bound",
    "stats_from_members",
]


class InapplicableError(ValueError):
    """A bound was requested outside its hypotheses."""


class Color(str, enum.Enum):
    BLUE = "blue"
    RED = "red"

    @property
    def other(self) -> "Color":
        return Color.RED if self is Color.BLUE else Color.BLUE


class Kind(enum.Enum):
    LINE = "line"
    CIRCLE = "circle"
    CONIC = "conic"

    @property
    def threshold(self) -> int:
        """Minimum number of set points on a counted object."""
        return {"line": 2, "circle": 3, "conic": 5}[self.value]

    @property
    def arity(self) -> int:
        """Points on a generic object of this kind through a cubic."""
        return {"line": 3, "circle": 4, "conic": 6}[self.value]


@dataclass(frozen=True)
class ColoredConfig:
    points: tuple[PPoint, ...]
    colors: tuple[Color, ...]
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if len(self.points) != len(self.colors):
            raise ValueError("one color per point required")
        pts = tuple(lift_points(list(self.points))) if self.points else ()
        seen: dict[PPoint, int] = {}
        for i, p in enumerate(pts):
            if p in seen:
                raise DuplicatePointError(f"points {seen[p]} and {i} coincide")
            seen[p] = i
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "colors", tuple(Color(c) for c in self.colors))

    @classmethod
    def monochrome(cls, points: Sequence[PPoint], color: Color = Color.BLUE, **meta) -> "ColoredConfig":
        return cls(tuple(points), (color,) * len(points), meta)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def conductor(self) -> int:
        return self.points[0].m if self.points else 1

    @property
    def blue(self) -> list[int]:
        return [i for i, c in enumerate(self.colors) if c is Color.BLUE]

    @property
    def red(self) -> list[int]:
        return [i for i, c in enumerate(self.colors) if c is Color.RED]

    def recolored(self, colors: Sequence[Color]) -> "ColoredConfig":
        return ColoredConfig(self.points, tuple(colors), dict(self.meta))

    def swapped(self) -> "ColoredConfig":
        return self.recolored([c.other for c in self.colors])


@dataclass(frozen=True)
class IncidenceStats:
    """Line census t[(i, j)] = number of lines with i blue and j red points."""

    b: int
    r: int
    t: dict

    @property
    def n(self) -> int:
        return self.b + self.r

    @property
    def t_total(self) -> dict[int, int]:
        out: Counter = Counter()
        for (i, j), c in self.t.items():
            out[i + j] += c
        return dict(sorted(out.items()))

    @property
    def max_line(self) -> int:
        return max((i + j for i, j in self.t), default=0)

    @property
    def mono_lines(self) -> int:
        return sum(c for (i, j), c in self.t.items() if i == 0 or j == 0)

    def get(self, i: int, j: int) -> int:
        return self.t.get((i, j), 0)

    def identities(self) -> tuple[bool, bool, bool]:
        blue_pairs = sum(math.comb(i, 2) * c for (i, j), c in self.t.items())
        red_pairs = sum(math.comb(j, 2) * c for (i, j), c in self.t.items())
        mixed = sum(i * j * c for (i, j), c in self.t.items())
        return (blue_pairs == math.comb(self.b, 2),
                red_pairs == math.comb(self.r, 2),
                mixed == self.b * self.r)

    def transposed(self) -> "IncidenceStats":
        return IncidenceStats(self.r, self.b, {(j, i): c for (i, j), c in self.t.items()})


def stats_from_members(member_sets: Iterable[Sequence], is_blue) -> Counter:
    t: Counter = Counter()
    for members in member_sets:
        i = sum(1 for k in members if is_blue(k))
        t[(i, len(members) - i)] += 1
    return t


def _finish_stats(b: int, r: int, t: Counter) -> IncidenceStats:
    stats = IncidenceStats(b, r, dict(sorted(t.items())))
    if not all(stats.identities()):
        raise AssertionError(f"pair-counting identities violated: {stats}")
    return stats


def compute_stats(cfg: ColoredConfig, lines: Sequence[IncidentSet] | None = None) -> IncidenceStats:
    if cfg.n < 2:
        raise ValueError("need at least two points")
    if lines is None:
        lines = enumerate_lines(cfg.points)
    t = stats_from_members((s.members for s in lines), lambda k: cfg.colors[k] is Color.BLUE)
    return _finish_stats(len(cfg.blue), len(cfg.red), t)


def _is_mono(members: Sequence[int], colors: Sequence[Color]) -> bool:
    return len({colors[k] for k in members}) == 1


def mono_count(cfg: ColoredConfig, kind: Kind | str) -> tuple[int, list[IncidentSet]]:
    kind = Kind(kind)
    if kind is Kind.LINE:
        objs = enumerate_lines(cfg.points)
    elif kind is Kind.CIRCLE:
        objs = enumerate_circles(cfg.points)
    else:
        objs = enumerate_conics(cfg.points)
    mono = [s for s in objs if len(s) >= kind.threshold and _is_mono(s.members, cfg.colors)]
    return len(mono), mono


# ---------------------------------------------------------------------------
# abstract incidence systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbstractGeometry:
    """Points 0..n-1 with explicit lines of size >= 3; other pairs are
    implicit two-point lines."""

    n: int
    explicit_lines: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        lines = tuple(tuple(sorted(set(l))) for l in self.explicit_lines)
        seen: set[tuple[int, int]] = set()
        for l in lines:
            if len(l) < 3:
                raise ValueError("explicit lines need at least three points")
            if l[0] < 0 or l[-1] >= self.n:
                raise ValueError("line mentions a point outside 0..n-1")
            for pair in itertools.combinations(l, 2):
                if pair in seen:
                    raise ValueError(f"pair {pair} lies on two explicit lines")
                seen.add(pair)
        object.__setattr__(self, "explicit_lines", lines)

    def lines(self) -> list[tuple[int, ...]]:
        covered = {pair for l in self.explicit_lines for pair in itertools.combinations(l, 2)}
        implicit = [pair for pair in itertools.combinations(range(self.n), 2) if pair not in covered]
        return sorted(list(self.explicit_lines) + implicit)


@dataclass(frozen=True)
class GroupSystem:
    """Incidences on Z_n from a cubic's group law.

    k points (3 for lines, 4 for circles, 6 for conics) lie on a common
    object exactly when their sum equals the kind's target.
    """

    modulus: int
    blue: frozenset
    red: frozenset
    line_target: int | None = None
    circle_target: int | None = None
    conic_target: int | None = None
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        n = self.modulus
        blue = frozenset(x % n for x in self.blue)
        red = frozenset(x % n for x in self.red)
        if blue & red:
            raise ValueError("color classes must be disjoint")
        object.__setattr__(self, "blue", blue)
        object.__setattr__(self, "red", red)
        for name in ("line_target", "circle_target", "conic_target"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, v % n)

    @property
    def elements(self) -> list[int]:
        return sorted(self.blue | self.red)

    def color(self, x: int) -> Color:
        return Color.BLUE if x in self.blue else Color.RED

    def target(self, kind: Kind) -> int:
        value = {Kind.LINE: self.line_target, Kind.CIRCLE: self.circle_target,
                 Kind.CONIC: self.conic_target}[kind]
        if value is None:
            raise ValueError(f"group system has no {kind.value} target")
        return value

    def objects(self, kind: Kind | str) -> list[tuple[int, ...]]:
        """Member sets of all objects through (arity-1)-subsets of the set.

        The object through a subset is completed by the unique element that
        makes the sum hit the target; it joins the members when it is a
        configuration point not already in the subset.  A completion equal
        to a subset member is a tangency and adds nothing.
        """
        kind = Kind(kind)
        target = self.target(kind)
        pts = set(self.elements)
        seen: set[tuple[int, ...]] = set()
        for sub in itertools.combinations(self.elements, kind.arity - 1):
            c = (target - sum(sub)) % self.modulus
            members = tuple(sorted(sub + (c,))) if c in pts and c not in sub else sub
            seen.add(members)
        return sorted(seen)


def abstract_stats(g: AbstractGeometry | GroupSystem, colors: Sequence[Color] | None = None) -> IncidenceStats:
    if isinstance(g, GroupSystem):
        lines = g.objects(Kind.LINE)
        t = stats_from_members(lines, lambda x: x in g.blue)
        return _finish_stats(len(g.blue), len(g.red), t)
    if colors is None or len(colors) != g.n:
        raise ValueError("abstract geometry needs one color per point")
    colors = [Color(c) for c in colors]
    t = stats_from_members(g.lines(), lambda k: colors[k] is Color.BLUE)
    return _finish_stats(colors.count(Color.BLUE), colors.count(Color.RED), t)


def abstract_mono(g: AbstractGeometry | GroupSystem, kind: Kind | str = Kind.LINE,
                  colors: Sequence[Color] | None = None) -> tuple[int, list[tuple[int, ...]]]:
    kind = Kind(kind)
    if isinstance(g, GroupSystem):
        objs = g.objects(kind)
        color_of = g.color
    else:
        if kind is not Kind.LINE:
            raise ValueError("abstract geometries only carry lines")
        if colors is None or len(colors) != g.n:
            raise ValueError("abstract geometry needs one color per point")
        objs = g.lines()
        cols = [Color(c) for c in colors]
        color_of = cols.__getitem__
    mono = [o for o in objs if len(o) >= kind.threshold and len({color_of(x) for x in o}) == 1]
    return len(mono), mono


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def lemma1_bound(stats: IncidenceStats) -> Fraction:
    """n^2/24 - n/6 + t_2/6, valid with at most three points per line."""
    if stats.max_line > 3:
        raise InapplicableError("lemma 1 needs at most 3 points per line")
    n = stats.n
    return Fraction(n * n, 24) - Fraction(n, 6) + Fraction(stats.t_total.get(2, 0), 6)


def lemma1_exact(stats: IncidenceStats) -> Fraction:
    """Closed form of the monochromatic line count with at most three points per line."""
    if stats.max_line > 3:
        raise InapplicableError("lemma 1 needs at most 3 points per line")
    b, r = stats.b, stats.r
    return Fraction(b * b - b * r + r * r - b - r
                    + 4 * stats.get(2, 0) + 4 * stats.get(0, 2) + stats.get(1, 1), 6)


def propk_bound(stats: IncidenceStats, k: int) -> Fraction:
    if k < 2:
        raise ValueError("k must be at least 2")
    b, r = stats.b, stats.r
    return Fraction(b * b - (k - 2) * b * r + r * r - stats.n, k * (k - 1))


def corollary_predicate(k: int, c) -> bool:
    """Whether a color fraction c in (0, 1/2] forces quadratically many
    monochromatic lines with at most k points per line: k c^2 - k c + 1 > 0."""
    c = parse_rational(c)
    if not 0 < c <= Fraction(1, 2):
        raise ValueError("c must lie in (0, 1/2]")
    return k * c * c - k * c + 1 > 0


@dataclass(frozen=True)
class BoundsReport:
    n: int
    b: int
    r: int
    k: int
    max_line: int
    mono_lines: int
    lemma1_bound: Fraction | None
    lemma1_exact: Fraction | None
    propk_bound: Fraction | None
    corollary: str
    melchior_lhs: int
    melchior_pass: bool | None
    langer_lhs: int
    langer_rhs: Fraction
    langer_pass: bool | None
    erdos_purdy_pass: bool | None

    def as_dict(self) -> dict:
        def fmt(v):
            if isinstance(v, Fraction):
                return str(v)
            return v
        return {k: fmt(v) for k, v in self.__dict__.items()}


def bounds_report(stats: IncidenceStats, k: int = 3) -> BoundsReport:
    n, t = stats.n, stats.t_total
    ml = stats.max_line
    small = ml <= 3
    collinear = ml == n
    if k == 3:
        corollary = "unconditional"
    elif stats.n and min(stats.b, stats.r) > 0:
        c = Fraction(min(stats.b, stats.r), n)
        corollary = "applies" if corollary_predicate(k, c) else "not-applicable"
    else:
        corollary = "applies"
    melchior = sum((3 - i) * c for i, c in t.items())
    langer_lhs = sum(i * c for i, c in t.items())
    langer_rhs = Fraction(n * (n + 3), 3)
    langer_ok = 3 * ml <= 2 * n
    ep_ok = 3 * ml > 2 * n and ml < n - 1
    return BoundsReport(
        n=n, b=stats.b, r=stats.r, k=k, max_line=ml, mono_lines=stats.mono_lines,
        lemma1_bound=lemma1_bound(stats) if small else None,
        lemma1_exact=lemma1_exact(stats) if small else None,
        propk_bound=propk_bound(stats, k) if ml <= k else None,
        corollary=corollary,
        melchior_lhs=melchior,
        melchior_pass=None if collinear else melchior >= 3,
        langer_lhs=langer_lhs, langer_rhs=langer_rhs,
        langer_pass=(langer_lhs >= langer_rhs) if langer_ok else None,
        erdos_purdy_pass=(t.get(2, 0) >= 2 * n - 6) if ep_ok else None,
    )


def _check_probability(p) -> Fraction:
    p = parse_rational(p)
    if not 0 <= p <= 1:
        raise ValueError("probability must lie in [0, 1]")
    return p


def expected_mono(stats: IncidenceStats, p) -> Fraction:
    """Expected number of monochromatic lines when each point is blue with probability p."""
    p = _check_probability(p)
    q = 1 - p
    return sum((c * (p ** i + q ** i) for i, c in stats.t_total.items()), Fraction(0))


def near_pencil_expectation(n: int, p) -> Fraction:
    if n < 3:
        raise ValueError("a near-pencil needs n >= 3")
    p = _check_probability(p)
    q = 1 - p
    return (n - 1) * (p * p + q * q) + p ** (n - 1) + q ** (n - 1)

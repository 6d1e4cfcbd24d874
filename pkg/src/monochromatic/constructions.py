"""Generators for the colored configuration families and group systems."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from mpmath import iv

from .certified import CertifiedConfig, precision
from .chromatic import AbstractGeometry, Color, ColoredConfig, GroupSystem
from .exactfield import CycloElem, trig_pair
from .incidence import PPoint, collinear, enumerate_lines, join, lift_points, meet

__all__ = [
    "GenSpec",
    "boroczky",
    "boroczky_geometry",
    "concentric",
    "ellipse_cfg",
    "gen_group_system",
    "generate",
    "near_pencil",
    "one_mono_line",
    "pentagon_ten",
    "perturbed_circle",
    "random_config",
    "triangle_medial",
    "two_circles",
]

B, R = Color.BLUE, Color.RED


def _unit(j: int, q: int, L: int | None = None) -> tuple[CycloElem, CycloElem]:
    c, s = trig_pair(j, q)
    if L is not None:
        c, s = c.lift(L), s.lift(L)
    return c, s


def near_pencil(n: int) -> ColoredConfig:
    """n - 1 points on the x-axis plus the apex (0, 1), all blue."""
    if n < 3:
        raise ValueError("near-pencil needs n >= 3")
    pts = [PPoint.affine(i, 0) for i in range(n - 1)] + [PPoint.affine(0, 1)]
    return ColoredConfig.monochrome(pts, family="near_pencil", params={"n": n})


def triangle_medial() -> ColoredConfig:
    """Vertices, edge midpoints and centroid of a triangle."""
    h = Fraction(1, 2)
    coords = [(0, 0), (1, 0), (0, 1), (h, 0), (h, h), (0, h), (Fraction(1, 3), Fraction(1, 3))]
    return ColoredConfig.monochrome([PPoint.affine(x, y) for x, y in coords],
                                    family="triangle_medial", params={})


def boroczky(k: int) -> ColoredConfig:
    """Regular k-gon (blue) and its k chord-direction points at infinity (red)."""
    if k < 3:
        raise ValueError("Boroczky configuration needs k >= 3")
    L = 4 * k
    verts = [_unit(i, k, L) for i in range(k)]
    blues = [PPoint.affine(c, s) for c, s in verts]
    by_class: dict[int, PPoint] = {}
    seen: dict[PPoint, int] = {}
    for i in range(k):
        for j in range(i + 1, k):
            d = PPoint.at_infinity(verts[j][0] - verts[i][0], verts[j][1] - verts[i][1])
            s = (i + j) % k
            if d in seen and seen[d] != s:
                raise AssertionError("chord directions of different classes coincide")
            seen[d] = s
            by_class.setdefault(s, d)
    if len(seen) != k or len(by_class) != k:
        raise AssertionError(f"expected {k} direction points, found {len(seen)}")
    reds = [by_class[s] for s in range(k)]
    return ColoredConfig(tuple(blues + reds), (B,) * k + (R,) * k,
                         {"family": "boroczky", "params": {"k": k}})


def boroczky_geometry(k: int) -> tuple[AbstractGeometry, list[Color]]:
    """The Boroczky incidences from the sum law on Z_k.

    Vertex i, vertex j and direction s are collinear iff i + j = s mod k
    (i = j being the tangent); all directions share the line at infinity.
    """
    chords = [(i, j, k + (i + j) % k) for i in range(k) for j in range(i + 1, k)]
    infinity = tuple(range(k, 2 * k))
    return AbstractGeometry(2 * k, tuple(chords) + (infinity,)), [B] * k + [R] * k


def one_mono_line(blues: Sequence[PPoint]) -> ColoredConfig:
    """Blue points plus, in red, the direction point of every blue-blue line.

    The line at infinity then carries all reds and is the only candidate
    monochromatic line.  Collinear blues (or fewer than three) give a
    degenerate instance, flagged in ``meta``.
    """
    blues = lift_points(list(blues))
    if len(blues) < 2:
        raise ValueError("need at least two blue points")
    if any(p.is_infinite for p in blues):
        raise ValueError("blue points must be affine")
    reds: list[PPoint] = []
    for i in range(len(blues)):
        for j in range(i + 1, len(blues)):
            a, b = blues[i], blues[j]
            d = PPoint.at_infinity(b.x - a.x, b.y - a.y)
            if d not in reds:
                reds.append(d)
    degenerate = len(blues) < 3 or all(
        collinear(blues[0], blues[1], p) for p in blues[2:])
    return ColoredConfig(tuple(blues + reds), (B,) * len(blues) + (R,) * len(reds),
                         {"family": "one_mono_line", "params": {"b": len(blues)},
                          "degenerate": degenerate})


def concentric(m: int) -> ColoredConfig:
    """Two concentric circles of radii 1 and 3, each carrying both colors."""
    if m < 3 or m % 2 == 0:
        raise ValueError("concentric needs odd m >= 3: for even m the blue and red "
                         "angle sets coincide on each circle")
    q = 4 * m
    pts, cols = [], []
    for k in range(m):
        for j, radius, color in ((4 * k, 1, B), (4 * k - 2 * m, 1, R),
                                 (4 * k - m, 3, R), (4 * k + m, 3, B)):
            c, s = _unit(j, q)
            pts.append(PPoint.affine(c * radius, s * radius))
            cols.append(color)
    return ColoredConfig(tuple(pts), tuple(cols), {"family": "concentric", "params": {"m": m}})


def ellipse_cfg(m: int) -> ColoredConfig:
    """2m points on x^2 + 4y^2 = 1 at angles 2 pi k/m - pi/4 (blue), + 3 pi/4 (red)."""
    if m < 5 or m % 2 == 0:
        raise ValueError("ellipse configuration needs odd m >= 5 (even m makes colors collide)")
    q = 8 * m
    pts, cols = [], []
    for color, shift in ((B, -m), (R, 3 * m)):
        for k in range(m):
            c, s = _unit(8 * k + shift, q)
            pts.append(PPoint.affine(c, s * Fraction(1, 2)))
            cols.append(color)
    return ColoredConfig(tuple(pts), tuple(cols), {"family": "ellipse", "params": {"m": m}})


def pentagon_ten() -> ColoredConfig:
    """Regular pentagon b1..b5 with five red points covering all ten blue pairs.

    r2 is the common direction of b4b5 and b1b3; the others are finite
    intersections of edge/diagonal pairs.
    """
    # b_j at 90 - 72 (j - 1) degrees, i.e. clockwise from the top
    b = [PPoint.affine(*_unit(5 - 4 * j, 20)) for j in range(5)]
    ln = lambda i, j: join(b[i - 1], b[j - 1])
    r1 = meet(ln(2, 4), ln(3, 5))
    r2 = meet(ln(4, 5), ln(1, 3))
    r3 = meet(ln(2, 5), ln(1, 4))
    r4 = meet(ln(1, 5), ln(2, 3))
    r5 = meet(ln(1, 2), ln(3, 4))
    return ColoredConfig(tuple(b + [r1, r2, r3, r4, r5]), (B,) * 5 + (R,) * 5,
                         {"family": "pentagon_ten", "params": {}})


def _rational_on_unit_circle(t: Fraction) -> tuple[Fraction, Fraction]:
    return (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)


def two_circles(n_b: int, n_r: int) -> ColoredConfig:
    """Blues on x^2 + y^2 = 1, reds on (x - 1)^2 + y^2 = 1.

    The circles meet at b = (1/2, sqrt3/2) (blue) and r = (1/2, -sqrt3/2) (red).
    """
    if n_b < 3 or n_r < 3:
        raise ValueError("two_circles needs at least three points of each color")
    c, s = _unit(1, 6)
    pts = [PPoint.affine(c, s)]
    pts += [PPoint.affine(*_rational_on_unit_circle(Fraction(t))) for t in range(2, n_b + 1)]
    pts.append(PPoint.affine(c, -s))
    for t in range(2, n_r + 1):
        x, y = _rational_on_unit_circle(Fraction(-t, 2))
        pts.append(PPoint.affine(1 + x, y))
    cols = (B,) * n_b + (R,) * n_r
    return ColoredConfig(tuple(pts), cols, {"family": "two_circles",
                                            "params": {"n_b": n_b, "n_r": n_r},
                                            "concyclic_classes": True})


# ---------------------------------------------------------------------------
# perturbed circle: the one non-exact family
# ---------------------------------------------------------------------------

def _circle_coeffs(p, q, r) -> tuple[Fraction, Fraction, Fraction]:
    """(D, E, F) with x^2 + y^2 + D x + E y + F = 0 through three rational points."""
    rows = [(x, y, 1, -(x * x + y * y)) for x, y in (p, q, r)]
    # Cramer on the 3x3 system
    def d3(m):
        (a, b, c), (d, e, f), (g, h, i) = m
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    A = [r_[:3] for r_ in rows]
    rhs = [r_[3] for r_ in rows]
    den = d3(A)
    out = []
    for col in range(3):
        M = [list(r_) for r_ in A]
        for k in range(3):
            M[k][col] = rhs[k]
        out.append(Fraction(d3(M)) / den)
    return tuple(out)


def _ivq(q: Fraction):
    q = Fraction(q)
    return iv.mpf(q.numerator) / q.denominator


def perturbed_circle(seed: int = 0, dps: int = 50) -> CertifiedConfig:
    """Five reds (one on the circle x^2 + y^2 = 25, four nudged off it) and
    ten blues where each red-triple circle meets a second circle B again
    near the point p = (24/5, 7/5)."""
    rng = random.Random(seed)
    F = Fraction
    r1 = (F(4), F(-3))
    base = [(F(3), F(4)), (F(-4), F(3)), (F(-5), F(0)), (F(0), F(-5))]
    reds = [r1]
    for x, y in base:
        dx = F(rng.choice((-1, 1)) * rng.randint(3, 12), 100)
        dy = F(rng.choice((-1, 1)) * rng.randint(3, 12), 100)
        reds.append((x + dx, y + dy))
    p = (F(24, 5), F(7, 5))
    # circle B: centre (33/5, -6/5), radius^2 = 10; passes through r1 and p
    cx, cy = F(33, 5), F(-6, 5)
    DB, EB, FB = -2 * cx, -2 * cy, cx * cx + cy * cy - 10
    assert r1[0] ** 2 + r1[1] ** 2 + DB * r1[0] + EB * r1[1] + FB == 0
    assert p[0] ** 2 + p[1] ** 2 + DB * p[0] + EB * p[1] + FB == 0

    with precision(dps):
        points = [(_ivq(x), _ivq(y)) for x, y in reds]
        circles = []
        blue_pts = []
        for tri in itertools.combinations(range(5), 3):
            D, E, Fc = _circle_coeffs(*(reds[i] for i in tri))
            a, b, c = D - DB, E - EB, Fc - FB  # radical line a x + b y + c = 0
            if 0 in tri:
                # r1 is on both circles: the other root is rational
                x0, y0 = r1
                dx, dy = -b, a
                t = -(2 * (x0 * dx + y0 * dy) + DB * dx + EB * dy) / (dx * dx + dy * dy)
                pt = (_ivq(x0 + t * dx), _ivq(y0 + t * dy))
            else:
                n2 = a * a + b * b
                x0, y0 = -a * c / n2, -b * c / n2
                dx, dy = -b, a
                A2 = dx * dx + dy * dy
                B1 = 2 * (x0 * dx + y0 * dy) + DB * dx + EB * dy
                C0 = x0 * x0 + y0 * y0 + DB * x0 + EB * y0 + FB
                disc = B1 * B1 - 4 * A2 * C0
                if disc <= 0:
                    raise ValueError("red-triple circle misses B; choose another seed")
                root = iv.sqrt(_ivq(disc))
                cands = []
                for sgn in (1, -1):
                    t = (_ivq(-B1) + sgn * root) / _ivq(2 * A2)
                    cands.append((_ivq(x0) + t * _ivq(dx), _ivq(y0) + t * _ivq(dy)))
                pt = min(cands, key=lambda q: (float(q[0].mid) - float(p[0])) ** 2
                         + (float(q[1].mid) - float(p[1])) ** 2)
            circles.append(frozenset(tri) | {5 + len(blue_pts)})
            blue_pts.append(pt)
        points.extend(blue_pts)
    colors = [R] * 5 + [B] * 10
    circles.append(frozenset([0] + list(range(5, 15))))  # circle B: r1 and all blues
    return CertifiedConfig(points, colors, circles, dps=dps,
                           meta={"family": "perturbed_circle", "params": {"seed": seed},
                                 "reds": [(str(x), str(y)) for x, y in reds]})


# ---------------------------------------------------------------------------
# group systems
# ---------------------------------------------------------------------------

def gen_group_system(family: str, **params) -> GroupSystem:
    if family == "cubic_coset":
        n = int(params["n"])
        if n < 6 or n % 2:
            raise ValueError("cubic_coset needs even n >= 6")
        return GroupSystem(n, frozenset(range(0, n, 2)), frozenset(range(1, n, 2)),
                           line_target=0, meta={"family": family, "params": {"n": n}})
    if family == "circular_cubic":
        m = int(params["m"])
        if m < 3 or m % 2 == 0:
            raise ValueError("circular_cubic needs odd m >= 3")
        N = 8 * m
        x0 = int(params.get("x0", 0))
        omega = int(params.get("omega", 4 * x0)) % N
        if (4 * x0 - omega) % N:
            raise ValueError("x0 must satisfy 4 x0 = omega")
        g, h = 8, m  # orders m and 8 in Z_8m
        blue = frozenset((k * g - h + x0) % N for k in range(m))
        red = frozenset((k * g + 3 * h + x0) % N for k in range(m))
        return GroupSystem(N, blue, red, circle_target=omega,
                           meta={"family": family, "params": {"m": m, "x0": x0, "omega": omega}})
    if family == "conic_coset":
        k = int(params["k"])
        if k < 1:
            raise ValueError("conic_coset needs k >= 1")
        N = 24 * k
        H = [24 * j for j in range(k)]
        return GroupSystem(N, frozenset((5 + h) % N for h in H), frozenset((-1 + h) % N for h in H),
                           line_target=0, conic_target=0,
                           meta={"family": family, "params": {"k": k}})
    raise ValueError(f"unknown group family {family!r}")


# ---------------------------------------------------------------------------
# random corpus
# ---------------------------------------------------------------------------

def random_config(n: int, seed: int, *, grid: int = 4, max_per_line: int | None = None,
                  color_seed: int | None = None, attempts: int = 10_000) -> ColoredConfig:
    """Seeded random non-collinear integer points with a random coloring."""
    rng = random.Random(seed)
    for _ in range(attempts):
        pts: list[PPoint] = []
        tries = 0
        while len(pts) < n and tries < 50 * n:
            tries += 1
            cand = PPoint.affine(rng.randint(-grid, grid), rng.randint(-grid, grid))
            if cand in pts:
                continue
            if max_per_line is not None and len(pts) >= 2:
                if max(len(s) for s in enumerate_lines(pts + [cand])) > max_per_line:
                    continue
            pts.append(cand)
        if len(pts) < n:
            continue
        if all(collinear(pts[0], pts[1], q) for q in pts[2:]):
            continue
        crng = random.Random(seed if color_seed is None else color_seed)
        cols = tuple(crng.choice((B, R)) for _ in range(n))
        return ColoredConfig(tuple(pts), cols, {"family": "random",
                                                "params": {"n": n, "grid": grid,
                                                           "max_per_line": max_per_line},
                                                "seed": seed})
    raise RuntimeError("could not sample a configuration")


@dataclass(frozen=True)
class GenSpec:
    family: str
    params: dict = field(default_factory=dict)
    coloring: tuple | None = None


_EMBEDDED = {
    "near_pencil": lambda p: near_pencil(int(p["n"])),
    "triangle_medial": lambda p: triangle_medial(),
    "boroczky": lambda p: boroczky(int(p["k"])),
    "concentric": lambda p: concentric(int(p["m"])),
    "ellipse": lambda p: ellipse_cfg(int(p["m"])),
    "pentagon_ten": lambda p: pentagon_ten(),
    "two_circles": lambda p: two_circles(int(p["n_b"]), int(p["n_r"])),
    "random": lambda p: random_config(int(p["n"]), int(p.get("seed", 0)),
                                      max_per_line=p.get("max_per_line")),
}
GROUP_FAMILIES = ("cubic_coset", "circular_cubic", "conic_coset")
FAMILIES = tuple(_EMBEDDED) + GROUP_FAMILIES + ("perturbed_circle",)


def generate(spec: GenSpec):
    """Dispatch a GenSpec to its generator; applies an explicit coloring if given."""
    if spec.family in GROUP_FAMILIES:
        return gen_group_system(spec.family, **spec.params)
    if spec.family == "perturbed_circle":
        return perturbed_circle(int(spec.params.get("seed", 0)))
    if spec.family not in _EMBEDDED:
        raise ValueError(f"unknown family {spec.family!r}")
    cfg = _EMBEDDED[spec.family](spec.params)
    if spec.coloring is not None:
        if len(spec.coloring) != cfg.n:
            raise ValueError(f"coloring has {len(spec.coloring)} entries for {cfg.n} points")
        cfg = cfg.recolored([Color(c) for c in spec.coloring])
    return cfg

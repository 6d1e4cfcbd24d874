"""Verifiers for the finite theorems and brute-force oracles over colorings."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from .certified import UncertifiedError, certified_circles
from .chromatic import (
    Color,
    ColoredConfig,
    Kind,
    abstract_mono,
    abstract_stats,
    bounds_report,
    compute_stats,
    expected_mono,
    lemma1_bound,
    lemma1_exact,
    mono_count,
    near_pencil_expectation,
    propk_bound,
)
from .constructions import (
    boroczky,
    boroczky_geometry,
    concentric,
    ellipse_cfg,
    gen_group_system,
    near_pencil,
    one_mono_line,
    pentagon_ten,
    perturbed_circle,
    random_config,
    triangle_medial,
    two_circles,
)
from .exactfield import FieldMatrix, nullspace, parse_rational
from .incidence import Basis, Curve, PPoint, collinear, enumerate_lines, fit_curve, join

__all__ = [
    "MAX_COLORING_N",
    "MAX_EXPECTATION_N",
    "SUITES",
    "Verdict",
    "corpus",
    "coloring_scan",
    "covering_property",
    "expectation_bruteforce",
    "matching_graph",
    "milicevic5",
    "min_coloring",
    "motzkin_rabin",
    "run_suite",
    "unique_line_structure",
]

MAX_COLORING_N = 24
MAX_EXPECTATION_N = 20
_CHUNK = 1 << 18


@dataclass
class Verdict:
    name: str
    applicable: bool
    passed: bool | None = None
    witness: Any = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        """True unless the check applied and failed."""
        return not self.applicable or bool(self.passed)

    def as_dict(self) -> dict:
        return {"name": self.name, "applicable": self.applicable, "passed": self.passed,
                "witness": self.witness, "detail": self.detail}


def _masks(member_sets: Sequence[Sequence[int]]) -> np.ndarray:
    return np.array([sum(1 << k for k in s) for s in member_sets], dtype=np.int64)


def coloring_scan(n: int, member_sets: Sequence[Sequence[int]], colorings: np.ndarray) -> np.ndarray:
    """Monochromatic object count for each coloring (bit k set = point k blue)."""
    counts = np.zeros(len(colorings), dtype=np.int64)
    for mask in _masks(member_sets):
        hit = colorings & mask
        counts += (hit == 0) | (hit == mask)
    return counts


def _line_sets(points: Sequence[PPoint]) -> list[tuple[int, ...]]:
    return [s.members for s in enumerate_lines(points)]


def _check_noncollinear(lines: Sequence[Sequence[int]], n: int) -> None:
    if len(lines) == 1 and len(lines[0]) == n:
        raise ValueError("points are collinear")


def min_coloring(points: Sequence[PPoint]) -> tuple[int, tuple[Color, ...]]:
    """Minimum monochromatic line count over all 2^n colorings, with a witness."""
    n = len(points)
    if n > MAX_COLORING_N:
        raise ValueError(f"exhaustive scan capped at n = {MAX_COLORING_N}")
    if n < 2:
        raise ValueError("need at least two points")
    lines = _line_sets(points)
    _check_noncollinear(lines, n)
    best, best_c = None, 0
    # swapping colors preserves the count, so fix the last point red
    total = 1 << (n - 1)
    for start in range(0, total, _CHUNK):
        cols = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        counts = coloring_scan(n, lines, cols)
        i = int(np.argmin(counts))
        if best is None or counts[i] < best:
            best, best_c = int(counts[i]), int(cols[i])
    witness = tuple(Color.BLUE if best_c >> k & 1 else Color.RED for k in range(n))
    return best, witness


def _popcount_sums(n: int, member_sets, total: int | None = None) -> list[int]:
    sums = [0] * (n + 1)
    total = 1 << n if total is None else total
    for start in range(0, total, _CHUNK):
        cols = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        counts = coloring_scan(n, member_sets, cols)
        pops = np.bitwise_count(cols).astype(np.int64)
        for k, v in enumerate(np.bincount(pops, weights=counts, minlength=n + 1)):
            sums[k] += int(v)
    return sums


def expectation_bruteforce(points: Sequence[PPoint], p) -> Fraction:
    """Expected monochromatic line count by summing over every coloring."""
    p = parse_rational(p)
    if not 0 <= p <= 1:
        raise ValueError("probability must lie in [0, 1]")
    n = len(points)
    if n > MAX_EXPECTATION_N:
        raise ValueError(f"expectation scan capped at n = {MAX_EXPECTATION_N}")
    sums = _popcount_sums(n, _line_sets(points))
    q = 1 - p
    return sum((Fraction(s) * p ** k * q ** (n - k) for k, s in enumerate(sums)), Fraction(0))


# ---------------------------------------------------------------------------
# theorem checks
# ---------------------------------------------------------------------------

def motzkin_rabin(cfg: ColoredConfig) -> Verdict:
    lines = enumerate_lines(cfg.points)
    if len(lines) == 1:
        return Verdict("motzkin_rabin", False, detail="points are collinear")
    count, mono = mono_count(cfg, Kind.LINE)
    witness = list(mono[0].members) if mono else None
    return Verdict("motzkin_rabin", True, count >= 1, witness, f"{count} monochromatic lines")


def unique_line_structure(cfg: ColoredConfig) -> Verdict:
    count, mono = mono_count(cfg, Kind.LINE)
    if count != 1:
        return Verdict("unique_line_structure", False, detail=f"{count} monochromatic lines")
    on = set(mono[0].members)
    off = set(range(cfg.n)) - on
    line_colors = {cfg.colors[k] for k in on}
    off_colors = {cfg.colors[k] for k in off}
    passed = len(line_colors) == 1 and (not off or off_colors == {next(iter(line_colors)).other})
    return Verdict("unique_line_structure", True, passed, sorted(on),
                   "color classes are S on the line and S off it" if passed else
                   "color classes do not split along the line")


def _blue_pair_lines(cfg: ColoredConfig):
    blues = cfg.blue
    for a, b in itertools.combinations(blues, 2):
        line = join(cfg.points[a], cfg.points[b])
        on = [k for k in range(cfg.n) if k in (a, b) or not _on_line(line, cfg.points[k])]
        yield (a, b), on


def _on_line(line, p: PPoint):
    a, b, c = line
    return a * p.x + b * p.y + c * p.z


def covering_property(cfg: ColoredConfig) -> Verdict:
    if len(cfg.blue) < 2:
        return Verdict("covering_property", False, detail="fewer than two blue points")
    uncovered = [list(pair) for pair, on in _blue_pair_lines(cfg)
                 if not any(cfg.colors[k] is Color.RED for k in on)]
    return Verdict("covering_property", True, not uncovered, uncovered or None,
                   f"{len(uncovered)} blue pairs without a red point")


def _cubic_system(points: Sequence[PPoint]) -> FieldMatrix:
    return FieldMatrix([Basis.CUBIC.monomials(p) for p in points])


def milicevic5(cfg: ColoredConfig) -> Verdict:
    """5 blue + 5 red with the covering property must lie on one cubic."""
    name = "milicevic5"
    blue, red = cfg.blue, cfg.red
    r, basis = nullspace(_cubic_system(cfg.points))
    info = {"rank": r}
    if len(blue) != 5 or len(red) != 5:
        return Verdict(name, False, witness=info, detail="needs exactly 5 blue and 5 red points")
    pts = cfg.points
    if any(collinear(pts[a], pts[b], pts[c]) for a, b, c in itertools.combinations(blue, 3)):
        return Verdict(name, False, witness=info, detail="three blue points are collinear")
    cover = covering_property(cfg)
    if not cover.passed:
        return Verdict(name, False, witness=info, detail="covering property fails")
    census = {}
    for rr in red:
        groups: list[set[int]] = []
        for b in blue:
            if not any(b in g for g in groups):
                line = join(pts[rr], pts[b])
                groups.append({c for c in blue if not _on_line(line, pts[c])})
        census[rr] = sorted(len(g) for g in groups)
    info["red_line_census"] = {str(k): v for k, v in census.items()}
    passed = r <= 9
    if passed:
        info["cubic"] = [c.to_json() for c in Curve(Basis.CUBIC, tuple(basis[0])).coeffs]
    return Verdict(name, True, passed, info,
                   "all 10 points on a cubic" if passed else "no cubic through all 10 points")


def matching_graph(cfg: ColoredConfig) -> Verdict:
    """Bipartite blue-red graph: b ~ r when line br has no other blue point."""
    name = "matching_graph"
    blue, red = cfg.blue, cfg.red
    n = len(blue)
    if n != len(red) or n < 4:
        return Verdict(name, False, detail="needs |B| = |R| >= 4")
    if n >= 6:
        conic, nullity = fit_curve([cfg.points[b] for b in blue[:5]], Basis.CONIC)
        if nullity != 1 or any(conic.evaluate(cfg.points[b]) for b in blue[5:]):
            return Verdict(name, False, detail="blue points are not on a conic")
    if not covering_property(cfg).passed:
        return Verdict(name, False, detail="covering property fails")
    pts = cfg.points
    edges = []
    for b in blue:
        for r in red:
            line = join(pts[b], pts[r])
            if not any(c != b and not _on_line(line, pts[c]) for c in blue):
                edges.append((b, r))
    bdeg = {b: sum(1 for e in edges if e[0] == b) for b in blue}
    rdeg = {r: sum(1 for e in edges if e[1] == r) for r in red}
    ok = all(d <= 1 for d in bdeg.values())
    if n % 2:
        ok = ok and all(d == 1 for d in bdeg.values()) and all(d == 1 for d in rdeg.values())
        shape = "perfect matching"
    else:
        degs = sorted(rdeg.values())
        ok = ok and degs == [0] * (n // 2) + [2] * (n // 2)
        shape = f"{n // 2} reds of degree 2, {n // 2} of degree 0"
    return Verdict(name, True, ok, {"edges": [list(e) for e in edges],
                                    "red_degrees": {str(k): v for k, v in rdeg.items()}},
                   shape if ok else "degree law violated")


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

def corpus(max_n: int | None = None, random_per_n: int = 3) -> list[tuple[str, ColoredConfig]]:
    """Deterministic list of named embedded configurations."""
    out: list[tuple[str, ColoredConfig]] = []
    out += [(f"near_pencil({n})", near_pencil(n)) for n in range(3, 13)]
    out.append(("triangle_medial", triangle_medial()))
    out += [(f"boroczky({k})", boroczky(k)) for k in range(3, 7)]
    out.append(("pentagon_ten", pentagon_ten()))
    out.append(("one_mono_line(4)", one_mono_line(
        [PPoint.affine(0, 0), PPoint.affine(3, 1), PPoint.affine(1, 4), PPoint.affine(-2, 5)])))
    out.append(("one_mono_line(3)", one_mono_line(
        [PPoint.affine(0, 0), PPoint.affine(1, 0), PPoint.affine(0, 1)])))
    out += [("two_circles(3,3)", two_circles(3, 3)), ("two_circles(4,4)", two_circles(4, 4))]
    out.append(("concentric(3)", concentric(3)))
    out.append(("ellipse(5)", ellipse_cfg(5)))
    for n in range(4, 13):
        for s in range(random_per_n):
            out.append((f"random(n={n},seed={s})", random_config(n, 1000 * n + s)))
    for n in range(4, 11):
        out.append((f"random3(n={n})", random_config(n, 7000 + n, grid=6, max_per_line=3)))
    out += [(f"line_heavy({n})", _line_heavy(n)) for n in (10, 11, 12)]
    if max_n is not None:
        out = [(name, c) for name, c in out if c.n <= max_n]
    return out


def _line_heavy(n: int) -> ColoredConfig:
    """n - 3 collinear points plus three off the line: more than 2n/3 on a
    line without being a near-pencil (n >= 10)."""
    pts = [PPoint.affine(i, 0) for i in range(n - 3)]
    pts += [PPoint.affine(0, 1), PPoint.affine(2, 3), PPoint.affine(5, -2)]
    cols = [Color.BLUE if i % 2 else Color.RED for i in range(n)]
    return ColoredConfig(tuple(pts), tuple(cols), {"family": "line_heavy", "params": {"n": n}})


def random_corpus(n: int, count: int = 50) -> list[ColoredConfig]:
    """Seeded random non-collinear configurations that are not near-pencils."""
    out, seed = [], 0
    while len(out) < count:
        cfg = random_config(n, 50_000 + 100 * n + seed)
        seed += 1
        if compute_stats(cfg).max_line < n - 1:
            out.append(cfg)
    return out


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

_P_VALUES = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(2, 3), Fraction(1))


def _suite_mr() -> list[Verdict]:
    out = [motzkin_rabin(boroczky(5))]
    for name, cfg in corpus(max_n=9):
        lines = _line_sets(cfg.points)
        n = cfg.n
        cols = np.arange(1 << n, dtype=np.int64)
        counts = coloring_scan(n, lines, cols)
        lo = int(counts.min())
        out.append(Verdict(f"motzkin_rabin_exhaustive[{name}]", True, lo >= 1, lo,
                           f"min over {1 << n} colorings = {lo}"))
        # exactly one monochromatic line forces the line / off-line split
        bad = 0
        for c in cols[counts == 1]:
            colors = [Color.BLUE if int(c) >> k & 1 else Color.RED for k in range(n)]
            if not unique_line_structure(cfg.recolored(colors)).passed:
                bad += 1
        out.append(Verdict(f"unique_line_structure[{name}]", True, bad == 0,
                           int((counts == 1).sum()), f"{bad} violations"))
    m, _ = min_coloring(boroczky(5).points)
    out.append(Verdict("min_coloring[boroczky(5)]", True, m == 1, m))
    return out


def _suite_lemma1() -> list[Verdict]:
    out = []
    for name, cfg in corpus():
        st = compute_stats(cfg)
        if st.max_line > 3:
            continue
        mono = mono_count(cfg, Kind.LINE)[0]
        exact, bound = lemma1_exact(st), lemma1_bound(st)
        out.append(Verdict(f"lemma1[{name}]", True, mono == exact and mono >= bound,
                           {"mono": mono, "exact": str(exact), "bound": str(bound)}))
    g = gen_group_system("cubic_coset", n=12)
    st = abstract_stats(g)
    count, objs = abstract_mono(g, Kind.LINE)
    all_blue = all(x in g.blue for o in objs for x in o)
    oracle = _cubic_coset_oracle(12)
    out.append(Verdict("cubic_coset(12)", True,
                       count == 7 and all_blue and oracle == 7 and lemma1_exact(st) == 7
                       and propk_bound(st, 3) == 4 <= count,
                       {"mono": count, "oracle": oracle, "propk": str(propk_bound(st, 3))}))
    return out


def _cubic_coset_oracle(n: int) -> int:
    # brute force over Z_n: blue pairs whose line completion is blue or tangent
    blue = set(range(0, n, 2))
    lines = set()
    for a, b in itertools.combinations(range(n), 2):
        c = (-a - b) % n
        lines.add(frozenset((a, b, c)) if c not in (a, b) else frozenset((a, b)))
    return sum(1 for l in lines if l <= blue or not (l & blue))


def _suite_bounds() -> list[Verdict]:
    out = []
    for name, cfg in corpus():
        st = compute_stats(cfg)
        rep = bounds_report(st, k=max(3, st.max_line))
        checks = [rep.melchior_pass, rep.langer_pass, rep.erdos_purdy_pass]
        mono = mono_count(cfg, Kind.LINE)[0]
        prop_ok = rep.propk_bound is None or mono >= rep.propk_bound
        passed = all(c is not False for c in checks) and prop_ok
        out.append(Verdict(f"bounds[{name}]", rep.melchior_pass is not None, passed,
                           {"melchior": rep.melchior_lhs, "langer": rep.langer_pass,
                            "erdos_purdy": rep.erdos_purdy_pass}))
    return out


def _suite_expectation() -> list[Verdict]:
    out = []
    for name, cfg in corpus(max_n=12):
        st = compute_stats(cfg)
        sums = _popcount_sums(cfg.n, _line_sets(cfg.points))
        ok = True
        for p in _P_VALUES:
            q = 1 - p
            brute = sum((Fraction(s) * p ** k * q ** (cfg.n - k) for k, s in enumerate(sums)),
                        Fraction(0))
            ok = ok and brute == expected_mono(st, p)
        out.append(Verdict(f"expectation_oracle[{name}]", True, ok))
    tm = expected_mono(compute_stats(triangle_medial()), Fraction(1, 2))
    out.append(Verdict("expectation[triangle_medial]", True, tm == 3, str(tm)))
    npx = expected_mono(compute_stats(near_pencil(10)), Fraction(1, 2))
    out.append(Verdict("expectation[near_pencil(10)]", True,
                       npx == Fraction(1153, 256) == near_pencil_expectation(10, Fraction(1, 2)),
                       str(npx)))
    seven = near_pencil_expectation(7, Fraction(1, 2))
    out.append(Verdict("n=7 exception", True, tm < seven and seven == 3 + Fraction(1, 32),
                       {"triangle_medial": str(tm), "near_pencil(7)": str(seven)}))
    for n in (10, 11, 12):
        others = [c for name, c in corpus() if c.n == n and not name.startswith("near_pencil")]
        others += random_corpus(n)
        stats = [compute_stats(c) for c in others]
        stats = [s for s in stats if s.max_line < n - 1]
        for p in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            base = expected_mono(compute_stats(near_pencil(n)), p)
            worst = min(expected_mono(s, p) for s in stats)
            out.append(Verdict(f"near_pencil_minimal[n={n},p={p}]", True, base < worst,
                               {"near_pencil": str(base), "corpus_min": str(worst),
                                "corpus_size": len(stats)}))
    return out


def _no_mono_circles(name: str, cfg: ColoredConfig) -> Verdict:
    count, _ = mono_count(cfg, Kind.CIRCLE)
    return Verdict(f"no_mono_circle[{name}]", True, count == 0, count)


def _suite_circles() -> list[Verdict]:
    out = [
        _no_mono_circles("ellipse(9)", ellipse_cfg(9)),
        _no_mono_circles("concentric(3)", concentric(3)),
        _no_mono_circles("concentric(5)", concentric(5)),
        _no_mono_circles("two_circles(4,4)", two_circles(4, 4)),
    ]
    for m in (3, 5, 7):
        count, _ = abstract_mono(gen_group_system("circular_cubic", m=m), Kind.CIRCLE)
        out.append(Verdict(f"no_mono_circle[circular_cubic({m})]", True, count == 0, count))
    out.append(perturbed_circle_verdict())
    return out


def perturbed_circle_verdict(seed: int = 0) -> Verdict:
    pc = perturbed_circle(seed)
    try:
        circles = certified_circles(pc)
        reds = [k for k, c in enumerate(pc.colors) if c is Color.RED]
        mono = [m for m, _ in circles if len({pc.colors[k] for k in m}) == 1]
        red_collinear = any(is_line and set(reds) <= set(m) for m, is_line in circles)
        red_concyclic = any(set(reds) <= set(m) for m, _ in circles)
    except UncertifiedError as exc:
        return Verdict("perturbed_circle", True, False, None, f"uncertified: {exc}")
    ok = not mono and not red_collinear and not red_concyclic
    return Verdict("perturbed_circle", True, ok,
                   {"circles": len(circles), "mono": len(mono)},
                   "certified: no monochromatic circle; reds neither collinear nor concyclic")


def _suite_conics() -> list[Verdict]:
    out = []
    for k in (5, 6, 7):
        g = gen_group_system("conic_coset", k=k)
        count, _ = abstract_mono(g, Kind.CONIC)
        sizes = sorted({len(o) for o in g.objects(Kind.CONIC)})
        out.append(Verdict(f"no_mono_conic[conic_coset({k})]",
                           True, count == 0 and len(g.blue) == len(g.red) == k,
                           {"mono": count, "object_sizes": sizes}))
    return out


def _perturbed_pentagon() -> ColoredConfig:
    cfg = pentagon_ten()
    r5 = cfg.points[9]
    moved = PPoint.affine(r5.x + Fraction(1, 7), r5.y)
    return ColoredConfig(cfg.points[:9] + (moved,), cfg.colors, {"family": "pentagon_ten_perturbed"})


def _suite_milicevic() -> list[Verdict]:
    good = milicevic5(pentagon_ten())
    bad = milicevic5(_perturbed_pentagon())
    cover = covering_property(pentagon_ten())
    return [
        good,
        cover,
        Verdict("milicevic5[perturbed]", True, bad.passed is not True and bad.witness["rank"] == 10,
                bad.witness, "perturbed red point: " + bad.detail),
    ]


def _suite_lemma3() -> list[Verdict]:
    out = []
    for k in range(4, 10):
        v = matching_graph(boroczky(k))
        v.name = f"matching_graph[boroczky({k})]"
        out.append(v)
    for k in range(4, 9):
        v = covering_property(boroczky(k))
        v.name = f"covering[boroczky({k})]"
        out.append(v)
        geo, cols = boroczky_geometry(k)
        am = abstract_mono(geo, Kind.LINE, cols)[0]
        em = mono_count(boroczky(k), Kind.LINE)[0]
        out.append(Verdict(f"boroczky_group_agrees[{k}]", True, am == em == 1, {"abstract": am,
                                                                                "embedded": em}))
    return out


SUITES: dict[str, Callable[[], list[Verdict]]] = {
    "mr": _suite_mr,
    "lemma1": _suite_lemma1,
    "bounds": _suite_bounds,
    "expectation": _suite_expectation,
    "circles": _suite_circles,
    "conics": _suite_conics,
    "milicevic": _suite_milicevic,
    "lemma3": _suite_lemma3,
}


def run_suite(name: str) -> list[Verdict]:
    if name == "all":
        return [v for key in SUITES for v in SUITES[key]()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    return SUITES[name]()

"""Command-line front end: generate, analyze, verify and render configurations."""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Any

from mpmath import iv, libmp

from .certified import CertifiedConfig, UncertifiedError, certified_circles, precision
from .chromatic import (
    Color,
    ColoredConfig,
    GroupSystem,
    IncidenceStats,
    InapplicableError,
    Kind,
    abstract_mono,
    abstract_stats,
    bounds_report,
    compute_stats,
    expected_mono,
    mono_count,
)
from .constructions import FAMILIES, GROUP_FAMILIES, GenSpec, generate
from .exactfield import CycloElem, is_real, parse_rational
from .incidence import Basis, PPoint, enumerate_circles, enumerate_lines
from .theorems import SUITES, covering_property, motzkin_rabin, run_suite, unique_line_structure

__all__ = ["DocumentError", "dump_document", "load_document", "main", "render_svg", "report"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CIRCLE_CAP = 24
CONIC_CAP = 14


class DocumentError(ValueError):
    """Malformed or invalid document."""


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

def _ser(e: CycloElem, m: int):
    if e.is_rational():
        return str(e.to_fraction())
    return e.lift(m).to_json()


def _meta_block(meta: dict) -> dict:
    out = {"family": meta.get("family"), "params": meta.get("params", {}),
           "seed": meta.get("seed")}
    for k in sorted(meta):
        if k not in out:
            out[k] = meta[k]
    return out


def _iv_pair(x) -> list[str]:
    return [str(Fraction(*libmp.to_rational(end))) for end in x._mpi_]


def _iv_from(pair) -> Any:
    lo, hi = (Fraction(parse_rational(s)) for s in pair)
    return iv.mpf([iv.mpf(lo.numerator) / lo.denominator, iv.mpf(hi.numerator) / hi.denominator])


def to_document(obj) -> dict:
    if isinstance(obj, ColoredConfig):
        m = obj.conductor
        return {
            "field": {"conductor": m},
            "projective": any(p.is_infinite for p in obj.points),
            "points": [{"coords": [_ser(c, m) for c in p.coords], "color": col.value}
                       for p, col in zip(obj.points, obj.colors)],
            "meta": _meta_block(obj.meta),
        }
    if isinstance(obj, GroupSystem):
        return {
            "modulus": obj.modulus,
            "blue": sorted(obj.blue),
            "red": sorted(obj.red),
            "targets": {"line": obj.line_target, "circle": obj.circle_target,
                        "conic": obj.conic_target},
            "meta": _meta_block(obj.meta),
        }
    if isinstance(obj, CertifiedConfig):
        return {
            "certified": {"dps": obj.dps},
            "points": [{"x": _iv_pair(x), "y": _iv_pair(y), "color": c.value}
                       for (x, y), c in zip(obj.points, obj.colors)],
            "circles": sorted(sorted(c) for c in obj.circles),
            "meta": _meta_block(obj.meta),
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_document(doc: dict):
    try:
        if "modulus" in doc:
            t = doc["targets"]
            return GroupSystem(int(doc["modulus"]), frozenset(doc["blue"]), frozenset(doc["red"]),
                               t.get("line"), t.get("circle"), t.get("conic"), dict(doc["meta"]))
        if "certified" in doc:
            dps = int(doc["certified"]["dps"])
            with precision(dps):
                pts = [(_iv_from(p["x"]), _iv_from(p["y"])) for p in doc["points"]]
            return CertifiedConfig(pts, [Color(p["color"]) for p in doc["points"]],
                                   [frozenset(c) for c in doc["circles"]], dps, dict(doc["meta"]))
        m = int(doc["field"]["conductor"])
        pts, cols = [], []
        for entry in doc["points"]:
            coords = [CycloElem.from_json(c).lift(m) for c in entry["coords"]]
            if len(coords) != 3:
                raise DocumentError("a point needs three homogeneous coordinates")
            if not all(is_real(c) for c in coords):
                raise DocumentError("coordinates must be real")
            pts.append(PPoint(*coords))
            cols.append(Color(entry["color"]))
        return ColoredConfig(tuple(pts), tuple(cols), dict(doc["meta"]))
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError, ArithmeticError) as exc:
        raise DocumentError(f"invalid document: {exc}") from exc


def dump_document(obj) -> str:
    return json.dumps(to_document(obj), indent=2) + "\n"


def load_document(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    return from_document(doc)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _exact(v):
    """Render numbers as exact rational strings, recursively."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _exact(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_exact(x) for x in v]
    return v


def _stats_block(st: IncidenceStats) -> dict:
    return {
        "n": st.n, "b": st.b, "r": st.r, "max_line": st.max_line,
        "t": [[i, j, c] for (i, j), c in sorted(st.t.items())],
        "t_total": {str(i): c for i, c in sorted(st.t_total.items())},
    }


def _common(st: IncidenceStats, p: Fraction, k: int) -> dict:
    return {
        "stats": _stats_block(st),
        "bounds": bounds_report(st, k).as_dict(),
        "expectation": {"p": p, "value": expected_mono(st, p)},
    }


def report(obj, p=Fraction(1, 2), k: int = 3) -> dict:
    p = parse_rational(p)
    if isinstance(obj, GroupSystem):
        targets = {Kind.LINE: obj.line_target, Kind.CIRCLE: obj.circle_target,
                   Kind.CONIC: obj.conic_target}
        mono = {kind.value: (abstract_mono(obj, kind)[0] if targets[kind] is not None else None)
                for kind in Kind}
        out = {"document": {"kind": "group", "family": obj.meta.get("family"),
                            "modulus": obj.modulus},
               "mono": mono}
        if obj.line_target is not None:
            out.update(_common(abstract_stats(obj), p, k))
        out["verdicts"] = []
    elif isinstance(obj, CertifiedConfig):
        try:
            circles = certified_circles(obj)
        except UncertifiedError as exc:
            raise DocumentError(f"cannot certify incidences: {exc}") from exc
        mono = [m for m, _ in circles if len({obj.colors[i] for i in m}) == 1]
        out = {"document": {"kind": "certified", "family": obj.meta.get("family"), "n": obj.n,
                            "dps": obj.dps},
               "mono": {"circle": len(mono)},
               "certified": {"circles": len(circles),
                             "lines": sum(1 for _, is_line in circles if is_line)}}
    else:
        st = compute_stats(obj)
        mono = {"line": mono_count(obj, Kind.LINE)[0],
                "circle": mono_count(obj, Kind.CIRCLE)[0] if obj.n <= CIRCLE_CAP else None,
                "conic": mono_count(obj, Kind.CONIC)[0] if obj.n <= CONIC_CAP else None}
        out = {"document": {"kind": "config", "family": obj.meta.get("family"), "n": obj.n,
                            "conductor": obj.conductor},
               "mono": mono}
        out.update(_common(st, p, k))
        out["verdicts"] = [v.as_dict() for v in
                           (motzkin_rabin(obj), unique_line_structure(obj), covering_property(obj))]
    return _exact(out)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

_FILL = {Color.BLUE: "#1f5fbf", Color.RED: "#c8322d"}


def _perspective(pts: list[tuple[float, float, float]]):
    """A projective chart in which every point is affine, as well spread as possible."""
    vs = [(x, y, z) if z >= 0 else (-x, -y, -z) for x, y, z in pts]
    affine = [(x / z, y / z) for x, y, z in vs if z > 1e-12]
    span = max([1.0] + [math.hypot(x, y) for x, y in affine])
    best, best_h = -1.0, None
    for step in range(24):
        th = math.pi * step / 24
        for lam in (0.25, 0.5, 1.0):
            a, b, c = math.cos(th) * lam / span, math.sin(th) * lam / span, 1.0
            ws = [(a * x + b * y + c * z) / math.sqrt(x * x + y * y + z * z) for x, y, z in vs]
            for sgn in (1, -1):
                score = min(sgn * w for w in ws)
                if score > best:
                    best, best_h = score, (sgn * a, sgn * b, sgn * c)
    if best <= 1e-9:
        raise DocumentError("no perspective chart shows every point")
    a, b, c = best_h
    return [(x / (a * x + b * y + c * z), y / (a * x + b * y + c * z)) for x, y, z in vs]


def render_svg(cfg: ColoredConfig, chart: str = "perspective", digits: int = 6,
               size: int = 480, circles: bool = False) -> str:
    if not isinstance(cfg, ColoredConfig):
        raise DocumentError("only embedded point configurations can be drawn")
    raw = [p.to_float() for p in cfg.points]
    if chart == "perspective":
        xy = _perspective(raw)
        margin_pts: dict[int, tuple[float, float]] = {}
    elif chart == "margin":
        xy = [(x / z, y / z) if z else None for x, y, z in raw]
        margin_pts = {i: (x, y) for i, (x, y, z) in enumerate(raw) if not z}
    else:
        raise ValueError(f"unknown chart {chart!r}")
    finite = [q for q in xy if q is not None] or [(0.0, 0.0)]
    xmin, xmax = min(q[0] for q in finite), max(q[0] for q in finite)
    ymin, ymax = min(q[1] for q in finite), max(q[1] for q in finite)
    scale = 0.7 * size / max(xmax - xmin, ymax - ymin, 1e-9)
    cx, cy = (xmin + xmax) / 2, (ymin + ymax) / 2

    def to_px(x, y):
        return size / 2 + scale * (x - cx), size / 2 - scale * (y - cy)

    fmt = f"{{:.{digits}f}}"

    def num(v):
        return fmt.format(v)

    px: dict[int, tuple[float, float]] = {}
    for i, q in enumerate(xy):
        if q is not None:
            px[i] = to_px(*q)
    r_border = 0.47 * size
    for i, (dx, dy) in margin_pts.items():
        if dy < 0 or (dy == 0 and dx < 0):
            dx, dy = -dx, -dy
        norm = math.hypot(dx, dy)
        px[i] = (size / 2 + r_border * dx / norm, size / 2 - r_border * dy / norm)

    body: list[str] = []
    for line in enumerate_lines(cfg.points):
        members = [i for i in line.members if chart == "perspective" or i not in margin_pts]
        if len(members) < 2:
            continue
        xs = sorted(px[i] for i in members)
        (x0, y0), (x1, y1) = xs[0], xs[-1]
        if (x0, y0) == (x1, y1):
            continue
        if abs(x1 - x0) < 1e-12:
            (x0, y0), (x1, y1) = min(xs, key=lambda t: t[1]), max(xs, key=lambda t: t[1])
        ex, ey = 0.08 * (x1 - x0), 0.08 * (y1 - y0)
        body.append(f'<line x1="{num(x0 - ex)}" y1="{num(y0 - ey)}" x2="{num(x1 + ex)}" '
                    f'y2="{num(y1 + ey)}" stroke="#888888" stroke-width="1"/>')
    if circles and chart == "margin":
        for obj in enumerate_circles(cfg.points):
            if obj.curve.basis is not Basis.CIRCLE or len(obj.members) < 4:
                continue
            a, d, e, f = (float(c) for c in obj.curve.coeffs)
            ox, oy = -d / (2 * a), -e / (2 * a)
            rad = math.sqrt(max(ox * ox + oy * oy - f / a, 0.0))
            sx, sy = to_px(ox, oy)
            body.append(f'<circle cx="{num(sx)}" cy="{num(sy)}" r="{num(rad * scale)}" '
                        f'fill="none" stroke="#bbbbbb" stroke-width="1"/>')
    if margin_pts:
        body.append(f'<circle cx="{num(size / 2)}" cy="{num(size / 2)}" r="{num(r_border)}" '
                    f'fill="none" stroke="#cccccc" stroke-dasharray="4 4"/>')
    for i in range(cfg.n):
        x, y = px[i]
        body.append(f'<circle cx="{num(x)}" cy="{num(y)}" r="5" fill="{_FILL[cfg.colors[i]]}"/>')
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">')
    return "\n".join([head, f'<rect width="{size}" height="{size}" fill="white"/>', *body,
                      "</svg>"]) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

_PARAM_FLAGS = ("n", "k", "m", "n_b", "n_r", "x0", "omega", "seed", "max_per_line")


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_generate(args) -> int:
    family = args.family
    if family == "group":
        if args.group_family is None:
            raise DocumentError("generate group needs --family")
        family = args.group_family
    params = {f: getattr(args, f) for f in _PARAM_FLAGS if getattr(args, f) is not None}
    coloring = tuple(args.coloring.split(",")) if args.coloring else None
    obj = generate(GenSpec(family, dict(params), coloring))
    seed = params.pop("seed", None)
    meta = dict(obj.meta)
    meta["family"] = family
    merged = {**params, **meta.get("params", {})}
    meta["params"] = {k: merged[k] for k in sorted(merged) if k != "seed"}
    meta["seed"] = seed
    if isinstance(obj, ColoredConfig):
        obj = ColoredConfig(obj.points, obj.colors, meta)
    else:
        obj.meta.clear()
        obj.meta.update(meta)
    _write(dump_document(obj), args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    obj = load_document(_read(args.input))
    try:
        rep = report(obj, args.p, args.k)
    except InapplicableError as exc:
        raise DocumentError(str(exc)) from exc
    _write(json.dumps(rep, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    verdicts = run_suite(args.suite)
    failures = [v for v in verdicts if not v.ok]
    rep = {"suite": args.suite, "checks": len(verdicts), "failures": len(failures),
           "verdicts": [_exact(v.as_dict()) for v in verdicts]}
    _write(json.dumps(rep, indent=2) + "\n", args.output)
    for v in failures:
        print(f"FAIL {v.name}: {v.detail}", file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


def cmd_render(args) -> int:
    obj = load_document(_read(args.input))
    _write(render_svg(obj, args.chart, args.digits, circles=args.circles), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="monochromatic",
                                 description="Two-colored point configurations: build, count, verify.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a configuration document")
    g.add_argument("family", choices=sorted(FAMILIES) + ["group"])
    g.add_argument("--family", dest="group_family", choices=GROUP_FAMILIES,
                   help="group-system family (with 'generate group')")
    for flag in _PARAM_FLAGS:
        g.add_argument("--" + flag.replace("_", "-"), dest=flag, type=int)
    g.add_argument("--coloring", help="comma-separated blue/red list overriding the default")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="statistics, monochromatic counts, bounds, expectation")
    a.add_argument("input")
    a.add_argument("--p", default="1/2", type=parse_rational)
    a.add_argument("--k", default=3, type=int)
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="draw a configuration as SVG")
    r.add_argument("input")
    r.add_argument("-o", "--output")
    r.add_argument("--chart", choices=("perspective", "margin"), default="perspective")
    r.add_argument("--digits", type=int, default=6)
    r.add_argument("--circles", action="store_true", help="also draw circles through >= 4 points")
    r.set_defaults(func=cmd_render)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from monochromatic.chromatic import (
    AbstractGeometry,
    Color,
    ColoredConfig,
    GroupSystem,
    InapplicableError,
    Kind,
    abstract_mono,
    abstract_stats,
    bounds_report,
    compute_stats,
    corollary_predicate,
    expected_mono,
    lemma1_bound,
    lemma1_exact,
    mono_count,
    near_pencil_expectation,
    propk_bound,
)
from monochromatic.constructions import (
    boroczky,
    boroczky_geometry,
    ellipse_cfg,
    gen_group_system,
    near_pencil,
    random_config,
    triangle_medial,
)
from monochromatic.incidence import DuplicatePointError, PPoint

B, R = Color.BLUE, Color.RED


# -- oracle -----------------------------------------------------------------

def group_objects_oracle(g: GroupSystem, kind: Kind, target: int):
    """Objects characterized directly: a full arity-set summing to the target,
    or an (arity-1)-set whose completion is a member or lies outside the set."""
    pts = g.elements
    present = set(pts)
    a = kind.arity
    out = []
    for s in itertools.combinations(pts, a):
        if sum(s) % g.modulus == target:
            out.append(s)
    for s in itertools.combinations(pts, a - 1):
        c = (target - sum(s)) % g.modulus
        if c in s or c not in present:
            out.append(s)
    return sorted(out)


def group_mono_oracle(g, kind, target):
    objs = group_objects_oracle(g, kind, target)
    return sum(1 for o in objs if len(o) >= kind.threshold and (set(o) <= g.blue or set(o) <= g.red))


# -- configurations ---------------------------------------------------------

def test_config_validation():
    with pytest.raises(DuplicatePointError):
        ColoredConfig((PPoint.affine(0, 0), PPoint.affine(0, 0)), (B, R))
    with pytest.raises(ValueError):
        ColoredConfig((PPoint.affine(0, 0),), (B, R))


def test_color_helpers():
    assert B.other is R and R.other is B
    cfg = boroczky(4)
    assert cfg.swapped().blue == cfg.red


# -- statistics -------------------------------------------------------------

def test_stats_boroczky5():
    st5 = compute_stats(boroczky(5))
    assert dict(st5.t) == {(1, 1): 5, (2, 1): 10, (0, 5): 1}
    assert st5.t_total == {2: 5, 3: 10, 5: 1}


def test_stats_all_blue_collapse():
    cfg = triangle_medial()
    s = compute_stats(cfg)
    assert all(j == 0 for _, j in s.t)
    assert sum(math.comb(i, 2) * c for (i, _), c in s.t.items()) == math.comb(7, 2)


@pytest.mark.parametrize("seed", range(40))
def test_stats_identities_random(seed):
    cfg = random_config(4 + seed % 7, seed)
    s = compute_stats(cfg)
    assert s.identities() == (True, True, True)
    assert s.b + s.r == cfg.n


# -- monochromatic counts ---------------------------------------------------

def test_mono_examples():
    assert mono_count(boroczky(5), Kind.LINE)[0] == 1
    assert mono_count(triangle_medial(), Kind.LINE)[0] == 9
    assert mono_count(ellipse_cfg(5), Kind.CIRCLE)[0] == 0


def test_mono_line_witness_is_red_line_at_infinity():
    cfg = boroczky(5)
    _, objs = mono_count(cfg, "line")
    assert list(objs[0].members) == cfg.red
    assert all(cfg.points[i].is_infinite for i in objs[0].members)


def test_mono_circle_counts_lines():
    pts = [PPoint.affine(x, 0) for x in range(3)] + [PPoint.affine(0, 1)]
    cfg = ColoredConfig(tuple(pts), (B, B, B, R))
    assert mono_count(cfg, Kind.CIRCLE)[0] == 1


def test_mono_conic_threshold():
    pts = [PPoint.affine(x, y) for x, y in [(0, 0), (3, 1), (1, 4), (-2, 5), (7, -3), (2, 2)]]
    cfg = ColoredConfig.monochrome(pts)
    count, objs = mono_count(cfg, Kind.CONIC)
    assert count == len(objs) and all(len(o) >= 5 for o in objs)


# -- abstract systems -------------------------------------------------------

def test_cubic_coset_twelve():
    g = gen_group_system("cubic_coset", n=12)
    s = abstract_stats(g)
    assert dict(s.t) == {(1, 1): 6, (1, 2): 15, (2, 0): 3, (3, 0): 4}
    count, objs = abstract_mono(g, Kind.LINE)
    assert count == 7 == group_mono_oracle(g, Kind.LINE, 0)
    assert all(set(o) <= g.blue for o in objs)


@pytest.mark.parametrize("m", [3, 5, 7])
def test_circular_cubic_no_mono_circle(m):
    g = gen_group_system("circular_cubic", m=m)
    assert abstract_mono(g, Kind.CIRCLE)[0] == 0 == group_mono_oracle(g, Kind.CIRCLE, g.circle_target)


@pytest.mark.parametrize("k", [5, 6, 7])
def test_conic_coset_no_mono_conic(k):
    g = gen_group_system("conic_coset", k=k)
    assert abstract_mono(g, Kind.CONIC)[0] == 0 == group_mono_oracle(g, Kind.CONIC, 0)


@pytest.mark.parametrize("family,params,kind", [
    ("cubic_coset", {"n": 10}, Kind.LINE),
    ("circular_cubic", {"m": 5}, Kind.CIRCLE),
    ("conic_coset", {"k": 5}, Kind.CONIC),
    ("conic_coset", {"k": 5}, Kind.LINE),
])
def test_group_objects_match_oracle(family, params, kind):
    g = gen_group_system(family, **params)
    assert sorted(g.objects(kind)) == group_objects_oracle(g, kind, g.target(kind))


def test_group_missing_target():
    g = gen_group_system("circular_cubic", m=3)
    with pytest.raises(ValueError):
        abstract_mono(g, Kind.LINE)


def test_group_disjoint_classes():
    with pytest.raises(ValueError):
        GroupSystem(6, frozenset({0, 1}), frozenset({1, 2}), 0)


@pytest.mark.parametrize("k", range(4, 9))
def test_abstract_boroczky_agrees_with_embedding(k):
    geo, cols = boroczky_geometry(k)
    emb = boroczky(k)
    assert dict(abstract_stats(geo, cols).t) == dict(compute_stats(emb).t)
    assert abstract_mono(geo, Kind.LINE, cols)[0] == mono_count(emb, Kind.LINE)[0] == 1


def test_abstract_geometry_rejects_double_incidence():
    with pytest.raises(ValueError):
        AbstractGeometry(5, ((0, 1, 2), (0, 1, 3)))


# -- bounds -----------------------------------------------------------------

def test_bounds_cubic_coset():
    s = abstract_stats(gen_group_system("cubic_coset", n=12))
    assert lemma1_exact(s) == 7
    assert propk_bound(s, 3) == 4
    assert lemma1_bound(s) == Fraction(144, 24) - 2 + Fraction(9, 6)


def test_bounds_near_pencil_melchior_equality():
    rep = bounds_report(compute_stats(near_pencil(10)))
    assert rep.melchior_lhs == 3 and rep.melchior_pass
    assert rep.erdos_purdy_pass is None  # near-pencils are exempt
    with pytest.raises(InapplicableError):
        lemma1_exact(compute_stats(near_pencil(10)))


def test_bounds_triangle_medial_langer():
    rep = bounds_report(compute_stats(triangle_medial()))
    assert rep.langer_lhs == 24 and rep.langer_rhs == Fraction(70, 3) and rep.langer_pass
    assert rep.melchior_lhs == 3


def test_corollary_predicate():
    assert all(corollary_predicate(3, Fraction(i, 20)) for i in range(1, 11))
    assert bounds_report(compute_stats(triangle_medial()), k=3).corollary == "unconditional"
    assert not corollary_predicate(4, Fraction(1, 2))
    assert corollary_predicate(4, Fraction(1, 3))
    assert not corollary_predicate(5, Fraction(1, 2))
    assert corollary_predicate(5, Fraction(1, 10))
    with pytest.raises(ValueError):
        corollary_predicate(4, Fraction(3, 4))


@pytest.mark.parametrize("seed", range(25))
def test_lemma1_exact_and_bound_ordering(seed):
    cfg = random_config(5 + seed % 6, 900 + seed, grid=6, max_per_line=3)
    s = compute_stats(cfg)
    mono = mono_count(cfg, Kind.LINE)[0]
    assert mono == lemma1_exact(s)
    assert mono >= lemma1_bound(s)
    assert mono >= propk_bound(s, 3)


@pytest.mark.parametrize("seed", range(25))
def test_propk_bound_ordering(seed):
    cfg = random_config(6 + seed % 5, 300 + seed)
    s = compute_stats(cfg)
    assert mono_count(cfg, Kind.LINE)[0] >= propk_bound(s, max(3, s.max_line))


# -- expectation ------------------------------------------------------------

def test_expectation_examples():
    assert expected_mono(compute_stats(triangle_medial()), Fraction(1, 2)) == 3
    assert expected_mono(compute_stats(near_pencil(10)), "1/2") == Fraction(1153, 256)
    s = compute_stats(boroczky(5))
    assert expected_mono(s, 0) == sum(s.t_total.values())
    assert expected_mono(s, Fraction(1, 2)) == Fraction(81, 16)
    with pytest.raises(ValueError):
        expected_mono(s, Fraction(3, 2))


def test_near_pencil_expectation_examples():
    assert near_pencil_expectation(10, Fraction(1, 2)) == Fraction(1153, 256)
    assert near_pencil_expectation(7, Fraction(1, 2)) == 3 + Fraction(1, 32)
    assert near_pencil_expectation(9, 1) == 9
    for n in range(3, 13):
        assert near_pencil_expectation(n, Fraction(1, 3)) == expected_mono(
            compute_stats(near_pencil(n)), Fraction(1, 3))


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 9), st.integers(0, 10_000), st.fractions(0, 1, max_denominator=9))
def test_color_swap_symmetry(n, seed, p):
    cfg = random_config(n, seed)
    s, t = compute_stats(cfg), compute_stats(cfg.swapped())
    assert dict(t.t) == dict(s.transposed().t)
    for kind in (Kind.LINE, Kind.CIRCLE):
        assert mono_count(cfg, kind)[0] == mono_count(cfg.swapped(), kind)[0]
    assert expected_mono(s, p) == expected_mono(t, p)

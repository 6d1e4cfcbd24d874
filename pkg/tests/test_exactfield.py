import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from monochromatic.exactfield import (
    ConductorError,
    CycloElem,
    FieldMatrix,
    ModularEmbedding,
    cyclo_arith,
    cyclo_normalize,
    cyclotomic_poly,
    det,
    euler_phi,
    is_real,
    nullspace,
    rank,
    trig_pair,
)

Z = CycloElem.zeta
Q = CycloElem.rational


# -- oracles ----------------------------------------------------------------

def leibniz_det(rows):
    """Permutation-sum determinant over Fractions."""
    n = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


def numeric(a: CycloElem) -> complex:
    """Floating evaluation straight from the power basis."""
    w = complex(math.cos(2 * math.pi / a.m), math.sin(2 * math.pi / a.m))
    return sum(float(c) * w ** i for i, c in enumerate(a.coeffs))


# -- normalization ----------------------------------------------------------

def test_normalize_examples():
    assert cyclo_normalize([0, 0, 1], 4) == Q(-1)
    assert cyclo_normalize([0, 0, 0, 0, 1], 5).coeffs == (-1, -1, -1, -1)
    assert cyclo_normalize([Fraction(5, 3)], 1) == Q(Fraction(5, 3))


def test_normalize_idempotent():
    a = cyclo_normalize([3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5], 12)
    assert cyclo_normalize(list(a.coeffs), 12) == a
    assert len(a.coeffs) == euler_phi(12) == 4


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6, 8, 12, 20, 24, 36, 72])
def test_cyclotomic_poly_degree_and_root(m):
    poly = cyclotomic_poly(m)
    assert len(poly) - 1 == euler_phi(m)
    w = complex(math.cos(2 * math.pi / m), math.sin(2 * math.pi / m))
    assert abs(sum(c * w ** i for i, c in enumerate(poly))) < 1e-9


def test_zero_iff_all_coeffs_zero():
    assert Z(5) + Z(5, 2) + Z(5, 3) + Z(5, 4) + 1 == 0
    assert (Z(5) + Z(5, 2) + Z(5, 3) + Z(5, 4) + 1).is_zero()


# -- arithmetic -------------------------------------------------------------

def test_arith_examples():
    z4 = Z(4)
    assert cyclo_arith("mul", z4, z4) == Q(-1)
    assert cyclo_arith("inv", z4) == -z4
    assert cyclo_arith("conj", Z(5)).coeffs == (-1, -1, -1, -1)
    assert cyclo_arith("add", z4, Q(1)) == 1 + z4


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        Q(0, 5).inv()


def test_conductor_lifting():
    a = Z(4) + Z(3)
    assert a.m == 12
    assert abs(numeric(a) - (1j + complex(-0.5, math.sqrt(3) / 2))) < 1e-12
    assert Z(6, 2) == Z(3)


def test_conductor_mismatch_in_matrix_is_lifted():
    M = FieldMatrix([[Z(4), 1], [Z(3), 2]])
    assert M.m == 12


def test_unknown_op():
    with pytest.raises(ValueError):
        cyclo_arith("pow", Q(1), Q(2))


def elems(m):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=7)
    return st.lists(coeff, min_size=euler_phi(m), max_size=euler_phi(m)).map(
        lambda cs: CycloElem.from_coeffs(m, cs))


@pytest.mark.parametrize("m", [1, 4, 5, 12, 20])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_field_axioms(m, data):
    a, b, c = (data.draw(elems(m)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()
    if not a.is_zero():
        assert a.inv() * a == 1
        assert (b / a) * a == b


@pytest.mark.parametrize("m", [5, 12, 20])
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_arith_matches_complex_numbers(m, data):
    a, b = data.draw(elems(m)), data.draw(elems(m))
    assert abs(numeric(a * b) - numeric(a) * numeric(b)) < 1e-6
    assert abs(numeric(a.conj()) - numeric(a).conjugate()) < 1e-9


# -- realness and trigonometry ----------------------------------------------

def test_is_real_examples():
    assert not is_real(Z(4))
    assert is_real(Q(Fraction(7, 3)))
    assert is_real(Z(5) + Z(5, 4))


def test_trig_pair_examples():
    assert trig_pair(1, 4) == (Q(0), Q(1))
    c, s = trig_pair(1, 6)
    assert c == Q(Fraction(1, 2))
    assert s * s == Q(Fraction(3, 4)) and float(s) > 0
    assert trig_pair(0, 1) == (Q(1), Q(0))


@settings(max_examples=100, deadline=None)
@given(st.integers(-60, 60), st.integers(1, 40))
def test_trig_pythagoras_and_realness(j, q):
    c, s = trig_pair(j, q)
    assert c * c + s * s == 1
    assert is_real(c) and is_real(s)
    assert abs(float(c) - math.cos(2 * math.pi * j / q)) < 1e-9
    assert abs(float(s) - math.sin(2 * math.pi * j / q)) < 1e-9


@settings(max_examples=50, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(1, 24))
def test_trig_angle_addition(j1, j2, q):
    c1, s1 = trig_pair(j1, q)
    c2, s2 = trig_pair(j2, q)
    c, s = trig_pair(j1 + j2, q)
    assert c == c1 * c2 - s1 * s2
    assert s == s1 * c2 + c1 * s2


# -- linear algebra ---------------------------------------------------------

def test_det_examples():
    assert det([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert det([[1, 2, 3], [4, 5, 6], [1, 2, 3]]) == 0
    z = Z(4)
    assert det([[1, z], [-z, 1]]) == 0


def test_det_non_square():
    with pytest.raises(ValueError):
        det([[1, 2, 3], [4, 5, 6]])


@pytest.mark.parametrize("size", [3, 4])
def test_det_matches_leibniz(size):
    rng = random.Random(size)
    for _ in range(200):
        rows = [[Fraction(rng.randint(-5, 5)) for _ in range(size)] for _ in range(size)]
        assert det(rows).to_fraction() == leibniz_det(rows)


def test_det_over_cyclotomic_matches_numeric():
    rng = random.Random(1)
    for _ in range(20):
        rows = [[Z(20, rng.randrange(20)) * rng.randint(-3, 3) for _ in range(4)] for _ in range(4)]
        num = np.linalg.det(np.array([[numeric(x) for x in r] for r in rows]))
        assert abs(numeric(det(rows)) - num) < 1e-6


def test_det_is_alternating_and_multilinear():
    rng = random.Random(7)
    rows = [[Fraction(rng.randint(-4, 4)) for _ in range(4)] for _ in range(4)]
    swapped = [rows[1], rows[0]] + rows[2:]
    assert det(swapped) == -det(rows)
    scaled = [[3 * x for x in rows[0]]] + rows[1:]
    assert det(scaled) == 3 * det(rows)


def test_nullspace_examples():
    r, basis = nullspace([[0, 0, 0], [0, 0, 0]])
    assert (r, len(basis)) == (0, 3)
    r, basis = nullspace([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert (r, basis) == (3, [])


@pytest.mark.parametrize("seed", range(10))
def test_nullspace_annihilated_and_rank_nullity(seed):
    rng = random.Random(seed)
    nrows, ncols = rng.randint(1, 6), rng.randint(1, 7)
    base = [[Fraction(rng.randint(-3, 3)) for _ in range(ncols)] for _ in range(max(1, nrows - 2))]
    rows = base + [[a + b for a, b in zip(base[0], base[-1])] for _ in range(nrows - len(base))]
    M = FieldMatrix(rows)
    r, basis = nullspace(M)
    assert r + len(basis) == ncols
    assert r == rank(M)
    for v in basis:
        assert all(x == 0 for x in M.apply(v))


def test_nullspace_over_cyclotomic():
    z = Z(5)
    M = FieldMatrix([[1, z, z * z], [z, z * z, z ** 3]])
    r, basis = nullspace(M)
    assert r == 1 and len(basis) == 2
    for v in basis:
        assert all(x == 0 for x in M.apply(v))


# -- serialization and modular shadows --------------------------------------

def test_json_roundtrip():
    a = Z(12) * Fraction(2, 3) - Fraction(1, 5)
    assert CycloElem.from_json(a.to_json()) == a
    assert Q(Fraction(-7, 9)).to_json() == "-7/9"
    with pytest.raises(ValueError):
        CycloElem.from_json({"m": 5, "c": ["1", "2"]})


def test_modular_embedding_is_homomorphism():
    emb = ModularEmbedding(20, seed=3)
    rng = random.Random(0)
    for _ in range(20):
        a = CycloElem.from_coeffs(20, [rng.randint(-4, 4) for _ in range(8)])
        b = CycloElem.from_coeffs(20, [Fraction(rng.randint(-4, 4), rng.randint(1, 5)) for _ in range(8)])
        p = emb.p
        assert emb.image(a * b) == emb.image(a) * emb.image(b) % p
        assert emb.image(a + b) == (emb.image(a) + emb.image(b)) % p


def test_lift_to_non_multiple_raises():
    with pytest.raises(ConductorError):
        Z(5).lift(12)

"""Exact arithmetic in cyclotomic fields Q(zeta_m) and exact linear algebra.

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(m)-1) as an
integer numerator vector over one positive common denominator.  Rationals
are plain :class:`fractions.Fraction` values; they lift into any field on
contact.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache, reduce
from numbers import Rational
from typing import Iterable, Sequence

import gmpy2

__all__ = [
    "CycloElem",
    "ConductorError",
    "FieldMatrix",
    "ModularEmbedding",
    "cyclo_normalize",
    "cyclo_arith",
    "cyclotomic_poly",
    "det",
    "det_small",
    "euler_phi",
    "is_real",
    "nullspace",
    "parse_rational",
    "rank",
    "trig_pair",
]


class ConductorError(ValueError):
    """Operands live in fields that cannot be combined."""


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_exact_div(a: Sequence[int], b: Sequence[int]) -> list[int]:
    # b monic up to sign; exact division over Z
    a = list(a)
    lead = b[-1]
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c, rem = divmod(a[k + len(b) - 1], lead)
        assert rem == 0
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
    assert not any(a), "inexact polynomial division"
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the m-th cyclotomic polynomial.

    Uses the Mobius product  Phi_m = prod_{d | m} (x^d - 1)^mu(m/d).
    """
    if m < 1:
        raise ValueError("conductor must be positive")
    num, den = [1], [1]
    for d in _divisors(m):
        mu = _mobius(m // d)
        factor = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = _poly_mul(num, factor)
        elif mu == -1:
            den = _poly_mul(den, factor)
    return tuple(_poly_exact_div(num, den))


class _Field:
    """Per-conductor tables: x^k mod Phi_m for 0 <= k < max(m, 2 phi)."""

    def __init__(self, m: int):
        self.m = m
        phi_poly = cyclotomic_poly(m)
        self.phi = len(phi_poly) - 1
        size = max(m, 2 * self.phi)
        table = []
        cur = [0] * self.phi
        cur[0] = 1
        for _ in range(size):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(self.phi):
                    cur[i] -= top * phi_poly[i]
        self.powers = table
        self.units = [j for j in range(1, m + 1) if math.gcd(j, m) == 1]

    def reduce(self, raw: Sequence[int]) -> list[int]:
        """Fold an integer vector indexed by exponent into the power basis."""
        phi, m, powers = self.phi, self.m, self.powers
        out = [0] * phi
        for k, c in enumerate(raw):
            if not c:
                continue
            if k < phi:
                out[k] += c
            else:
                row = powers[k % m]
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
        return out


@lru_cache(maxsize=None)
def _field(m: int) -> _Field:
    return _Field(m)


@lru_cache(maxsize=None)
def _galois_images(m: int, j: int) -> tuple[tuple[int, ...], ...]:
    # image of each basis vector zeta^i under zeta -> zeta^j
    F = _field(m)
    return tuple(F.powers[(i * j) % m] for i in range(F.phi))


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------

def parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"not an exact rational: {value!r}")


class CycloElem:
    """An element of Q(zeta_m), immutable.

    ``num`` holds integer power-basis numerators and ``den`` the positive
    common denominator; the pair is kept in lowest terms so that equality of
    elements with the same conductor is equality of representations.
    """

    __slots__ = ("m", "num", "den", "_hash")

    def __init__(self, m: int, num: Sequence[int], den: int = 1):
        phi = _field(m).phi
        if len(num) != phi:
            raise ValueError(f"expected {phi} coefficients for conductor {m}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = [-c for c in num], -den
        g = reduce(math.gcd, num, den)
        if g != 1:
            num = [c // g for c in num]
            den //= g
        if not any(num):
            den = 1
        self.m = m
        self.num = tuple(num)
        self.den = den
        self._hash = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def rational(cls, value, m: int = 1) -> "CycloElem":
        q = parse_rational(value)
        num = [0] * _field(m).phi
        num[0] = q.numerator
        return cls(m, num, q.denominator)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CycloElem":
        F = _field(m)
        return cls(m, F.powers[k % m])

    @classmethod
    def from_coeffs(cls, m: int, coeffs: Iterable) -> "CycloElem":
        return cyclo_normalize(list(coeffs), m)

    # -- inspection --------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __complex__(self) -> complex:
        # numeric embedding zeta -> exp(2 pi i / m); display only
        w = complex(math.cos(2 * math.pi / self.m), math.sin(2 * math.pi / self.m))
        total, p = 0j, 1 + 0j
        for c in self.num:
            total += c * p
            p *= w
        return total / self.den

    def __float__(self) -> float:
        return complex(self).real

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CycloElem({self.m}, {Fraction(self.num[0], self.den)})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return f"CycloElem({self.m}, {' + '.join(terms)})"

    # -- conductor handling ------------------------------------------------
    def lift(self, L: int) -> "CycloElem":
        if L == self.m:
            return self
        if L % self.m:
            raise ConductorError(f"cannot lift conductor {self.m} into {L}")
        step = L // self.m
        raw = [0] * L
        for i, c in enumerate(self.num):
            raw[i * step] += c
        return CycloElem(L, _field(L).reduce(raw), self.den)

    def _coerce(self, other) -> tuple["CycloElem", "CycloElem"]:
        if isinstance(other, CycloElem):
            if other.m == self.m:
                return self, other
            L = math.lcm(self.m, other.m)
            return self.lift(L), other.lift(L)
        try:
            return self, CycloElem.rational(other, self.m)
        except TypeError:
            return NotImplemented  # type: ignore[return-value]

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        if a.den == b.den:
            return CycloElem(a.m, [x + y for x, y in zip(a.num, b.num)], a.den)
        return CycloElem(a.m, [x * b.den + y * a.den for x, y in zip(a.num, b.num)], a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.m, [-x for x in self.num], self.den)

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        if a.m == 1:
            return CycloElem(1, [a.num[0] * b.num[0]], a.den * b.den)
        if b.is_rational():
            c = b.num[0]
            return CycloElem(a.m, [x * c for x in a.num], a.den * b.den)
        if a.is_rational():
            c = a.num[0]
            return CycloElem(a.m, [x * c for x in b.num], a.den * b.den)
        raw = _poly_mul(a.num, b.num)
        return CycloElem(a.m, _field(a.m).reduce(raw), a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a * b.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = CycloElem.rational(1, self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, j: int) -> "CycloElem":
        """Apply the automorphism zeta -> zeta^j (gcd(j, m) = 1)."""
        if math.gcd(j, self.m) != 1:
            raise ValueError("exponent must be a unit modulo the conductor")
        images = _galois_images(self.m, j % self.m)
        phi = len(self.num)
        out = [0] * phi
        for c, row in zip(self.num, images):
            if c:
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
        return CycloElem(self.m, out, self.den)

    def conj(self) -> "CycloElem":
        return self.galois(-1)

    def inv(self) -> "CycloElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CycloElem(self.m, [self.den] + [0] * (len(self.num) - 1), self.num[0])
        # a^-1 = (product of the other conjugates) / norm(a)
        others = CycloElem.rational(1, self.m)
        for j in _field(self.m).units:
            if j != 1:
                others = others * self.galois(j)
        norm = self * others
        assert norm.is_rational()
        return others * CycloElem.rational(Fraction(norm.den, norm.num[0]), self.m)

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycloElem):
            if other.m != self.m:
                pair = self._coerce(other)
                return pair[0].num == pair[1].num and pair[0].den == pair[1].den
            return self.num == other.num and self.den == other.den
        try:
            q = parse_rational(other)
        except TypeError:
            return NotImplemented
        return self.is_rational() and Fraction(self.num[0], self.den) == q

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.num[0], self.den))
            else:
                self._hash = hash((self.m, self.num, self.den))
        return self._hash

    # -- serialization -----------------------------------------------------
    def to_json(self):
        if self.m == 1:
            return str(Fraction(self.num[0], self.den))
        return {"m": self.m, "c": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "CycloElem":
        if isinstance(data, (str, int)):
            return cls.rational(data)
        m = int(data["m"])
        coeffs = [parse_rational(c) for c in data["c"]]
        if len(coeffs) != _field(m).phi:
            raise ValueError(f"conductor {m} needs {_field(m).phi} coefficients")
        return cyclo_normalize(coeffs, m)


def cyclo_normalize(raw_coeffs: Sequence, m: int) -> CycloElem:
    """Canonical residue of sum raw_i zeta^i modulo Phi_m."""
    fracs = [parse_rational(c) for c in raw_coeffs]
    den = reduce(math.lcm, (q.denominator for q in fracs), 1)
    ints = [q.numerator * (den // q.denominator) for q in fracs]
    return CycloElem(m, _field(m).reduce(ints), den)


def cyclo_arith(op: str, a: CycloElem, b: CycloElem | None = None) -> CycloElem:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "conj":
        return a.conj()
    raise ValueError(f"unknown operation {op!r}")


def is_real(a) -> bool:
    if not isinstance(a, CycloElem):
        return True
    return a.conj() == a


def as_elem(value, m: int = 1) -> CycloElem:
    if isinstance(value, CycloElem):
        return value if value.m == m or m == 1 else value.lift(math.lcm(value.m, m))
    return CycloElem.rational(value, m)


def common_conductor(values: Iterable) -> int:
    L = 1
    for v in values:
        if isinstance(v, CycloElem):
            L = math.lcm(L, v.m)
    return L


def trig_pair(j: int, q: int) -> tuple[CycloElem, CycloElem]:
    """Exact (cos 2 pi j/q, sin 2 pi j/q) in Q(zeta_L), L = lcm(4, q)."""
    if q < 1:
        raise ValueError("q must be positive")
    L = math.lcm(4, q)
    a = (j * (L // q)) % L
    quarter = L // 4
    cos_raw = [Fraction(0)] * L
    sin_raw = [Fraction(0)] * L
    cos_raw[a] += Fraction(1, 2)
    cos_raw[(-a) % L] += Fraction(1, 2)
    # sin = (zeta^a - zeta^-a) / 2i  and  1/i = -zeta^(L/4)
    sin_raw[(a + quarter) % L] -= Fraction(1, 2)
    sin_raw[(-a + quarter) % L] += Fraction(1, 2)
    return cyclo_normalize(cos_raw, L), cyclo_normalize(sin_raw, L)


# ---------------------------------------------------------------------------
# modular shadows
# ---------------------------------------------------------------------------

class ModularEmbedding:
    """Ring homomorphism Z_(p)[zeta_m] -> F_p sending zeta to an m-th root of unity.

    A nonzero image proves the element is nonzero; a zero image proves
    nothing and must be confirmed exactly.
    """

    def __init__(self, m: int, seed: int = 0):
        self.m = m
        rng = random.Random(seed * 1000003 + m)
        k = (1 << 61) // m
        while True:
            p = k * m + 1
            if gmpy2.is_prime(p):
                break
            k += 1
        self.p = p
        factors = {q for q in range(2, m + 1) if m % q == 0 and gmpy2.is_prime(q)}
        while True:
            g = rng.randrange(2, p - 1)
            w = pow(g, (p - 1) // m, p)
            if all(pow(w, m // q, p) != 1 for q in factors):
                break
        self.root = w
        phi = _field(m).phi
        self._powers = [pow(w, i, p) for i in range(phi)]

    def image(self, a) -> int | None:
        """Image in F_p, or None when p divides the denominator."""
        p = self.p
        if not isinstance(a, CycloElem):
            q = parse_rational(a)
            if q.denominator % p == 0:
                return None
            return q.numerator * pow(q.denominator, -1, p) % p
        if a.m != self.m:
            if self.m % a.m:
                raise ConductorError(f"embedding for {self.m} cannot take conductor {a.m}")
            a = a.lift(self.m)
        if a.den % p == 0:
            return None
        s = sum(c * w for c, w in zip(a.num, self._powers))
        return s * pow(a.den, -1, p) % p


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------

class FieldMatrix:
    """Dense matrix whose entries share one conductor."""

    __slots__ = ("rows", "nrows", "ncols", "m")

    def __init__(self, rows: Sequence[Sequence]):
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("matrix needs at least one row")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        m = common_conductor(x for r in rows for x in r)
        self.rows = [[as_elem(x, m) if not (isinstance(x, CycloElem) and x.m == m) else x for x in r]
                     for r in rows]
        self.nrows, self.ncols, self.m = len(rows), ncols, m

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def apply(self, vec: Sequence) -> list[CycloElem]:
        out = []
        for r in self.rows:
            acc = CycloElem.rational(0, self.m)
            for a, x in zip(r, vec):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return out


def _as_matrix(M) -> FieldMatrix:
    return M if isinstance(M, FieldMatrix) else FieldMatrix(M)


def det_small(rows: Sequence[Sequence]):
    """Division-free determinant by Laplace expansion along the first row.

    Intended for the 2x2 .. 4x4 incidence predicates, where avoiding any
    field inversion is cheaper than elimination.
    """
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    total = 0
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = rows[0][j] * det_small(minor)
            total = total + term if j % 2 == 0 else total - term
    return total


def _bareiss_echelon(rows: list[list[CycloElem]], ncols: int):
    """Fraction-free row echelon form.

    Returns (echelon rows, pivot columns, number of row swaps).  Every update
    divides exactly by the previous pivot, so entries stay minors of the input.
    """
    A = [list(r) for r in rows]
    nrows = len(A)
    pivots: list[int] = []
    swaps = 0
    prev_inv = None
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if A[i][c]), None)
        if pr is None:
            continue
        if pr != r:
            A[r], A[pr] = A[pr], A[r]
            swaps += 1
        piv = A[r][c]
        for i in range(r + 1, nrows):
            lead = A[i][c]
            for j in range(c + 1, ncols):
                v = piv * A[i][j]
                if lead and A[r][j]:
                    v = v - lead * A[r][j]
                A[i][j] = v * prev_inv if prev_inv is not None else v
            A[i][c] = A[i][c] * 0
        if r + 1 < nrows:
            prev_inv = piv.inv()
        pivots.append(c)
        r += 1
    return A, pivots, swaps


def det(M) -> CycloElem:
    """Exact determinant by Bareiss elimination."""
    M = _as_matrix(M)
    if M.nrows != M.ncols:
        raise ValueError(f"determinant of non-square {M.nrows}x{M.ncols} matrix")
    n = M.nrows
    A, pivots, swaps = _bareiss_echelon(M.rows, n)
    if len(pivots) < n:
        return CycloElem.rational(0, M.m)
    d = A[n - 1][n - 1]
    return -d if swaps % 2 else d


def rank(M) -> int:
    M = _as_matrix(M)
    return len(_bareiss_echelon(M.rows, M.ncols)[1])


def nullspace(M) -> tuple[int, list[list[CycloElem]]]:
    """Exact rank and a basis of the right nullspace.

    Each basis vector has a 1 in one free column and zeros in the others.
    """
    M = _as_matrix(M)
    A, pivots, _ = _bareiss_echelon(M.rows, M.ncols)
    r = len(pivots)
    zero = CycloElem.rational(0, M.m)
    one = CycloElem.rational(1, M.m)
    free = [c for c in range(M.ncols) if c not in pivots]
    pivot_inv = [A[i][pivots[i]].inv() for i in range(r)]
    basis = []
    for f in free:
        x = [zero] * M.ncols
        x[f] = one
        for i in range(r - 1, -1, -1):
            acc = zero
            for j in range(pivots[i] + 1, M.ncols):
                if x[j] and A[i][j]:
                    acc = acc + A[i][j] * x[j]
            x[pivots[i]] = -acc * pivot_inv[i]
        basis.append(x)
    return r, basis

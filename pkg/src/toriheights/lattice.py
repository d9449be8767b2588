"""Exact integral linear algebra on free abelian groups.

Vectors are tuples of Python ints and matrices are tuples of row tuples, so
every value is immutable and arbitrary precision.  Rational work (solving,
inverting) goes through :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch, ToriHeightsError

IntVector = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class AbelianInvariants:
    """Z^free_rank + Z/t_1 + ... + Z/t_k with t_1 | t_2 | ... | t_k."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        t = tuple(self.torsion)
        object.__setattr__(self, "torsion", t)
        if any(x < 2 for x in t):
            raise ValueError(f"torsion coefficients must be >= 2, got {t}")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion coefficients must form a divisibility chain, got {t}")

    @property
    def order(self) -> int | None:
        """Cardinality of the group, or None when it is infinite."""
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# basic matrix helpers

def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    m = tuple(tuple(int(x) for x in r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("ragged matrix")
    return m


def as_vector(v: Iterable[int]) -> IntVector:
    return tuple(int(x) for x in v)


def shape(a: Sequence[Sequence]) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> IntMatrix:
    return tuple((0,) * n for _ in range(m))


def transpose(a):
    if not a:
        return ()
    return tuple(zip(*a))


def mat_mul(a, b):
    bt = transpose(b)
    if a and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {shape(a)} by {shape(b)}")
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a, v):
    if a and len(a[0]) != len(v):
        raise DimensionMismatch(f"cannot apply {shape(a)} to a vector of length {len(v)}")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a):
    return tuple(tuple(c * x for x in r) for r in a)


def mat_pow(a, k: int):
    n = len(a)
    out = identity(n)
    base = a
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive(v) -> IntVector:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = vec_gcd(v)
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def primitive_rational(v) -> IntVector:
    """Smallest positive integer multiple of a rational vector, made primitive."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return primitive(tuple(int(Fraction(x) * den) for x in v))


def det(a) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_unimodular(a) -> bool:
    return len(a) == len(a[0]) and abs(det(a)) == 1 if a else True


def charpoly(a) -> list[int]:
    """Coefficients c_0..c_n of det(t*I - a), lowest degree first.

    Faddeev-LeVerrier; every division is exact for integer input.
    """
    n = len(a)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = identity(n)
    for k in range(1, n + 1):
        am = mat_mul(a, m)
        c = -sum(am[i][i] for i in range(n))
        assert c % k == 0
        c //= k
        coeffs[n - k] = c
        m = mat_add(am, mat_scale(c, identity(n)))
    return coeffs


# ---------------------------------------------------------------------------
# rational elimination

def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(a) -> int:
    if not a or not a[0]:
        return 0
    rows = [[Fraction(x) for x in r] for r in a]
    _, piv = _rref(rows, len(a[0]))
    return len(piv)


def solve_rational(a, b) -> tuple[Fraction, ...] | None:
    """A solution x of a x = b over Q, or None if the system is inconsistent.

    Free variables are set to zero, so the answer is unique whenever the
    columns of ``a`` are independent.
    """
    m, n = len(a), (len(a[0]) if a else 0)
    if len(b) != m:
        raise DimensionMismatch("right-hand side has the wrong length")
    rows = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(m)]
    rows, piv = _rref(rows, n)
    for i in range(len(piv), m):
        if rows[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = rows[i][n]
    return tuple(x)


def inverse(a) -> tuple[tuple[Fraction, ...], ...]:
    n = len(a)
    rows = [[Fraction(x) for x in a[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows, piv = _rref(rows, n)
    if len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[n:]) for r in rows)


def unimodular_inverse(a) -> IntMatrix:
    inv = inverse(a)
    if any(x.denominator != 1 for r in inv for x in r):
        raise ToriHeightsError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in r) for r in inv)


def coordinates(basis: Sequence[IntVector], v) -> tuple[Fraction, ...] | None:
    """Coordinates of v in the (independent) vectors ``basis``; None if outside the span."""
    if not basis:
        return () if all(x == 0 for x in v) else None
    return solve_rational(transpose(basis), v)


def integral_coordinates(basis: Sequence[IntVector], v) -> IntVector:
    c = coordinates(basis, v)
    if c is None or any(x.denominator != 1 for x in c):
        raise ToriHeightsError(f"{v} is not an integral combination of {basis}")
    return tuple(int(x) for x in c)


# ---------------------------------------------------------------------------
# Smith normal form

def smith_normal_form(a) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (S, U, V) with S = U a V diagonal, d_1 | d_2 | ..., U and V unimodular.

    The pivot at each stage is the entry of least nonzero absolute value in
    the remaining block, first in row-major order, so U and V are
    reproducible.
    """
    m, n = len(a), (len(a[0]) if a else 0)
    s = [list(r) for r in a]
    u = [list(r) for r in identity(m)]
    v = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        s[dst] = [x + c * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for r in s:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = s[i][j]
                    if x and (best is None or abs(x) < abs(s[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            p = s[t][t]
            dirty = False
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // p))
                    dirty = dirty or s[i][t] != 0
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // p))
                    dirty = dirty or s[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if s[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        if best is None:
            break
    return as_matrix(s), as_matrix(u), as_matrix(v)


def diagonal(s) -> list[int]:
    return [s[i][i] for i in range(min(shape(s)))]


def integer_kernel(a, ncols: int | None = None) -> list[IntVector]:
    """Saturated Z-basis of {x : a x = 0}.

    ``ncols`` is needed only when ``a`` has no rows.
    """
    if not a:
        return list(identity(ncols or 0))
    n = len(a[0])
    s, _, v = smith_normal_form(a)
    r = sum(1 for d in diagonal(s) if d)
    return [tuple(v[i][j] for i in range(n)) for j in range(r, n)]


def fixed_sublattice(mats: Sequence, rank_: int) -> list[IntVector]:
    """Basis of the vectors fixed by every matrix in ``mats``."""
    for a in mats:
        if len(a) != rank_ or any(len(r) != rank_ for r in a):
            raise DimensionMismatch(f"expected {rank_}x{rank_} matrices, got {shape(a)}")
    rows = []
    for a in mats:
        rows.extend(mat_sub(a, identity(rank_)))
    return integer_kernel(rows, rank_)


def quotient_invariants(ambient_rank: int, image_basis: Sequence[IntVector]) -> AbelianInvariants:
    """Invariants of Z^ambient_rank modulo the span of ``image_basis``."""
    for v in image_basis:
        if len(v) != ambient_rank:
            raise DimensionMismatch(f"vector {v} does not live in rank {ambient_rank}")
    if not image_basis:
        return AbelianInvariants(ambient_rank)
    s, _, _ = smith_normal_form(transpose(image_basis))
    d = [x for x in diagonal(s) if x]
    return AbelianInvariants(ambient_rank - len(d), tuple(x for x in d if x > 1))


def saturation(vectors: Sequence[IntVector], ambient_rank: int) -> list[IntVector]:
    """Basis of (span_Q vectors) intersected with Z^ambient_rank."""
    if not vectors:
        return []
    perp = integer_kernel(vectors, ambient_rank)
    return integer_kernel(perp, ambient_rank) if perp else list(identity(ambient_rank))

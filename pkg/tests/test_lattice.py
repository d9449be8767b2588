from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toriheights.errors import DimensionMismatch
from toriheights.lattice import (
    AbelianInvariants,
    charpoly,
    det,
    diagonal,
    fixed_sublattice,
    identity,
    mat_mul,
    mat_vec,
    quotient_invariants,
    saturation,
    smith_normal_form,
    solve_rational,
)

small = st.integers(-9, 9)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def unimodular(n):
    """Random unimodular matrices as products of elementary operations."""
    ops = st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(-3, 3)), max_size=8)

    def build(seq):
        m = [list(r) for r in identity(n)]
        for i, j, c in seq:
            if i != j:
                m[i] = [a + c * b for a, b in zip(m[i], m[j])]
            else:
                m[i] = [-a for a in m[i]]
        return tuple(tuple(r) for r in m)

    return ops.map(build)


def test_snf_examples():
    s, u, v = smith_normal_form([[1, 0], [0, 1]])
    assert s == u == v == identity(2)
    assert diagonal(smith_normal_form([[2, 0], [0, 3]])[0]) == [1, 6]
    assert smith_normal_form([[0]])[0] == ((0,),)


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_snf_certificate(a):
    s, u, v = smith_normal_form(a)
    assert mat_mul(mat_mul(u, a), v) == s
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    m, n = len(s), len(s[0])
    assert all(s[i][j] == 0 for i in range(m) for j in range(n) if i != j)
    d = [x for x in diagonal(s)]
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert d[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_snf_big_integers():
    a = [[10**30, 3], [7, 10**25 + 1]]
    s, u, v = smith_normal_form(a)
    assert mat_mul(mat_mul(u, a), v) == s
    assert diagonal(s)[0] * diagonal(s)[1] == abs(det(a))


def test_fixed_sublattice_examples():
    assert fixed_sublattice([((-1, 0), (0, -1))], 2) == []
    basis = fixed_sublattice([((0, 1), (1, 0))], 2)
    assert len(basis) == 1 and basis[0] in ((1, 1), (-1, -1))
    assert len(fixed_sublattice([identity(2)], 2)) == 2
    with pytest.raises(DimensionMismatch):
        fixed_sublattice([identity(3)], 2)


square3 = st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=3, max_size=3)


@given(st.lists(square3, min_size=1, max_size=2))
@settings(max_examples=80, deadline=None)
def test_fixed_sublattice_is_fixed_and_saturated(mats):
    basis = fixed_sublattice(mats, 3)
    for a in mats:
        for b in basis:
            assert mat_vec(a, b) == b
    assert quotient_invariants(3, basis).torsion == ()


def test_quotient_examples():
    assert quotient_invariants(2, [(2, 0), (0, 3)]) == AbelianInvariants(0, (6,))
    assert quotient_invariants(3, [(1, 0, 0)]) == AbelianInvariants(2, ())
    assert quotient_invariants(2, []) == AbelianInvariants(2, ())


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3), unimodular(3), st.data())
@settings(max_examples=100, deadline=None)
def test_quotient_independent_of_spanning_set(vectors, _u, data):
    k = len(vectors)
    w = data.draw(unimodular(k))
    # the rows of w * vectors span the same sublattice
    respanned = [tuple(sum(w[i][j] * vectors[j][c] for j in range(k)) for c in range(3)) for i in range(k)]
    extra = [tuple(a + b for a, b in zip(vectors[0], vectors[-1]))]
    base = quotient_invariants(3, [tuple(v) for v in vectors])
    assert quotient_invariants(3, respanned) == base
    assert quotient_invariants(3, [tuple(v) for v in vectors] + extra) == base


def test_abelian_invariants_validation():
    with pytest.raises(ValueError):
        AbelianInvariants(0, (2, 3))
    with pytest.raises(ValueError):
        AbelianInvariants(0, (1,))
    assert str(AbelianInvariants(0, (6,))) == "Z/6"
    assert AbelianInvariants(1).order is None


def test_charpoly_and_solve():
    assert charpoly(((0, -1), (1, -1))) == [1, 1, 1]
    assert solve_rational(((2, 0), (0, 4)), (1, 1)) == (Fraction(1, 2), Fraction(1, 4))
    assert solve_rational(((1, 1), (1, 1)), (1, 2)) is None
    assert saturation([(2, 4)], 2) in ([(1, 2)], [(-1, -2)])

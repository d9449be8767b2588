from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toriheights.errors import BadIntersection, NotComplete, NotPrimitive, NotRegular, ParseError
from toriheights.fan import (
    Cone,
    PLFunction,
    anticanonical_class,
    build_and_validate,
    hexagon_fan,
    locate,
    pl_eval,
    picard_lattice,
    product_fan,
    projective_space_fan,
)
from toriheights.lattice import mat_mul, transpose

P2 = projective_space_fan(2)


def test_p2_faces():
    assert P2.n_rays == 3
    assert len(P2.cones_of_dim(1)) == 3
    assert len(P2.cones_of_dim(2)) == 3
    assert P2.is_cone((0, 2)) and P2.is_cone(()) and not P2.is_cone((0, 1, 2))


def test_trivial_fan():
    f = build_and_validate(0, [], [[]])
    assert f.rank == 0 and f.n_rays == 0
    assert picard_lattice(f).rank == 0


def test_hexagon_and_products():
    assert len(hexagon_fan().cones) == 13
    f = product_fan(projective_space_fan(1), projective_space_fan(1))
    assert f.n_rays == 4 and len(f.max_cones) == 4


def test_rejections():
    with pytest.raises(NotPrimitive):
        build_and_validate(2, [(2, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])
    with pytest.raises(NotRegular):
        build_and_validate(2, [(1, 0), (1, 2), (-1, -1)], [[0, 1], [1, 2], [0, 2]])
    with pytest.raises(NotComplete):
        build_and_validate(2, [(1, 0), (0, 1), (-1, 0)], [[0, 1], [1, 2]])
    with pytest.raises(ParseError):
        build_and_validate(2, [(1, 0), (0, 1)], [[0, 5]])
    with pytest.raises(ParseError):
        build_and_validate(2, [(1, 0, 0)], [[0]])


def test_overlapping_cones_rejected():
    # every facet is shared by exactly two cones, but the fan winds around three times
    rays = [(1, 0), (-1, 1), (0, -1), (1, 1), (-1, 0), (1, -1), (0, 1), (-1, -1)]
    with pytest.raises((BadIntersection, NotRegular)):
        build_and_validate(2, rays, [(i, (i + 1) % 8) for i in range(8)])


def test_winding_fan_with_regular_cones():
    # the octagon is fine; visiting its rays out of order overlaps cones
    rays = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
    ok = build_and_validate(2, rays, [(i, (i + 1) % 8) for i in range(8)])
    assert ok.n_rays == 8
    order = [0, 2, 4, 6, 1, 3, 5, 7]
    bad = [(order[i], order[(i + 1) % 8]) for i in range(8)]
    with pytest.raises((BadIntersection, NotRegular)):
        build_and_validate(2, rays, bad)


def test_locate_example():
    cone, coords = locate(P2, (2, -1))
    assert cone == Cone((0, 2))
    assert coords == (3, 1)
    assert pl_eval(P2, PLFunction.anticanonical(P2), (2, -1)) == 4


def test_picard_examples():
    pic = picard_lattice(P2)
    assert pic.rank == 1 and pic.projection == ((1, 1, 1),)
    dp6 = picard_lattice(hexagon_fan())
    assert dp6.rank == 4
    assert anticanonical_class(hexagon_fan(), dp6) == (1, 2, 2, 1)


@pytest.mark.parametrize("name", ["p1", "p2", "p1xp1", "dp6"])
def test_picard_exact_sequence(shipped, name):
    fan = shipped[name].fan
    pic = picard_lattice(fan)
    # M -> D(Sigma) -> Pic is zero, and projection * section = 1
    assert all(all(x == 0 for x in row) for row in mat_mul(pic.projection, fan.rays))
    eye = mat_mul(pic.projection, pic.section)
    assert eye == tuple(tuple(int(i == j) for j in range(pic.rank)) for i in range(pic.rank))
    assert pic.rank == fan.n_rays - fan.rank


points = st.tuples(st.integers(-20, 20), st.integers(-20, 20))
values = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=6, max_size=6)


@given(points, points, values, values)
@settings(max_examples=150, deadline=None)
def test_pl_functions_on_hexagon(x, y, v, w):
    fan = hexagon_fan()
    f, g = PLFunction(v), PLFunction(w)
    assert pl_eval(fan, f + g, x) == pl_eval(fan, f, x) + pl_eval(fan, g, x)
    assert pl_eval(fan, f.scale(3), x) == 3 * pl_eval(fan, f, x)
    assert pl_eval(fan, f, (2 * x[0], 2 * x[1])) == 2 * pl_eval(fan, f, x)
    # linear functions are additive everywhere
    m = (int(v[0].numerator), int(w[0].numerator))
    lin = PLFunction.from_linear(fan, m)
    s = (x[0] + y[0], x[1] + y[1])
    assert pl_eval(fan, lin, s) == pl_eval(fan, lin, x) + pl_eval(fan, lin, y)
    assert pl_eval(fan, lin, x) == m[0] * x[0] + m[1] * x[1]


@given(values)
@settings(max_examples=60, deadline=None)
def test_pl_consistent_on_shared_faces(v):
    fan = hexagon_fan()
    f = PLFunction(v)
    for i, r in enumerate(fan.rays):
        # a ray evaluated from either adjacent cone
        for k in (1, 5):
            assert pl_eval(fan, f, tuple(k * t for t in r)) == k * Fraction(v[i])


def test_to_dict_roundtrip():
    d = P2.to_dict()
    again = build_and_validate(d["lattice_rank"], d["rays"], [c["rays"] for c in d["max_cones"]])
    assert again.rays == P2.rays and again.max_cones == P2.max_cones
    assert transpose(((1, 2),)) == ((1,), (2,))

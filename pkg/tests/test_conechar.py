import random
from fractions import Fraction

import pytest

from oracles import cone_integral_2d, square_pyramid_integral
from toriheights.conechar import (
    PolyhedralCone,
    a_b_invariants,
    alpha,
    char_function,
    dual_cone,
    eval_char,
    invariant_picard,
    random_order_char_function,
)
from toriheights.errors import ClassNotInterior, NotFullDimensional, NotPointed, PoleHit
from toriheights.fan import PLFunction, projective_space_fan
from toriheights.galois import ray_orbits, trivial_action

ORTHANT3 = PolyhedralCone.from_generators(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
PYRAMID = PolyhedralCone.from_generators(3, [(1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1)])
PENTAGON = PolyhedralCone.from_generators(3, [(1, 0, 1), (0, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -2, 1)])
WEDGE = PolyhedralCone.from_generators(2, [(1, 0), (1, 2)])
CONES = [ORTHANT3, PYRAMID, PENTAGON, WEDGE, PolyhedralCone.from_generators(4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, -1, 0)])]


def _interior_point(c, rng):
    # X converges on the interior of c, which contains every positive combination of its generators
    weights = [rng.randint(1, 9) for _ in c.generators]
    return [sum(w * g[k] for w, g in zip(weights, c.generators)) for k in range(c.ambient_rank)]


def test_orthant():
    x = char_function(ORTHANT3)
    for u in [(1, 2, 3), (Fraction(1, 2), 5, 7)]:
        assert eval_char(x, u) == 1 / (Fraction(u[0]) * u[1] * u[2])


def test_dual_cone():
    assert set(dual_cone(ORTHANT3).generators) == set(ORTHANT3.generators)
    d = dual_cone(WEDGE)
    assert set(d.generators) == {(0, 1), (2, -1)}
    assert set(dual_cone(d).generators) == set(WEDGE.generators)
    assert set(dual_cone(PYRAMID).generators) == {(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)}


def test_redundant_generators_dropped():
    c = PolyhedralCone.from_generators(2, [(1, 0), (1, 1), (0, 1), (2, 2)])
    assert c.generators == ((0, 1), (1, 0))


def test_rejections():
    with pytest.raises(NotPointed):
        PolyhedralCone.from_generators(2, [(1, 0), (-1, 0), (0, 1)])
    with pytest.raises(NotFullDimensional):
        PolyhedralCone.from_generators(2, [(1, 0)])
    with pytest.raises(PoleHit):
        eval_char(char_function(WEDGE), (1, 0))


def test_wedge_value():
    assert eval_char(char_function(WEDGE), (3, 1)) == Fraction(2, 5)


@pytest.mark.parametrize("u", [(3, 1), (1, 1), (2, 3), (1, Fraction(1, 3))])
def test_wedge_by_quadrature(u):
    got = float(eval_char(char_function(WEDGE), u))
    # the integral runs over the dual cone of the wedge
    assert got == pytest.approx(cone_integral_2d(dual_cone(WEDGE).generators, u), rel=1e-9)


@pytest.mark.parametrize("u", [(0, 0, 3), (1, 0.5, 3), (-0.5, 1, 2.5)])
def test_square_pyramid_by_quadrature(u):
    # the pyramid is self-dual up to a lattice rotation, so integrate over dual(PYRAMID) directly
    c = dual_cone(PYRAMID)
    u_frac = [Fraction(x).limit_denominator(10) for x in u]
    got = float(eval_char(char_function(c), u_frac))
    assert got == pytest.approx(square_pyramid_integral(u), rel=1e-8)


@pytest.mark.parametrize("idx", range(len(CONES)))
def test_triangulation_independence_and_homogeneity(idx):
    c = CONES[idx]
    rng = random.Random(idx)
    base = char_function(c)
    others = [random_order_char_function(c, rng) for _ in range(4)]
    r = c.ambient_rank
    for _ in range(20):
        u = _interior_point(c, rng)
        v = eval_char(base, u)
        assert v > 0
        for o in others:
            assert eval_char(o, u) == v
        lam = Fraction(rng.randint(1, 7), rng.randint(1, 7))
        assert eval_char(base, [lam * x for x in u]) == v / lam ** r


@pytest.mark.parametrize("name, value", [("p2", Fraction(1, 3)), ("conic", Fraction(1, 2)), ("dp6", Fraction(1, 12)),
                                         ("p2rot", Fraction(1, 3)), ("conics2", Fraction(1, 4)), ("dp6_cubic", Fraction(1, 3))])
def test_alpha(shipped, name, value):
    ff = shipped[name]
    assert alpha(ff.fan, ff.action) == value


# exceptional curves C1, C2, C3, C12, C13, C23 as rays of the hexagon fan
DP6_CURVES = {"1": 0, "2": 2, "3": 4, "12": 1, "13": 5, "23": 3}


def _dp6_closed_form(u):
    num = sum(u.values())
    den = (u["1"] + u["23"]) * (u["2"] + u["13"]) * (u["3"] + u["12"]) * (u["1"] + u["2"] + u["3"]) * (u["12"] + u["13"] + u["23"])
    return num / den


def test_dp6_characteristic_function(shipped):
    ff = shipped["dp6"]
    ip = invariant_picard(ff.fan, ff.action)
    x = char_function(ip.effective)
    classes = [tuple(row[i] for row in ip.projection) for i in range(ff.fan.n_rays)]
    rng = random.Random(6)
    samples = [{k: Fraction(1) for k in DP6_CURVES}]
    samples += [{k: Fraction(rng.randint(1, 20), rng.randint(1, 5)) for k in DP6_CURVES} for _ in range(20)]
    for u in samples:
        pic = [sum(u[k] * classes[i][j] for k, i in DP6_CURVES.items()) for j in range(len(classes[0]))]
        coords = ip.coords(pic)
        assert eval_char(x, coords) == _dp6_closed_form(u)
    assert _dp6_closed_form(samples[0]) == Fraction(1, 12)


@pytest.mark.parametrize("name", ["conic", "p2rot", "conics2", "dp6_cubic"])
def test_anticanonical_ab(shipped, name):
    ff = shipped[name]
    a, b = a_b_invariants(ff.fan, ff.action, PLFunction.anticanonical(ff.fan))
    assert (a, b) == (1, len(ray_orbits(ff.action)))


def test_ab_examples(shipped):
    p2 = projective_space_fan(2)
    act = trivial_action(p2)
    assert a_b_invariants(p2, act, PLFunction([0, 0, 1])) == (3, 1)
    ff = shipped["conics2"]
    assert a_b_invariants(ff.fan, ff.action, PLFunction([1, 1, 2, 2])) == (1, 1)
    with pytest.raises(ClassNotInterior):
        a_b_invariants(p2, act, PLFunction([0, 0, 0]))


def test_a_ignores_linear_part(shipped):
    ff = shipped["dp6"]
    base = PLFunction([2, 1, 2, 1, 2, 1])
    for m in [(1, 0), (0, 1), (-1, 2), (3, -1)]:
        shifted = base + PLFunction.from_linear(ff.fan, m)
        assert a_b_invariants(ff.fan, ff.action, shifted) == a_b_invariants(ff.fan, ff.action, base)

"""Characteristic functions of polyhedral cones and the constants alpha, a(L), b(L).

X(u) = integral over the dual cone of exp(-<u, y>) dy, with Lebesgue measure
giving the dual lattice covolume 1.  A simplicial cone with generators F
contributes |det F| / prod <u, f>, so triangulating the dual cone gives an
exact rational function.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import AnticanonicalOnBoundary, ClassNotInterior, NotFullDimensional, NotPointed, PoleHit
from .fan import Fan, PLFunction, picard_lattice
from .galois import GaloisAction, picard_action, ray_orbits
from .lattice import IntVector, coordinates, dot, fixed_sublattice, primitive, rank
from .polyhedra import extreme_rays, placing_triangulation, simplicial_volume


@dataclass(frozen=True)
class PolyhedralCone:
    ambient_rank: int
    generators: tuple[IntVector, ...]
    facets: tuple[IntVector, ...] = field(default=(), compare=False)

    @classmethod
    def from_generators(cls, ambient_rank: int, generators: Sequence[Sequence[int]]) -> "PolyhedralCone":
        gens = tuple(sorted({primitive(g) for g in generators if any(g)}))
        for g in gens:
            if len(g) != ambient_rank:
                raise ValueError(f"generator {g} does not have length {ambient_rank}")
        if rank(gens) < ambient_rank:
            raise NotFullDimensional("generators do not span the ambient space")
        facets = tuple(extreme_rays(gens, ambient_rank))
        if rank(facets) < ambient_rank:
            raise NotPointed("cone contains a line")
        # keep only extreme generators
        extreme = tuple(g for g in gens if rank([f for f in facets if dot(f, g) == 0]) == ambient_rank - 1)
        return cls(ambient_rank, extreme, facets)

    def contains(self, u) -> bool:
        return all(dot(f, u) >= 0 for f in self.facets)

    def interior_contains(self, u) -> bool:
        return all(dot(f, u) > 0 for f in self.facets)


def dual_cone(c: PolyhedralCone) -> PolyhedralCone:
    return PolyhedralCone.from_generators(c.ambient_rank, c.facets)


@dataclass(frozen=True)
class SimplicialTermSum:
    ambient_rank: int
    terms: tuple[tuple[Fraction, tuple[IntVector, ...]], ...]

    def to_dict(self) -> dict:
        return {
            "ambient_rank": self.ambient_rank,
            "terms": [
                {"weight": {"n": str(w.numerator), "d": str(w.denominator)}, "forms": [list(f) for f in forms]}
                for w, forms in self.terms
            ],
        }


def char_function(c: PolyhedralCone, order: Sequence[int] | None = None) -> SimplicialTermSum:
    """Triangulate the dual cone (placing order: lex, or ``order`` if given)."""
    gens = sorted(c.facets)
    if order is not None:
        gens = [gens[i] for i in order]
    terms = []
    for simplex in placing_triangulation(gens):
        forms = tuple(gens[i] for i in simplex)
        terms.append((simplicial_volume(forms), forms))
    return SimplicialTermSum(c.ambient_rank, tuple(terms))


def eval_char(x: SimplicialTermSum, u: Sequence) -> Fraction:
    u = [Fraction(v) for v in u]
    total = Fraction(0)
    for w, forms in x.terms:
        den = Fraction(1)
        for f in forms:
            val = sum(a * b for a, b in zip(f, u))
            if val == 0:
                raise PoleHit(f"<u, {f}> = 0")
            den *= val
        total += w / den
    return total


def random_order_char_function(c: PolyhedralCone, rng: random.Random) -> SimplicialTermSum:
    order = list(range(len(c.facets)))
    rng.shuffle(order)
    return char_function(c, order)


# ---------------------------------------------------------------------------
# effective cones

@dataclass(frozen=True)
class InvariantPicard:
    """Pic^G with a basis, the effective cone in it and the anticanonical class."""

    basis: tuple[IntVector, ...]
    effective: PolyhedralCone
    anticanonical: tuple[Fraction, ...]
    projection: tuple

    def coords(self, pic_vector) -> tuple[Fraction, ...] | None:
        return coordinates(self.basis, pic_vector)


def invariant_picard(fan: Fan, action: GaloisAction) -> InvariantPicard:
    pic = picard_lattice(fan)
    mats = [picard_action(fan, p, pic) for p in action.ray_permutations]
    basis = tuple(fixed_sublattice(mats, pic.rank))
    classes = [tuple(row[i] for row in pic.projection) for i in range(fan.n_rays)]
    gens = []
    for orb in ray_orbits(action).orbits:
        v = [sum(classes[i][k] for i in orb) for k in range(pic.rank)]
        gens.append(tuple(int(x) for x in coordinates(basis, v)))
    k = tuple(sum(classes[i][k] for i in range(fan.n_rays)) for k in range(pic.rank))
    cone = PolyhedralCone.from_generators(len(basis), gens)
    return InvariantPicard(basis, cone, coordinates(basis, k), pic.projection)


def alpha(fan: Fan, action: GaloisAction) -> Fraction:
    """X of the effective cone in Pic^G evaluated at the anticanonical class."""
    ip = invariant_picard(fan, action)
    if not ip.effective.interior_contains(ip.anticanonical):
        raise AnticanonicalOnBoundary("the anticanonical class is not interior to the effective cone")
    return eval_char(char_function(ip.effective), ip.anticanonical)


def a_b_invariants(fan: Fan, action: GaloisAction, L: PLFunction) -> tuple[Fraction, int]:
    """a = inf{lambda : lambda [L] + [K] effective}; b = codimension of the minimal face at a[L] + [K]."""
    ip = invariant_picard(fan, action)
    divisor = [Fraction(v) for v in L.ray_values]
    pic_class = [sum(a * b for a, b in zip(row, divisor)) for row in ip.projection]
    lc = ip.coords(pic_class)
    if lc is None:
        raise ClassNotInterior("the class of L is not Galois invariant")
    facets = ip.effective.facets
    if not all(dot(f, lc) > 0 for f in facets):
        raise ClassNotInterior("the class of L is not interior to the effective cone")
    k = ip.anticanonical
    a = max(Fraction(dot(f, k)) / dot(f, lc) for f in facets)
    point = [a * x - y for x, y in zip(lc, k)]
    tight = [f for f in facets if dot(f, point) == 0]
    return a, rank(tight)


"""Complete regular fans, piecewise-linear functions and the Picard lattice.

A fan is given by its primitive ray generators and its maximal cones (as
lists of ray indices).  Only complete regular fans are accepted: every
maximal cone is spanned by a Z-basis of N.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import BadIntersection, NotComplete, NotPrimitive, NotRegular, ParseError, TorsionInPicard
from .lattice import (
    AbelianInvariants,
    IntMatrix,
    IntVector,
    as_vector,
    det,
    diagonal,
    dot,
    smith_normal_form,
    transpose,
    unimodular_inverse,
    vec_gcd,
)
from .polyhedra import extreme_rays, in_cone


@dataclass(frozen=True, order=True)
class Cone:
    ray_indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.ray_indices)

    def __str__(self):
        return "<" + ",".join(map(str, self.ray_indices)) + ">"


ZERO_CONE = Cone(())


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[IntVector, ...]
    max_cones: tuple[tuple[int, ...], ...]
    cones: tuple[Cone, ...] = field(repr=False)
    _inverses: tuple = field(repr=False, compare=False, default=())

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def is_cone(self, ray_set: Iterable[int]) -> bool:
        return Cone(tuple(sorted(set(ray_set)))) in self._cone_set

    @property
    def _cone_set(self) -> frozenset:
        # cached lazily; dataclass is frozen so go through object.__setattr__
        try:
            return self.__dict__["_cone_set_cache"]
        except KeyError:
            s = frozenset(self.cones)
            object.__setattr__(self, "_cone_set_cache", s)
            return s

    def cones_of_dim(self, k: int) -> list[Cone]:
        return [c for c in self.cones if c.dim == k]

    def to_dict(self) -> dict:
        return {
            "lattice_rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [{"rays": list(c)} for c in self.max_cones],
        }

    @classmethod
    def trivial(cls) -> "Fan":
        """The rank-0 fan consisting of the zero cone only."""
        return cls(0, (), ((),), (ZERO_CONE,), ((),))


def _faces(max_cones) -> tuple[Cone, ...]:
    out = set()
    for mc in max_cones:
        for k in range(len(mc) + 1):
            for sub in combinations(mc, k):
                out.add(Cone(sub))
    return tuple(sorted(out, key=lambda c: (c.dim, c.ray_indices)))


def build_and_validate(rank: int, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]]) -> Fan:
    """Build a fan and check primitivity, regularity, completeness and intersections."""
    rays = tuple(as_vector(r) for r in rays)
    if rank == 0 and not rays:
        return Fan.trivial()
    if not rays:
        raise ParseError("a fan needs at least one ray")
    for r in rays:
        if len(r) != rank:
            raise ParseError(f"ray {r} does not have length {rank}")
        if vec_gcd(r) != 1:
            raise NotPrimitive(f"ray {r} is not primitive")
    if len(set(rays)) != len(rays):
        raise ParseError("duplicate rays")
    mcs = []
    for mc in max_cones:
        idx = tuple(sorted(set(int(i) for i in mc)))
        if any(i < 0 or i >= len(rays) for i in idx):
            raise ParseError(f"cone {list(mc)} refers to a missing ray")
        mcs.append(idx)
    mcs = tuple(sorted(set(mcs)))
    used = {i for mc in mcs for i in mc}
    if used != set(range(len(rays))):
        raise ParseError(f"rays {sorted(set(range(len(rays))) - used)} belong to no cone")

    inverses = []
    for mc in mcs:
        if len(mc) > rank:
            raise NotRegular(f"cone {list(mc)} has more generators than the rank")
        if len(mc) < rank:
            raise NotComplete(f"maximal cone {list(mc)} is not full-dimensional")
        gens = [rays[i] for i in mc]
        if abs(det(transpose(gens))) != 1:
            raise NotRegular(f"cone {list(mc)} is not generated by a lattice basis")
        inverses.append(unimodular_inverse(transpose(gens)))

    # every codimension-one face lies in exactly two maximal cones
    facets = Counter(f for mc in mcs for f in combinations(mc, rank - 1))
    for f, k in sorted(facets.items()):
        if k != 2:
            raise NotComplete(f"facet {list(f)} lies in {k} maximal cone(s)")
    adj: dict[int, list[int]] = {i: [] for i in range(len(mcs))}
    by_facet: dict[tuple, list[int]] = {}
    for i, mc in enumerate(mcs):
        for f in combinations(mc, rank - 1):
            by_facet.setdefault(f, []).append(i)
    for a, b in by_facet.values():
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in adj[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    if len(seen) != len(mcs):
        raise NotComplete("maximal cones do not form a connected complex")

    for i, j in combinations(range(len(mcs)), 2):
        _check_intersection(rays, mcs[i], mcs[j], inverses[i], inverses[j], rank)

    return Fan(rank, rays, mcs, _faces(mcs), tuple(inverses))


def _check_intersection(rays, c1, c2, inv1, inv2, rank):
    """sigma1 and sigma2 must meet exactly in the cone on their common rays."""
    ineqs = list(inv1) + list(inv2)
    common = sorted(set(c1) & set(c2))
    basis = [rays[i] for i in common]
    for r in extreme_rays(ineqs, rank):
        if not basis or not in_cone(basis, r):
            raise BadIntersection(f"cones {list(c1)} and {list(c2)} overlap beyond a common face")


# ---------------------------------------------------------------------------
# locating points

def locate(fan: Fan, x) -> tuple[Cone, tuple[Fraction, ...]]:
    """The cone whose relative interior contains x, with the (positive) coordinates of x."""
    if all(t == 0 for t in x):
        return ZERO_CONE, ()
    for mc, inv in zip(fan.max_cones, fan._inverses):
        c = [sum(Fraction(a) * b for a, b in zip(row, x)) for row in inv]
        if all(t >= 0 for t in c):
            support = tuple(i for i, t in zip(mc, c) if t > 0)
            coords = tuple(t for t in c if t > 0)
            return Cone(support), coords
    raise AssertionError("complete fan does not contain the point")  # pragma: no cover


# ---------------------------------------------------------------------------
# piecewise-linear functions

@dataclass(frozen=True)
class PLFunction:
    ray_values: tuple

    def __post_init__(self):
        object.__setattr__(self, "ray_values", tuple(self.ray_values))

    def __add__(self, other: "PLFunction") -> "PLFunction":
        return PLFunction(tuple(a + b for a, b in zip(self.ray_values, other.ray_values)))

    def scale(self, c) -> "PLFunction":
        return PLFunction(tuple(c * a for a in self.ray_values))

    @classmethod
    def anticanonical(cls, fan: Fan) -> "PLFunction":
        return cls((Fraction(1),) * fan.n_rays)

    @classmethod
    def from_linear(cls, fan: Fan, m: Sequence[int]) -> "PLFunction":
        return cls(tuple(Fraction(dot(m, e)) for e in fan.rays))


def pl_eval(fan: Fan, phi: PLFunction, x) -> Fraction:
    if len(phi.ray_values) != fan.n_rays:
        raise ValueError("PL function has the wrong number of ray values")
    cone, coords = locate(fan, x)
    return sum((c * Fraction(phi.ray_values[i]) for i, c in zip(cone.ray_indices, coords)), Fraction(0))


# ---------------------------------------------------------------------------
# divisors and Picard group

@dataclass(frozen=True)
class PicardLattice:
    """Pic = D(Sigma)/M, with D(Sigma) = Z^n spanned by the ray divisors D_i.

    ``projection`` is an r x n matrix Z^n -> Z^r with kernel the saturation of
    M; ``section`` is an n x r matrix with projection * section = identity.
    """

    rank: int
    projection: IntMatrix
    section: IntMatrix
    torsion: AbelianInvariants

    def class_of(self, divisor: Sequence) -> tuple:
        """Pic coordinates of sum_i divisor[i] D_i (rational entries allowed)."""
        return tuple(sum(a * Fraction(b) for a, b in zip(row, divisor)) for row in self.projection)


def picard_lattice(fan: Fan) -> PicardLattice:
    n, d = fan.n_rays, fan.rank
    if d == 0:
        return PicardLattice(0, (), (), AbelianInvariants(0))
    s, u, _ = smith_normal_form(fan.rays)  # rows = rays: the map M -> Z^n
    diag = [x for x in diagonal(s) if x]
    r_m = len(diag)
    torsion = AbelianInvariants(0, tuple(x for x in diag if x > 1))
    proj = [list(u[i]) for i in range(r_m, n)]
    # orient each Pic coordinate so the anticanonical class is nonnegative
    for row in proj:
        if sum(row) < 0:
            row[:] = [-x for x in row]
    proj_m = tuple(tuple(r) for r in proj)
    # a section: complete proj to a unimodular matrix and invert
    full = tuple(tuple(u[i]) for i in range(r_m)) + proj_m
    inv = unimodular_inverse(full)
    section = tuple(tuple(inv[i][j] for j in range(r_m, n)) for i in range(n))
    pic = PicardLattice(n - r_m, proj_m, section, torsion)
    if torsion.torsion:
        raise TorsionInPicard(f"D(Sigma)/M has torsion {torsion}")
    return pic


def effective_cone_generators(fan: Fan, pic: PicardLattice) -> list[IntVector]:
    """Pic coordinates of [D_1], ..., [D_n] (duplicates kept)."""
    return [tuple(row[i] for row in pic.projection) for i in range(fan.n_rays)]


def anticanonical_class(fan: Fan, pic: PicardLattice) -> IntVector:
    return tuple(sum(row) for row in pic.projection)


# ---------------------------------------------------------------------------
# standard fans

def projective_space_fan(d: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(d)) for i in range(d)] + [(-1,) * d]
    return build_and_validate(d, rays, list(combinations(range(d + 1), d)))


def product_fan(f1: Fan, f2: Fan) -> Fan:
    rays = [r + (0,) * f2.rank for r in f1.rays] + [(0,) * f1.rank + r for r in f2.rays]
    cones = [c1 + tuple(f1.n_rays + j for j in c2) for c1 in f1.max_cones for c2 in f2.max_cones]
    return build_and_validate(f1.rank + f2.rank, rays, cones)


def hexagon_fan() -> Fan:
    """Fan of the toric del Pezzo surface of degree 6."""
    rays = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
    return build_and_validate(2, rays, [(i, (i + 1) % 6) for i in range(6)])

"""Finite groups of lattice automorphisms acting on fans.

Elements are integer matrices acting on N (columns are images of the
standard basis).  The dual action on M is the transpose-inverse, and the
action on the ray divisors D(Sigma) = Z^n permutes coordinates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .errors import (
    DimensionMismatch,
    FanNotInvariant,
    GroupTooLarge,
    NonCyclicGroup,
    NotAnisotropic,
    NotFiniteOrder,
    NotUnimodular,
)
from .fan import Fan, build_and_validate, picard_lattice
from .lattice import (
    AbelianInvariants,
    IntMatrix,
    as_matrix,
    det,
    fixed_sublattice,
    identity,
    integer_kernel,
    integral_coordinates,
    mat_add,
    mat_mul,
    mat_pow,
    mat_sub,
    mat_vec,
    quotient_invariants,
    transpose,
    unimodular_inverse,
)

DEFAULT_GROUP_CAP = 10_000


@dataclass(frozen=True)
class GaloisAction:
    rank: int
    elements: tuple[IntMatrix, ...]
    ray_permutations: tuple[tuple[int, ...], ...]
    generators: tuple[IntMatrix, ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def permutation_of(self, g: IntMatrix) -> tuple[int, ...]:
        return self.ray_permutations[self.elements.index(as_matrix(g))]

    def is_trivial(self) -> bool:
        return self.order == 1


@dataclass(frozen=True)
class OrbitPartition:
    orbits: tuple[tuple[int, ...], ...]
    orbit_of: tuple[int, ...]

    def __len__(self):
        return len(self.orbits)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(o) for o in self.orbits)


def ray_permutation(fan: Fan, g: IntMatrix) -> tuple[int, ...]:
    """perm[i] = j with g e_i = e_j; raises if g moves a ray off the ray set or breaks a cone."""
    index = {r: i for i, r in enumerate(fan.rays)}
    perm = []
    for i, r in enumerate(fan.rays):
        img = mat_vec(g, r)
        if img not in index:
            raise FanNotInvariant(f"element {[list(x) for x in g]} maps ray {r} to {img}, which is not a ray")
        perm.append(index[img])
    maxset = set(fan.max_cones)
    for mc in fan.max_cones:
        img = tuple(sorted(perm[i] for i in mc))
        if img not in maxset:
            raise FanNotInvariant(f"element {[list(x) for x in g]} maps cone {list(mc)} to {list(img)}, which is not a cone")
    return tuple(perm)


def close_and_verify(fan: Fan, generators: Sequence, cap: int = DEFAULT_GROUP_CAP) -> GaloisAction:
    d = fan.rank
    gens = []
    for g in generators:
        g = as_matrix(g)
        if len(g) != d or any(len(r) != d for r in g):
            raise DimensionMismatch(f"generator must be {d}x{d}")
        if d and abs(det(g)) != 1:
            raise NotUnimodular(f"generator {[list(r) for r in g]} has determinant {det(g)}")
        ray_permutation(fan, g)
        gens.append(g)
    one = identity(d)
    elements = [one]
    seen = {one}
    queue = deque([one])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = mat_mul(g, a)
            if b not in seen:
                seen.add(b)
                elements.append(b)
                queue.append(b)
                if len(elements) > cap:
                    raise GroupTooLarge(f"group closure exceeds {cap} elements")
    perms = tuple(ray_permutation(fan, g) for g in elements)
    return GaloisAction(d, tuple(elements), perms, tuple(gens))


def trivial_action(fan: Fan) -> GaloisAction:
    return close_and_verify(fan, [])


def ray_orbits(action: GaloisAction) -> OrbitPartition:
    n = len(action.ray_permutations[0])
    orbit_of = [-1] * n
    orbits = []
    for i in range(n):
        if orbit_of[i] >= 0:
            continue
        orb = sorted({p[i] for p in action.ray_permutations})
        for j in orb:
            orbit_of[j] = len(orbits)
        orbits.append(tuple(orb))
    return OrbitPartition(tuple(orbits), tuple(orbit_of))


def cycles_of(perm: Sequence[int]) -> OrbitPartition:
    """Orbits of the cyclic group generated by one permutation, sorted by least element."""
    n = len(perm)
    orbit_of = [-1] * n
    orbits = []
    for i in range(n):
        if orbit_of[i] >= 0:
            continue
        cyc = [i]
        j = perm[i]
        while j != i:
            cyc.append(j)
            j = perm[j]
        for j in cyc:
            orbit_of[j] = len(orbits)
        orbits.append(tuple(sorted(cyc)))
    return OrbitPartition(tuple(orbits), tuple(orbit_of))


def is_anisotropic(action: GaloisAction) -> bool:
    return not fixed_sublattice(action.elements, action.rank)


def dual_matrix(g: IntMatrix) -> IntMatrix:
    """The action on M = Hom(N, Z) of an element acting on N."""
    return transpose(unimodular_inverse(g))


def permutation_matrix(perm: Sequence[int]) -> IntMatrix:
    """Matrix of D_j -> D_perm[j] on Z^n."""
    n = len(perm)
    return tuple(tuple(int(perm[j] == i) for j in range(n)) for i in range(n))


def picard_action(fan: Fan, perm: Sequence[int], pic=None) -> IntMatrix:
    """Matrix of the induced action on Pic coordinates."""
    pic = pic or picard_lattice(fan)
    if pic.rank == 0:
        return ()
    return mat_mul(mat_mul(pic.projection, permutation_matrix(perm)), pic.section)


def invariant_fan(fan: Fan, action: GaloisAction) -> Fan:
    """The fan of G-invariant cones intersected with the fixed space, in a basis of N^G."""
    if action.is_trivial():
        return fan
    basis = fixed_sublattice(action.elements, fan.rank)
    if not basis:
        return Fan.trivial()
    orbits = ray_orbits(action)
    inv_cones = []
    for c in fan.cones:
        if not c.ray_indices:
            continue
        s = set(c.ray_indices)
        if all(set(orbits.orbits[orbits.orbit_of[i]]) <= s for i in s):
            inv_cones.append(tuple(sorted({orbits.orbit_of[i] for i in s})))
    used = sorted({j for c in inv_cones for j in c})
    new_index = {j: k for k, j in enumerate(used)}
    rays = []
    for j in used:
        v = [0] * fan.rank
        for i in orbits.orbits[j]:
            v = [a + b for a, b in zip(v, fan.rays[i])]
        rays.append(integral_coordinates(basis, v))
    cone_sets = [frozenset(c) for c in inv_cones]
    maximal = [c for c in cone_sets if not any(c < o for o in cone_sets)]
    max_cones = sorted({tuple(sorted(new_index[j] for j in c)) for c in maximal})
    return build_and_validate(len(basis), rays, max_cones)


# ---------------------------------------------------------------------------
# cohomology of cyclic groups

def h1_cyclic(generator: IntMatrix, order: int) -> AbelianInvariants:
    """H^1(<g>, Z^r) = ker(Norm) / im(g - 1) for g of the given order."""
    g = as_matrix(generator)
    r = len(g)
    if r == 0:
        return AbelianInvariants(0)
    if order < 1 or mat_pow(g, order) != identity(r):
        raise NotFiniteOrder(f"generator does not satisfy g^{order} = 1")
    norm = identity(r)
    power = identity(r)
    for _ in range(order - 1):
        power = mat_mul(g, power)
        norm = mat_add(norm, power)
    kernel = integer_kernel(norm, r)
    if not kernel:
        return AbelianInvariants(0)
    aug = mat_sub(g, identity(r))
    image = [integral_coordinates(kernel, col) for col in transpose(aug)]
    return quotient_invariants(len(kernel), image)


def element_order(g: IntMatrix, cap: int = DEFAULT_GROUP_CAP) -> int:
    one = identity(len(g))
    power = g
    for k in range(1, cap + 1):
        if power == one:
            return k
        power = mat_mul(g, power)
    raise NotFiniteOrder("element order exceeds the cap")


def cyclic_generator(action: GaloisAction) -> IntMatrix:
    for g in action.elements:
        if element_order(g) == action.order:
            return g
    raise NonCyclicGroup(f"group of order {action.order} is not cyclic")


def beta_and_h(fan: Fan, action: GaloisAction) -> tuple[int, int]:
    g = cyclic_generator(action)
    k = action.order
    h = h1_cyclic(dual_matrix(g), k).order
    pic = picard_lattice(fan)
    beta = h1_cyclic(picard_action(fan, action.permutation_of(g), pic), k).order
    return h, beta


def picard_rank_over_K(fan: Fan, action: GaloisAction) -> int:
    if not is_anisotropic(action):
        raise NotAnisotropic("the action fixes a nonzero vector of N")
    ell = len(ray_orbits(action))
    pic = picard_lattice(fan)
    mats = [picard_action(fan, p, pic) for p in action.ray_permutations]
    assert len(fixed_sublattice(mats, pic.rank)) == ell
    return ell


# ---------------------------------------------------------------------------
# automorphisms

def fan_automorphisms(fan: Fan) -> list[IntMatrix]:
    """All lattice automorphisms of N preserving the fan.

    An automorphism is determined by the image of one maximal cone's rays,
    so it is enough to try every ordered maximal cone as a target.
    """
    d = fan.rank
    if d == 0:
        return [()]
    base = fan.max_cones[0]
    src_inv = unimodular_inverse(transpose([fan.rays[i] for i in base]))
    out = set()
    for mc in fan.max_cones:
        for tgt in permutations(mc):
            g = mat_mul(transpose([fan.rays[i] for i in tgt]), src_inv)
            try:
                ray_permutation(fan, g)
            except FanNotInvariant:
                continue
            out.add(g)
    return sorted(out)

"""Point counts of tori and toric varieties over finite fields."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .fan import Cone, Fan
from .galois import dual_matrix, ray_permutation
from .lattice import IntMatrix, as_matrix, det, identity, integer_kernel, integral_coordinates, mat_sub, mat_vec, transpose


@dataclass(frozen=True)
class FrobeniusDatum:
    matrix: IntMatrix
    q: int

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix))
        if self.q < 2:
            raise ValueError("q must be at least 2")


def _det_minus_q(a: IntMatrix, q: int) -> int:
    r = len(a)
    if r == 0:
        return 1
    return det(mat_sub(a, tuple(tuple(q * x for x in row) for row in identity(r))))


def count_torus(phi: FrobeniusDatum, d: int) -> int:
    """Card T(F_q) = (-1)^d det(Phi - q)."""
    if len(phi.matrix) != d:
        raise ValueError(f"Frobenius matrix is not {d}x{d}")
    return (-1) ** d * _det_minus_q(phi.matrix, phi.q)


def invariant_cones(fan: Fan, perm) -> list[Cone]:
    return [c for c in fan.cones if sorted(perm[i] for i in c.ray_indices) == list(c.ray_indices)]


def orthogonal_action(fan: Fan, cone: Cone, m_action: IntMatrix) -> IntMatrix:
    """Matrix of the M-action restricted to M cap sigma^perp, in a kernel basis."""
    d = fan.rank
    if cone.dim == 0:
        return m_action
    basis = integer_kernel([fan.rays[i] for i in cone.ray_indices], d)
    if not basis:
        return ()
    cols = [integral_coordinates(basis, mat_vec(m_action, b)) for b in basis]
    return transpose(cols)


def count_toric(fan: Fan, phi: FrobeniusDatum) -> int:
    """Card P_Sigma(F_q) as a sum over Frobenius-stable cones of signed torus-orbit counts."""
    perm = ray_permutation(fan, phi.matrix)
    m_action = dual_matrix(phi.matrix) if fan.rank else ()
    total = 0
    for c in invariant_cones(fan, perm):
        codim = fan.rank - c.dim
        total += (-1) ** codim * _det_minus_q(orthogonal_action(fan, c, m_action), phi.q)
    return total


# ---------------------------------------------------------------------------
# brute force over explicit finite fields

def _poly_mulmod(a, b, f, p):
    m = len(f) - 1
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # f is monic, low degree first
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for j in range(m + 1):
                prod[k - m + j] = (prod[k - m + j] - c * f[j]) % p
    return tuple(prod[:m])


def _poly_pow(a, e, f, p):
    m = len(f) - 1
    result = (1,) + (0,) * (m - 1)
    while e:
        if e & 1:
            result = _poly_mulmod(result, a, f, p)
        a = _poly_mulmod(a, a, f, p)
        e >>= 1
    return result


def irreducible_poly(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree m in 2 or 3 over F_p (coefficients low degree first)."""
    if m not in (2, 3):
        raise ValueError("only degrees 2 and 3 are supported")
    for low in product(range(p), repeat=m):
        f = low + (1,)
        # degree <= 3 is irreducible iff it has no root
        if all(sum(c * pow(x, i, p) for i, c in enumerate(f)) % p for x in range(p)):
            return f
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def brute_force_norm_torus(p: int, m: int) -> int:
    """Count a in F_{p^m}^* with N(a) = a^{1+p+...+p^{m-1}} = 1 by enumeration."""
    if p ** m > 10 ** 6:
        raise ValueError("field too large for enumeration")
    f = irreducible_poly(p, m)
    e = (p ** m - 1) // (p - 1)
    one = (1,) + (0,) * (m - 1)
    count = 0
    for a in product(range(p), repeat=m):
        if any(a) and _poly_pow(a, e, f, p) == one:
            count += 1
    return count

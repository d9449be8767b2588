"""Local heights, Euler factors of height zeta functions and archimedean transforms.

Non-archimedean factors are evaluated from the numerator Q of the Frobenius
trace series.  Q only involves the cycle variables through T_j = t_j^{d_j},
and T_j is replaced by chi(n_j) q^{-phi(n_j)} where n_j is the sum of the
rays in cycle j.  Factors (1 - T_j) that divide Q are cancelled exactly
first, which is what makes cycles with n_j = 0 evaluate correctly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from sympy import primerange

from .errors import DivergentFactor, PoleHit
from .fan import Fan, PLFunction, pl_eval
from .galois import GaloisAction, dual_matrix, invariant_fan, ray_orbits
from .lattice import IntMatrix, as_matrix, dot, identity
from .sr_ring import MultigradedPolynomial, chow_trace_polynomial, det_one_minus_t, eval_univariate, frobenius_cycles, q_polynomial


@dataclass(frozen=True)
class LocalPlace:
    q: int = 0
    frobenius: IntMatrix = ()
    is_archimedean: bool = False

    def __post_init__(self):
        if not self.is_archimedean and self.q < 2:
            raise ValueError("a non-archimedean place needs q >= 2")


@dataclass(frozen=True)
class CharacterPhases:
    values: tuple

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        for v in vals:
            if abs(abs(v) - 1) > 1e-12:
                raise ValueError(f"phase {v} does not have modulus 1")
        object.__setattr__(self, "values", vals)

    @classmethod
    def trivial(cls, ell: int) -> "CharacterPhases":
        return cls((1,) * ell)


def local_height(fan: Fan, phi: PLFunction, place: LocalPlace, xbar: Sequence[int]) -> float:
    """H_v = q_v^{phi(xbar)}, or e^{phi(xbar)} at an archimedean place."""
    val = pl_eval(fan, phi, xbar)
    if place.is_archimedean:
        return math.exp(val)
    return place.q ** float(val)


# ---------------------------------------------------------------------------
# Euler factors

@dataclass(frozen=True)
class EulerFactor:
    """Q(T) / prod_j (1 - T_j) with T_j = phase_j q^{-exponent_j}.

    ``numerator`` is a polynomial in the T variables, ``substitutions`` holds
    the value of each T_j and ``denominators`` lists the cycles whose factor
    (1 - T_j) survived cancellation.
    """

    numerator: MultigradedPolynomial
    substitutions: tuple
    denominators: tuple[int, ...]
    cancelled: bool

    def value(self) -> complex:
        num = self.numerator.evaluate(self.substitutions)
        den = 1
        for j in self.denominators:
            den *= 1 - self.substitutions[j]
        return num / den


def _divide_one_minus(poly: MultigradedPolynomial, j: int) -> MultigradedPolynomial | None:
    """poly / (1 - T_j) if the division is exact, else None."""
    by_rest: dict = {}
    for k, c in poly.terms.items():
        rest = k[:j] + (0,) + k[j + 1:]
        by_rest.setdefault(rest, {})[k[j]] = c
    out = {}
    for rest, col in by_rest.items():
        if sum(col.values()) != 0:
            return None
        acc = 0
        for e in range(max(col)):
            acc += col.get(e, 0)
            if acc:
                out[rest[:j] + (e,) + rest[j + 1:]] = acc
    return MultigradedPolynomial(poly.nvars, out)


@lru_cache(maxsize=256)
def _reduced_q(fan: Fan, phi: IntMatrix):
    """Q in T variables with every exactly dividing (1 - T_j) removed."""
    orbits = frobenius_cycles(fan, phi)
    q = q_polynomial(fan, phi, orbits)
    lens = orbits.lengths
    poly = MultigradedPolynomial(len(lens), {tuple(e // d for e, d in zip(k, lens)): c for k, c in q.terms.items()})
    remaining = []
    for j in range(len(lens)):
        div = _divide_one_minus(poly, j)
        if div is None:
            remaining.append(j)
        else:
            poly = div
    return orbits, poly, tuple(remaining)


def cycle_sums(fan: Fan, orbits) -> list[tuple[int, ...]]:
    out = []
    for orb in orbits.orbits:
        v = [0] * fan.rank
        for i in orb:
            v = [a + b for a, b in zip(v, fan.rays[i])]
        out.append(tuple(v))
    return out


def euler_factor(fan: Fan, phi_v, q: int, phi: PLFunction, phases: CharacterPhases | None = None) -> EulerFactor:
    phi_v = as_matrix(phi_v)
    orbits, poly, remaining = _reduced_q(fan, phi_v)
    ell = len(orbits)
    phases = phases or CharacterPhases.trivial(ell)
    if len(phases.values) != ell:
        raise ValueError(f"expected {ell} phases, got {len(phases.values)}")
    subs = []
    for n_j, ph in zip(cycle_sums(fan, orbits), phases.values):
        expo = float(pl_eval(fan, phi, n_j))
        val = ph * q ** (-expo)
        subs.append(val.real if ph == 1 else val)
    for j in remaining:
        if abs(subs[j]) >= 1:
            raise DivergentFactor(f"cycle {orbits.orbits[j]} has |T| = {abs(subs[j])} >= 1")
    return EulerFactor(poly, tuple(subs), remaining, len(remaining) < ell)


def local_euler_factor(fan: Fan, phi_v, q: int, phi: PLFunction, phases: CharacterPhases | None = None) -> complex:
    return euler_factor(fan, phi_v, q, phi, phases).value()


def artin_local_factor(phi_m: IntMatrix, q: int, s: float) -> float:
    """1 / det(I - q^{-s} Phi_M)."""
    return 1 / eval_univariate(det_one_minus_t(phi_m), q ** (-s))


def local_factor_diagonal(fan: Fan, phi_v, q: int, s: float) -> float:
    phi_v = as_matrix(phi_v)
    m_action = dual_matrix(phi_v) if fan.rank else ()
    t = q ** (-s)
    return artin_local_factor(m_action, q, s) * eval_univariate(chow_trace_polynomial(fan, phi_v), t)


# ---------------------------------------------------------------------------
# global products

Splitting = Callable[[int], "IntMatrix | None"]


def split_everywhere(fan: Fan) -> Splitting:
    one = identity(fan.rank)
    return lambda p: one


def kronecker(d: int, p: int) -> int:
    """Kronecker symbol (d / p) for a prime p."""
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = d % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def quadratic_splitting(fan: Fan, discriminant: int, action: GaloisAction) -> Splitting:
    """Frobenius I at split primes and the nontrivial element at inert ones; ramified primes skipped."""
    if action.order != 2:
        raise ValueError("a quadratic splitting needs a group of order 2")
    one = identity(fan.rank)
    sigma = next(g for g in action.elements if g != one)

    def frob(p):
        k = kronecker(discriminant, p)
        if k == 0:
            return None
        return one if k == 1 else sigma

    return frob


def table_splitting(table: Mapping[int, IntMatrix], default: IntMatrix | None = None) -> Splitting:
    return lambda p: table.get(p, default)


def truncated_global_product(fan: Fan, splitting: Splitting, phi: PLFunction, prime_bound: int) -> complex:
    """Product over primes p <= prime_bound of the local factors at trivial phases (ascending order)."""
    total = 1.0
    for p in primerange(2, prime_bound + 1):
        frob = splitting(int(p))
        if frob is None:
            continue
        total *= local_euler_factor(fan, frob, int(p), phi)
    return total


# ---------------------------------------------------------------------------
# archimedean places

def archimedean_fourier(fan: Fan, s: Sequence[complex], y: Sequence[float]) -> complex:
    """sum over maximal cones of prod_{e_j in sigma} 1 / (s_j + 2 pi i <y, e_j>)."""
    if len(s) != fan.n_rays:
        raise ValueError("need one value of s per ray")
    total = 0j
    for mc in fan.max_cones:
        term = 1 + 0j
        for j in mc:
            den = complex(s[j]) + 2j * math.pi * dot(y, fan.rays[j])
            if den == 0:
                raise PoleHit(f"factor for ray {j} vanishes")
            term /= den
        total += term
    return total


def real_place_integral(fan: Fan, action: GaloisAction, s: Sequence[float]) -> float:
    """Integral of e^{-phi} over the fixed space N^G_R, computed on the invariant fan.

    Each invariant cone generated by orbit sums contributes prod 1/phi(orbit sum).
    """
    inv = invariant_fan(fan, action)
    if inv.rank == 0:
        return 1.0
    orbits = ray_orbits(action)
    if action.is_trivial():
        values = list(s)
    else:
        used = sorted({j for c in fan.cones for j in [orbits.orbit_of[i] for i in c.ray_indices]
                       if set(orbits.orbits[j]) <= set(c.ray_indices)})
        values = [sum(s[i] for i in orbits.orbits[j]) for j in used]
    total = 0.0
    for mc in inv.max_cones:
        term = 1.0
        for j in mc:
            term /= values[j]
        total += term
    return total


def phase_conjugate(phases: CharacterPhases) -> CharacterPhases:
    return CharacterPhases(tuple(v.conjugate() for v in phases.values))


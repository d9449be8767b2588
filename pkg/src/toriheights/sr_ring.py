"""Stanley-Reisner monomials, Frobenius trace series and their numerators.

A monomial of R(Sigma) is an exponent vector whose support spans a cone.
A Frobenius element permuting the rays permutes these monomials; the trace
on each multigraded piece is the number of fixed monomials.  Fixed
monomials are constant on each Frobenius cycle of rays, so profiles are
indexed by the cycles (in order of least ray index) and the degree in
cycle j is a multiple of its length d_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .errors import NonIntegralCoordinates, PolynomialityCheckFailed
from .fan import Fan, locate
from .galois import OrbitPartition, cycles_of, dual_matrix, ray_permutation
from .lattice import charpoly

Profile = tuple[int, ...]


@dataclass(frozen=True)
class MultigradedPolynomial:
    """Integer polynomial in t_1..t_l stored as {exponent profile: coefficient}."""

    nvars: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(k): int(v) for k, v in self.terms.items() if v}
        for k in clean:
            if len(k) != self.nvars or min(k, default=0) < 0:
                raise ValueError(f"bad profile {k}")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def one(cls, nvars: int) -> "MultigradedPolynomial":
        return cls(nvars, {(0,) * nvars: 1})

    def __eq__(self, other):
        return isinstance(other, MultigradedPolynomial) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def coefficient(self, profile: Sequence[int]) -> int:
        return self.terms.get(tuple(profile), 0)

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def mul(self, other: "MultigradedPolynomial", cap: int | None = None) -> "MultigradedPolynomial":
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                if cap is not None and sum(k) > cap:
                    continue
                out[k] = out.get(k, 0) + c1 * c2
        return MultigradedPolynomial(self.nvars, out)

    def truncate(self, cap: int) -> "MultigradedPolynomial":
        return MultigradedPolynomial(self.nvars, {k: c for k, c in self.terms.items() if sum(k) <= cap})

    def sorted_terms(self) -> list[tuple[Profile, int]]:
        """Graded-lex order: by total degree, then lexicographically descending."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))

    def evaluate(self, values: Sequence) -> complex:
        total = 0
        for k, c in self.terms.items():
            term = c
            for v, e in zip(values, k):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def collapse(self) -> list[int]:
        """Univariate coefficients after setting every t_j = t."""
        deg = self.degree()
        coeffs = [0] * (deg + 1)
        for k, c in self.terms.items():
            coeffs[sum(k)] += c
        return coeffs

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.sorted_terms():
            mono = "*".join(f"t{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(k) if e)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {b}" for s, b in parts[1:])


def monomial_of_point(fan: Fan, x: Sequence[int]) -> tuple[int, ...]:
    cone, coords = locate(fan, x)
    exps = [0] * fan.n_rays
    for i, c in zip(cone.ray_indices, coords):
        if c.denominator != 1:
            raise NonIntegralCoordinates(f"{x} has coordinates {coords} in cone {cone}")
        exps[i] = int(c)
    return tuple(exps)


def point_of_monomial(fan: Fan, exps: Sequence[int]) -> tuple[int, ...]:
    x = [0] * fan.rank
    for e, r in zip(exps, fan.rays):
        if e:
            x = [a + e * b for a, b in zip(x, r)]
    return tuple(x)


def frobenius_cycles(fan: Fan, phi) -> OrbitPartition:
    return cycles_of(ray_permutation(fan, phi))


def _check_orbits(fan: Fan, phi, orbits: OrbitPartition | None) -> OrbitPartition:
    cyc = frobenius_cycles(fan, phi)
    if orbits is None:
        return cyc
    if sorted(orbits.orbits) != sorted(cyc.orbits):
        raise ValueError("orbit partition must consist of the Frobenius cycles of the rays")
    return orbits


def _stable_cones(fan: Fan, orbits: OrbitPartition) -> list[tuple[int, ...]]:
    """Cones that are unions of cycles, as sorted tuples of cycle indices."""
    out = []
    for c in fan.cones:
        s = set(c.ray_indices)
        js = {orbits.orbit_of[i] for i in s}
        if sum(len(orbits.orbits[j]) for j in js) == len(s):
            out.append(tuple(sorted(js)))
    return out


def trace_series(fan: Fan, phi, orbits: OrbitPartition | None = None, degree_cap: int | None = None) -> MultigradedPolynomial:
    """Truncated multigraded series of traces of Phi on R(Sigma)."""
    orbits = _check_orbits(fan, phi, orbits)
    lens = orbits.lengths
    if degree_cap is None:
        degree_cap = fan.n_rays + max(lens, default=0) + 2
    ell = len(lens)
    terms: dict = {}
    for js in _stable_cones(fan, orbits):
        # exponent c_j >= 1 on each cycle of the support; degree in cycle j is d_j c_j
        ranges = [range(1, degree_cap // lens[j] + 1) for j in js]
        for cs in product(*ranges):
            if sum(lens[j] * c for j, c in zip(js, cs)) > degree_cap:
                continue
            prof = [0] * ell
            for j, c in zip(js, cs):
                prof[j] = lens[j] * c
            prof = tuple(prof)
            terms[prof] = terms.get(prof, 0) + 1
    return MultigradedPolynomial(ell, terms)


def _denominator(lens: Sequence[int]) -> MultigradedPolynomial:
    ell = len(lens)
    out = MultigradedPolynomial.one(ell)
    for j, d in enumerate(lens):
        mono = tuple(d if k == j else 0 for k in range(ell))
        out = out.mul(MultigradedPolynomial(ell, {(0,) * ell: 1, mono: -1}))
    return out


def q_polynomial(fan: Fan, phi, orbits: OrbitPartition | None = None) -> MultigradedPolynomial:
    """Numerator Q with P = Q / prod_j (1 - t_j^{d_j}), certified to be a polynomial of degree n."""
    orbits = _check_orbits(fan, phi, orbits)
    lens = orbits.lengths
    n = fan.n_rays
    cap = n + max(lens)
    series = trace_series(fan, phi, orbits, cap)
    prod = series.mul(_denominator(lens), cap)
    high = {k: c for k, c in prod.terms.items() if n < sum(k) <= cap}
    if high:
        raise PolynomialityCheckFailed(f"terms beyond degree {n}: {high}")
    q = prod.truncate(n)
    if q.coefficient((0,) * len(lens)) != 1:
        raise PolynomialityCheckFailed("constant term is not 1")
    for k in q.terms:
        if 0 < sum(k) < 2:
            raise PolynomialityCheckFailed(f"nonconstant term of degree {sum(k)}")
        if any(e % d for e, d in zip(k, lens)):
            raise PolynomialityCheckFailed(f"profile {k} is not a multiple of the cycle lengths")
    top = [c for k, c in q.terms.items() if sum(k) == n]
    if len(top) != 1 or abs(top[0]) != 1:
        raise PolynomialityCheckFailed(f"expected a single top term of degree {n} with coefficient +-1, got {top}")
    return q


def _poly_mul(a: Sequence[int], b: Sequence[int], cap: int) -> list[int]:
    out = [0] * (min(len(a) + len(b) - 1, cap + 1))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j <= cap:
                out[i + j] += x * y
    return out


def det_one_minus_t(m_action) -> list[int]:
    """Coefficients of det(I - t A), lowest degree first."""
    if len(m_action) == 0:
        return [1]
    return list(reversed(charpoly(m_action)))


def chow_trace_polynomial(fan: Fan, phi) -> list[int]:
    """det(I - t Phi|M) * P(t,...,t), certified to have degree d and constant term 1."""
    d = fan.rank
    orbits = frobenius_cycles(fan, phi)
    cap = d + max(orbits.lengths) + 2
    series = trace_series(fan, phi, orbits, cap).collapse()
    series += [0] * (cap + 1 - len(series))
    m_action = dual_matrix(phi) if d else ()
    out = _poly_mul(det_one_minus_t(m_action), series, cap)
    if any(out[d + 1:]):
        raise PolynomialityCheckFailed(f"terms beyond degree {d}: {out[d + 1:]}")
    out = out[: d + 1]
    if out[0] != 1 or out[d] == 0:
        raise PolynomialityCheckFailed(f"unexpected shape {out}")
    return out


def eval_univariate(coeffs: Iterable, t):
    total = 0
    for c in reversed(list(coeffs)):
        total = total * t + c
    return total


def fixed_monomials(fan: Fan, phi, degree: int) -> list[tuple[int, ...]]:
    """All monomials of total degree ``degree`` fixed by the ray permutation (slow reference)."""
    perm = ray_permutation(fan, phi)
    out = []
    for c in fan.cones:
        idx = c.ray_indices
        for es in product(range(1, degree + 1), repeat=len(idx)):
            if sum(es) != degree:
                continue
            v = [0] * fan.n_rays
            for i, e in zip(idx, es):
                v[i] = e
            if all(v[perm[i]] == v[i] for i in range(fan.n_rays)):
                out.append(tuple(v))
    if degree == 0:
        out = [(0,) * fan.n_rays]
    return out

"""Exact polyhedral-cone primitives: double description and placing triangulations."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .lattice import IntVector, coordinates, det, dot, primitive, primitive_rational, rank, solve_rational, transpose


def extreme_rays(inequalities: Sequence[IntVector], dim: int) -> list[IntVector]:
    """Extreme rays of the pointed cone {x : <a, x> >= 0 for every a}.

    Incremental double description started from ``dim`` independent rows.
    The cone must be pointed, i.e. the rows must span the dual space; the
    result may be empty when the cone is {0}.  Rays are primitive integer
    vectors sorted lexicographically.
    """
    ineqs = [tuple(a) for a in inequalities if any(a)]
    if rank(ineqs) < dim:
        raise ValueError("inequalities do not define a pointed cone")
    start: list[int] = []
    for i in range(len(ineqs)):
        if rank([ineqs[j] for j in start + [i]]) == len(start) + 1:
            start.append(i)
            if len(start) == dim:
                break
    base = [ineqs[i] for i in start]
    rays = []
    for k in range(dim):
        e = tuple(int(k == j) for j in range(dim))
        rays.append(primitive_rational(solve_rational(base, e)))
    processed = list(base)
    for i, a in enumerate(ineqs):
        if i in start:
            continue
        vals = [dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        zer = [r for r, v in zip(rays, vals) if v == 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        if not neg:
            processed.append(a)
            continue
        new = []
        for rp, vp in ((r, v) for r, v in zip(rays, vals) if v > 0):
            zp = {j for j, b in enumerate(processed) if dot(b, rp) == 0}
            for rn, vn in neg:
                common = [processed[j] for j in zp if dot(processed[j], rn) == 0]
                if dim >= 2 and rank(common) != dim - 2:
                    continue
                combo = tuple(vp * y - vn * x for x, y in zip(rp, rn))
                new.append(primitive(combo))
        rays = pos + zer + new
        rays = sorted(set(rays))
        processed.append(a)
    return sorted(set(r for r in rays if any(r)))


def in_cone(basis: Sequence[IntVector], x) -> bool:
    """Whether x is a nonnegative combination of the independent vectors ``basis``."""
    c = coordinates(basis, x)
    return c is not None and all(t >= 0 for t in c)


def placing_triangulation(points: Sequence[IntVector]) -> list[tuple[int, ...]]:
    """Placing triangulation of the cone spanned by ``points`` (in the given order).

    Returns simplices as sorted index tuples; each simplex is a basis of the
    linear span of all points.  A point already inside the current cone adds
    nothing; a point outside the current span is coned over every simplex;
    otherwise it is joined to every boundary facet visible from it.
    """
    simplices: list[tuple[int, ...]] = []
    span: list[IntVector] = []
    for i, p in enumerate(points):
        if not any(p):
            continue
        if not simplices:
            simplices = [(i,)]
            span = [p]
            continue
        if rank(span + [p]) > len(span):
            span.append(p)
            simplices = [s + (i,) for s in simplices]
            continue
        facet_count: dict[tuple[int, ...], int] = {}
        for s in simplices:
            for f in combinations(s, len(s) - 1):
                facet_count[f] = facet_count.get(f, 0) + 1
        added = []
        for s in simplices:
            c = coordinates([points[j] for j in s], p)
            for pos, opp in enumerate(s):
                if c[pos] < 0:
                    f = s[:pos] + s[pos + 1:]
                    if facet_count[f] == 1:
                        added.append(f + (i,))
        simplices.extend(added)
    return [tuple(sorted(s)) for s in simplices]


def simplicial_volume(vectors: Sequence[IntVector]) -> Fraction:
    """|det| of a square family of vectors."""
    return Fraction(abs(det(transpose(vectors))))

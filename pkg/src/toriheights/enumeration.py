"""Points of bounded height on small families, and fitting c B^a (log B)^(b-1).

Families:

* ``projective(d)``: P^d with the anticanonical height max|x_i|^(d+1).
* ``conic(D)``: N(x + y w) = z^2 for the quadratic order of discriminant
  D < 0, with height max(|x|, |y|, |z|).  The norm form is anisotropic, so
  every rational point lies in the norm-one torus and is gamma/conj(gamma)
  for a primitive gamma = u + v w, unique up to sign.
* ``norm_cubic(f)``: N_{K/Q}(z1 + z2 t + z3 t^2) = z0^3 for K = Q[t]/(f),
  with the ambient height max|z_i| as a proxy.

Projective points are represented by primitive integer tuples whose first
nonzero coordinate is positive.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Sequence

import numpy as np

from .errors import BoundTooLarge, InsufficientData, NotOnVariety, NotPrimitive, ParseError


@dataclass(frozen=True)
class PointFamily:
    name: str
    params: tuple
    n_coords: int
    on_variety: Callable[[Sequence[int]], bool] = field(repr=False, compare=False)
    height_of: Callable[[Sequence[int]], int] = field(repr=False, compare=False)
    cap: int = 10 ** 4
    predicted: tuple | None = None

    def __str__(self):
        return f"{self.name}:{','.join(map(str, self.params))}"


def projective(d: int) -> PointFamily:
    if d < 1:
        raise ParseError("projective dimension must be positive")
    cap = 10 ** 6 if d == 1 else 10 ** 4
    return PointFamily(
        "projective", (d,), d + 1,
        on_variety=lambda x: True,
        height_of=lambda x: max(abs(t) for t in x) ** (d + 1),
        cap=cap,
        predicted=(1, 1),
    )


def _quadratic_basis(D: int) -> tuple[int, int]:
    """(trace, norm) of the standard generator w of the order of discriminant D."""
    if D % 4 == 0:
        return 0, -D // 4
    if D % 4 == 1:
        return 1, (1 - D) // 4
    raise ParseError(f"{D} is not a discriminant")


def quadratic_norm(D: int, x: int, y: int) -> int:
    tr, nm = _quadratic_basis(D)
    return x * x + tr * x * y + nm * y * y


def conic(D: int) -> PointFamily:
    if D >= 0:
        raise ParseError("only negative discriminants are supported")
    _quadratic_basis(D)
    return PointFamily(
        "conic", (D,), 3,
        on_variety=lambda p: quadratic_norm(D, p[0], p[1]) == p[2] * p[2],
        height_of=lambda p: max(abs(t) for t in p),
        cap=10 ** 6,
        predicted=(1, 1),
    )


DEFAULT_CUBIC = (1, 0, -3, 1)  # x^3 - 3x + 1, leading coefficient first


def _companion(f: Sequence[int]) -> np.ndarray:
    if len(f) != 4 or f[0] != 1:
        raise ParseError("norm_cubic needs a monic cubic a3,a2,a1,a0 with a3 = 1")
    _, a2, a1, a0 = f
    return np.array([[0, 0, -a0], [1, 0, -a1], [0, 1, -a2]], dtype=np.int64)


def _norm_det(c: np.ndarray, z1, z2, z3):
    """det(z1 I + z2 C + z3 C^2), vectorized over integer arrays."""
    c2 = c @ c
    eye = np.eye(3, dtype=np.int64)
    m = [[z1 * eye[i, j] + z2 * c[i, j] + z3 * c2[i, j] for j in range(3)] for i in range(3)]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def cubic_norm(f: Sequence[int], z: Sequence[int]) -> int:
    c = _companion(f)
    return int(_norm_det(c.astype(object), *[int(t) for t in z]))


def norm_cubic(f: Sequence[int] = DEFAULT_CUBIC) -> PointFamily:
    f = tuple(int(a) for a in f)
    _companion(f)
    return PointFamily(
        "norm_cubic", f, 4,
        on_variety=lambda p: cubic_norm(f, p[1:]) == p[0] ** 3,
        height_of=lambda p: max(abs(t) for t in p),
        cap=10 ** 3,
        predicted=None,
    )


def parse_family(spec: str) -> PointFamily:
    """``projective:2``, ``conic:-4``, ``norm_cubic`` or ``norm_cubic:1,0,-3,1``."""
    name, _, arg = spec.partition(":")
    try:
        if name == "projective":
            return projective(int(arg or 1))
        if name == "conic":
            return conic(int(arg or -4))
        if name == "norm_cubic":
            return norm_cubic(tuple(int(a) for a in arg.split(",")) if arg else DEFAULT_CUBIC)
    except ValueError as exc:
        raise ParseError(f"bad family {spec!r}: {exc}") from None
    raise ParseError(f"unknown family {name!r}")


def family_height(family: PointFamily, point: Sequence[int]) -> int:
    point = tuple(int(t) for t in point)
    if len(point) != family.n_coords:
        raise ParseError(f"{family} points have {family.n_coords} coordinates")
    if not any(point) or reduce(math.gcd, point) != 1:
        raise NotPrimitive(f"{point} is not a primitive nonzero tuple")
    if not family.on_variety(point):
        raise NotOnVariety(f"{point} does not lie on {family}")
    return family.height_of(point)


# ---------------------------------------------------------------------------
# enumeration

@dataclass(frozen=True)
class CountSeries:
    bounds: tuple
    counts: tuple

    def __post_init__(self):
        if len(self.bounds) != len(self.counts):
            raise ValueError("bounds and counts differ in length")
        if any(b2 < b1 for b1, b2 in zip(self.bounds, self.bounds[1:])):
            raise ValueError("bounds must be ascending")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bound", "count"])
        for b, c in zip(self.bounds, self.counts):
            w.writerow([b, c])
        return buf.getvalue()


def _count_sorted(heights: np.ndarray, bounds: Sequence) -> tuple[int, ...]:
    heights = np.sort(heights)
    return tuple(int(np.searchsorted(heights, b, side="right")) for b in bounds)


def _first_nonzero_positive(pts: np.ndarray) -> np.ndarray:
    nz = pts != 0
    first = np.argmax(nz, axis=1)
    return pts[np.arange(len(pts)), first] > 0


def _projective_heights(d: int, bmax) -> np.ndarray:
    h = int(math.floor(bmax ** (1.0 / (d + 1)) + 1e-9))
    while (h + 1) ** (d + 1) <= bmax:
        h += 1
    while h > 0 and h ** (d + 1) > bmax:
        h -= 1
    if h == 0:
        return np.zeros(0, dtype=np.int64)
    axes = np.arange(-h, h + 1, dtype=np.int64)
    heights = []
    # shard on the first coordinate to bound memory
    for x0 in range(0, h + 1):
        rest = np.stack(np.meshgrid(*([axes] * d), indexing="ij"), axis=-1).reshape(-1, d)
        pts = np.concatenate([np.full((len(rest), 1), x0, dtype=np.int64), rest], axis=1)
        keep = np.gcd.reduce(np.abs(pts), axis=1) == 1
        keep &= _first_nonzero_positive(pts)
        pts = pts[keep]
        heights.append(np.abs(pts).max(axis=1) ** (d + 1))
    return np.concatenate(heights)


def conic_points(D: int, bmax) -> np.ndarray:
    """All points (x, y, z) of height <= bmax, one per projective point, via gamma = u + v w."""
    tr, nm = _quadratic_basis(D)
    limit = abs(D) * int(bmax)  # N(gamma) / gcd <= bmax and the gcd divides D
    vmax = int(math.isqrt(4 * limit // abs(D))) + 1
    out = []
    for v in range(0, vmax + 1):
        # N(u + v w) = u^2 + tr u v + nm v^2 <= limit
        disc = tr * tr * v * v - 4 * (nm * v * v - limit)
        if disc < 0:
            continue
        r = math.isqrt(disc)
        lo = (-tr * v - r) // 2 - 1
        hi = (-tr * v + r) // 2 + 1
        if v == 0:
            lo = 1
            hi = 1
        u = np.arange(lo, hi + 1, dtype=np.int64)
        vv = np.full_like(u, v)
        norm = u * u + tr * u * vv + nm * vv * vv
        keep = (norm <= limit) & (np.gcd(u, vv) == 1)
        u, vv, norm = u[keep], vv[keep], norm[keep]
        # gamma^2 = (u^2 - nm v^2) + (2uv + tr v^2) w
        x = u * u - nm * vv * vv
        y = 2 * u * vv + tr * vv * vv
        g = np.gcd(np.gcd(x, y), norm)
        pts = np.stack([x // g, y // g, norm // g], axis=1)
        pts = pts[np.abs(pts).max(axis=1) <= bmax]
        out.append(pts)
    if not out:
        return np.zeros((0, 3), dtype=np.int64)
    pts = np.concatenate(out)
    flip = ~_first_nonzero_positive(pts)
    pts[flip] = -pts[flip]
    return pts


def cubic_points(f: Sequence[int], bmax: int) -> np.ndarray:
    """Primitive (z0, z1, z2, z3) with z0 > 0 on the cubic and max|z_i| <= bmax."""
    c = _companion(f)
    b = int(bmax)
    axis = np.arange(-b, b + 1, dtype=np.int64)
    z2, z3 = np.meshgrid(axis, axis, indexing="ij")
    z2, z3 = z2.ravel(), z3.ravel()
    out = []
    for z1 in range(-b, b + 1):
        n = _norm_det(c, np.int64(z1), z2, z3)
        pos = n > 0
        nn = n[pos]
        r = np.rint(np.cbrt(nn.astype(np.float64))).astype(np.int64)
        for delta in (-1, 0, 1):
            rr = r + delta
            hit = (rr > 0) & (rr <= b) & (rr ** 3 == nn)
            if hit.any():
                zz2, zz3 = z2[pos][hit], z3[pos][hit]
                pts = np.stack([rr[hit], np.full(len(zz2), z1, dtype=np.int64), zz2, zz3], axis=1)
                pts = pts[np.gcd.reduce(np.abs(pts), axis=1) == 1]
                out.append(pts)
    if not out:
        return np.zeros((0, 4), dtype=np.int64)
    return np.unique(np.concatenate(out), axis=0)


def enumerate_points(family: PointFamily, bmax) -> np.ndarray:
    """Representative points of height <= bmax (small bounds; used for checks and listings)."""
    if family.name == "conic":
        return conic_points(family.params[0], bmax)
    if family.name == "norm_cubic":
        return cubic_points(family.params, bmax)
    d = family.params[0]
    h = 0
    while (h + 1) ** (d + 1) <= bmax:
        h += 1
    axes = np.arange(-h, h + 1, dtype=np.int64)
    pts = np.stack(np.meshgrid(*([axes] * (d + 1)), indexing="ij"), axis=-1).reshape(-1, d + 1)
    pts = pts[(np.gcd.reduce(np.abs(pts), axis=1) == 1) & _first_nonzero_positive(pts)]
    return pts


def enumerate_counts(family: PointFamily, bounds: Sequence, cap: int | None = None) -> CountSeries:
    bounds = tuple(sorted(bounds))
    cap = family.cap if cap is None else cap
    if not bounds:
        return CountSeries((), ())
    bmax = bounds[-1]
    if bmax > cap:
        raise BoundTooLarge(f"bound {bmax} exceeds the cap {cap} for {family}")
    if bmax < 1:
        return CountSeries(bounds, (0,) * len(bounds))
    if family.name == "projective":
        heights = _projective_heights(family.params[0], bmax)
    elif family.name == "conic":
        heights = np.abs(conic_points(family.params[0], bmax)).max(axis=1)
    else:
        heights = np.abs(cubic_points(family.params, int(bmax))).max(axis=1)
    return CountSeries(bounds, _count_sorted(heights, bounds))


# ---------------------------------------------------------------------------
# fitting

@dataclass(frozen=True)
class FitResult:
    a_hat: float
    b_hat: int
    c_hat: float
    residual: float

    def to_dict(self) -> dict:
        return {"a_hat": self.a_hat, "b_hat": self.b_hat, "c_hat": self.c_hat, "residual": self.residual}


def fit_asymptotic(series: CountSeries, b_candidates: Sequence[int] = (1, 2, 3, 4)) -> FitResult:
    """Least squares for log N = a log B + (b - 1) log log B + log c, best integer b."""
    pairs = [(float(b), float(n)) for b, n in zip(series.bounds, series.counts) if b > math.e and n > 0]
    if len(pairs) < 8:
        raise InsufficientData(f"need at least 8 usable bounds, got {len(pairs)}")
    bs = np.array([p[0] for p in pairs])
    ns = np.array([p[1] for p in pairs])
    if bs.max() / bs.min() < 100:
        raise InsufficientData("bounds must span at least two decades")
    logb = np.log(bs)
    design = np.stack([logb, np.ones_like(logb)], axis=1)
    best = None
    for b in b_candidates:
        target = np.log(ns) - (b - 1) * np.log(logb)
        coef, *_ = np.linalg.lstsq(design, target, rcond=None)
        resid = float(np.sum((design @ coef - target) ** 2))
        if best is None or resid < best.residual:
            best = FitResult(float(coef[0]), int(b), float(math.exp(coef[1])), resid)
    return best


def geometric_bounds(lo: float, hi: float, k: int) -> list[int]:
    return sorted({int(round(x)) for x in np.geomspace(lo, hi, k)})

"""L_p vector-space primitives: norms, distances, affine maps, plane rotations.

Points are plain tuples of floats, profiles are tuples of points.  All
operations are pure and return fresh value objects; nothing here mutates
its inputs, so everything is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ContractViolationError, DomainError, UnsupportedProfileError

Point = tuple[float, ...]
Profile = tuple[Point, ...]


@dataclass(frozen=True)
class SpaceConfig:
    """Ambient space: dimension ``m`` and exponent ``p`` of the L_p norm.

    Only 1 < p < inf is admitted; the limit norms L_1 and L_inf have
    non-strict triangle inequalities and are out of scope.
    """

    m: int
    p: float

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise ContractViolationError(f"dimension m must be a positive integer, got {self.m!r}")
        p = float(self.p)
        if not math.isfinite(p) or p <= 1.0:
            raise DomainError(f"exponent p must satisfy 1 < p < inf, got {self.p!r}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class PlaneRotation:
    """Givens-style rotation by ``theta`` in the (axis_i, axis_j) plane about ``center``.

    General rotations of m-space are compositions of these.
    """

    axis_i: int
    axis_j: int
    theta: float
    center: Point

    def __post_init__(self) -> None:
        if self.axis_i == self.axis_j:
            raise ContractViolationError("rotation plane needs two distinct axes")
        if min(self.axis_i, self.axis_j) < 0:
            raise ContractViolationError("rotation axes must be nonnegative indices")


def as_point(coords: Iterable[float]) -> Point:
    """Normalize a coordinate sequence into a Point, rejecting non-finite entries."""
    pt = tuple(float(c) for c in coords)
    if not all(math.isfinite(c) for c in pt):
        raise ContractViolationError(f"point has non-finite coordinate: {pt}")
    return pt


def as_profile(points: Iterable[Iterable[float]]) -> Profile:
    """Normalize a sequence of coordinate sequences into a Profile of equal-dimension points."""
    prof = tuple(as_point(p) for p in points)
    if not prof:
        raise ContractViolationError("profile must contain at least one agent")
    m = len(prof[0])
    if any(len(p) != m for p in prof):
        raise ContractViolationError("all agents in a profile must share one dimension")
    return prof


def check_point(pt: Sequence[float], m: int) -> None:
    if len(pt) != m:
        raise ContractViolationError(f"point of dimension {len(pt)} in a {m}-dimensional space")


def check_profile(profile: Profile, m: int) -> None:
    if not profile:
        raise ContractViolationError("empty profile")
    for pt in profile:
        check_point(pt, m)


def lp_distance(a: Sequence[float], b: Sequence[float], space: SpaceConfig) -> float:
    """d_p(a, b) = (sum_i |a_i - b_i|^p)^(1/p)."""
    check_point(a, space.m)
    check_point(b, space.m)
    p = space.p
    total = 0.0
    for ai, bi in zip(a, b):
        total += abs(ai - bi) ** p
    return total ** (1.0 / p)


def translate(pts: Profile, t: Sequence[float]) -> Profile:
    """Shift every agent by the vector ``t``."""
    if not pts:
        raise ContractViolationError("empty profile")
    m = len(pts[0])
    check_point(t, m)
    return tuple(tuple(c + dc for c, dc in zip(pt, t)) for pt in pts)


def translate_point(pt: Point, t: Sequence[float]) -> Point:
    check_point(t, len(pt))
    return tuple(c + dc for c, dc in zip(pt, t))


def scale(pts: Profile, k: float) -> Profile:
    """Multiply every coordinate by ``k``; only k > 0 is meaningful here."""
    if not (k > 0.0):
        raise DomainError(f"scale factor must be positive, got {k!r}")
    return tuple(tuple(c * k for c in pt) for pt in pts)


def scale_point(pt: Point, k: float) -> Point:
    if not (k > 0.0):
        raise DomainError(f"scale factor must be positive, got {k!r}")
    return tuple(c * k for c in pt)


def rotate_point(pt: Point, r: PlaneRotation) -> Point:
    m = len(pt)
    if m < 2:
        raise UnsupportedProfileError("plane rotations need dimension m >= 2")
    if max(r.axis_i, r.axis_j) >= m:
        raise ContractViolationError(f"rotation axes ({r.axis_i}, {r.axis_j}) out of range for m={m}")
    check_point(r.center, m)
    ci, cj = r.center[r.axis_i], r.center[r.axis_j]
    di = pt[r.axis_i] - ci
    dj = pt[r.axis_j] - cj
    cos_t = math.cos(r.theta)
    sin_t = math.sin(r.theta)
    out = list(pt)
    out[r.axis_i] = ci + di * cos_t - dj * sin_t
    out[r.axis_j] = cj + di * sin_t + dj * cos_t
    return tuple(out)


def rotate(pts: Profile, r: PlaneRotation) -> Profile:
    """Rotate every agent by ``r``; L_2 pairwise distances are preserved."""
    return tuple(rotate_point(pt, r) for pt in pts)


def center_two_agent(a: Point, b: Point, w: Point) -> tuple[Point, Point]:
    """Re-center a two-agent instance so the agents sit at -x and +x.

    Returns (x, y) with x = (b - a)/2 and y = w - (a + b)/2; in these
    coordinates the agents are -x, +x and the facility is y.
    """
    m = len(a)
    check_point(b, m)
    check_point(w, m)
    x = tuple((bi - ai) / 2.0 for ai, bi in zip(a, b))
    y = tuple(wi - (ai + bi) / 2.0 for ai, bi, wi in zip(a, b, w))
    return x, y

"""Seeded profile generation shared by the property checkers and the harness.

Every stream starts with deterministic corner-case fixtures (coincident
agents, axis-aligned lines, a collinear diagonal, and the 3-agent
3-dimensional median counterexample) before the uniform draws: the
interesting case splits of the catalog mechanisms live exactly on those
degenerate configurations, so they are forced into every campaign.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .geometry import Profile, SpaceConfig

# fixed 3-agent, 3-D profile whose per-dimension median is the origin while
# every pairwise inner product of (agent - origin) vectors equals -1
MEDIAN_COUNTEREXAMPLE: Profile = (
    (0.0, 1.0, -1.0),
    (-1.0, 0.0, 1.0),
    (1.0, -1.0, 0.0),
)

# sub-stream tags so each consumer draws from an independent seeded stream
STREAM_PROFILES = 0
STREAM_STRATEGYPROOF = 1
STREAM_UNANIMITY = 2
STREAM_TRANSLATION = 3
STREAM_SCALABILITY = 4
STREAM_ANONYMITY = 5
STREAM_ROTATION = 6
STREAM_LIPSCHITZ = 7
STREAM_AT_AGENT = 8
STREAM_PULL = 9
STREAM_CONJECTURE = 10
STREAM_RATIO = 11


def sub_rng(seed: int, tag: int) -> np.random.Generator:
    """Deterministic generator for one (seed, purpose) pair."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(tag),)))


def corner_fixtures(m: int, n: int, lo: float, hi: float) -> list[Profile]:
    """Deterministic degenerate profiles prepended to every sampled stream."""
    fixtures: list[Profile] = []
    if m == 3 and n == 3:
        fixtures.append(MEDIAN_COUNTEREXAMPLE)

    mid = (lo + hi) / 2.0
    width = hi - lo
    coincident = mid + width / 4.0
    fixtures.append(tuple((coincident,) * m for _ in range(n)))

    base = mid - width / 8.0
    span = width / 2.0
    offsets = [0.0] if n == 1 else [i * span / (n - 1) for i in range(n)]
    for axis in sorted({0, m - 1}):
        prof = []
        for off in offsets:
            pt = [base] * m
            pt[axis] = base + off
            prof.append(tuple(pt))
        fixtures.append(tuple(prof))
    if m > 1:
        fixtures.append(tuple(tuple(base + off for _ in range(m)) for off in offsets))

    seen: set[Profile] = set()
    unique = []
    for f in fixtures:
        if f not in seen:
            seen.add(f)
            unique.append(f)
    return unique


def profile_stream(space: SpaceConfig, num_agents: int, num_profiles: int, seed: int,
                   lo: float, hi: float, include_fixtures: bool = True) -> Iterator[Profile]:
    """Corner fixtures followed by ``num_profiles`` uniform seeded draws."""
    if include_fixtures:
        yield from corner_fixtures(space.m, num_agents, lo, hi)
    rng = sub_rng(seed, STREAM_PROFILES)
    for _ in range(num_profiles):
        pts = rng.uniform(lo, hi, size=(num_agents, space.m))
        yield tuple(tuple(float(c) for c in row) for row in pts)

"""The mechanism catalog behind a single evaluation interface.

Families
--------
dictator:i   output is always agent i's report (any n, any m)
c1:u,v       coordinatewise max/min of two 2-D agents, u,v in {0,1}
c2:u         perpendicular-lines construction keyed on the x-ordering, u != 0
c3:v         the x/y-swapped analogue of c2, v != 0
median       per-dimension median, larger middle value on even ties (any n, m)
midpoint     arithmetic mean of two agents; deliberately manipulable and
             kept as the negative control for the property checkers

All evaluations are pure functions of the reported profile.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ContractViolationError, ParseError, UnsupportedProfileError
from .geometry import Point, Profile, SpaceConfig, check_profile

DICTATOR = "dictator"
C1 = "c1"
C2 = "c2"
C3 = "c3"
MEDIAN = "median"
MIDPOINT = "midpoint"

FAMILIES = (DICTATOR, C1, C2, C3, MEDIAN, MIDPOINT)
TWO_AGENT_FAMILIES = frozenset({C1, C2, C3, MIDPOINT})
PLANAR_FAMILIES = frozenset({C1, C2, C3})

# integer codes shared with the kernel backends
FAMILY_CODES = {DICTATOR: 0, C1: 1, C2: 2, C3: 3, MEDIAN: 4, MIDPOINT: 5}


@dataclass(frozen=True)
class MechanismSpec:
    """Tagged descriptor of a mechanism family plus its parameters."""

    family: str
    params: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ContractViolationError(f"unknown mechanism family {self.family!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        n = len(self.params)
        if self.family == DICTATOR:
            if n != 1 or self.params[0] != int(self.params[0]) or self.params[0] < 0:
                raise ContractViolationError("dictator takes one nonnegative integer index")
        elif self.family == C1:
            if n != 2 or any(p not in (0.0, 1.0) for p in self.params):
                raise ContractViolationError("c1 takes parameters u,v in {0,1}")
        elif self.family in (C2, C3):
            if n != 1 or self.params[0] == 0.0:
                raise ContractViolationError(f"{self.family} takes one nonzero real parameter")
        elif n != 0:
            raise ContractViolationError(f"{self.family} takes no parameters")

    # -- convenience constructors -------------------------------------------------
    @classmethod
    def dictator(cls, index: int) -> "MechanismSpec":
        return cls(DICTATOR, (float(index),))

    @classmethod
    def c1(cls, u: int, v: int) -> "MechanismSpec":
        return cls(C1, (float(u), float(v)))

    @classmethod
    def c2(cls, u: float) -> "MechanismSpec":
        return cls(C2, (float(u),))

    @classmethod
    def c3(cls, v: float) -> "MechanismSpec":
        return cls(C3, (float(v),))

    @classmethod
    def general_median(cls) -> "MechanismSpec":
        return cls(MEDIAN)

    @classmethod
    def midpoint(cls) -> "MechanismSpec":
        return cls(MIDPOINT)

    @property
    def dictator_index(self) -> int:
        return int(self.params[0])

    def to_string(self) -> str:
        """Compact text form, e.g. ``dictator:0``, ``c1:1,1``, ``c2:1.5``."""
        if not self.params:
            return self.family
        rendered = ",".join(_render_param(p) for p in self.params)
        return f"{self.family}:{rendered}"

    def __str__(self) -> str:
        return self.to_string()

    def kernel_args(self) -> tuple[int, float, float]:
        """(family code, param1, param2) triple consumed by the kernel backends."""
        p1 = self.params[0] if self.params else 0.0
        p2 = self.params[1] if len(self.params) > 1 else 0.0
        return FAMILY_CODES[self.family], p1, p2


def _render_param(p: float) -> str:
    if p == int(p):
        return str(int(p))
    return repr(p)


def parse_mechanism(text: str) -> MechanismSpec:
    """Parse the compact text grammar ``family(:param(,param)*)?``."""
    text = text.strip()
    if not text:
        raise ParseError("empty mechanism string")
    family, _, rest = text.partition(":")
    family = family.lower()
    if family not in FAMILIES:
        raise ParseError(f"unknown mechanism family {family!r} in {text!r}")
    params: tuple[float, ...] = ()
    if rest:
        try:
            params = tuple(float(tok) for tok in rest.split(","))
        except ValueError as exc:
            raise ParseError(f"bad parameter list in mechanism string {text!r}") from exc
    try:
        return MechanismSpec(family, params)
    except ContractViolationError as exc:
        raise ParseError(f"invalid mechanism string {text!r}: {exc}") from exc


def required_num_agents(spec: MechanismSpec) -> int | None:
    """Fixed arity of the family, or None when any n >= 1 works."""
    return 2 if spec.family in TWO_AGENT_FAMILIES else None


# ---------------------------------------------------------------------------
# family evaluators (reference implementations; the kernel backends mirror them)
# ---------------------------------------------------------------------------

def eval_c1(u: int, v: int, a: Point, b: Point) -> Point:
    """Coordinatewise extremum: max with parameter 1, min with 0."""
    _require_planar(a, b, "c1")
    if a == b:
        return a
    x = max(a[0], b[0]) if u else min(a[0], b[0])
    y = max(a[1], b[1]) if v else min(a[1], b[1])
    return (x, y)


def eval_c2(u: float, a: Point, b: Point) -> Point:
    """Perpendicular-lines mechanism keyed on the x-ordering of the agents.

    After reordering so x_A <= x_B (ties broken by y), the slope
    R = (y_B - y_A)/(x_B - x_A) selects a case: inside the closed band the
    output is the intersection of the slope-u line through A with the
    slope-(-1/u) line through B; outside the band the output sits at an
    agent.  At R = u the intersection coincides with B and at R = -1/u it
    coincides with A, so the out-of-band branches extend those endpoints
    continuously (for u > 0 the overflow side keeps B, the underflow side
    keeps A; mirrored for u < 0).
    """
    _require_planar(a, b, "c2")
    if a == b:
        return a
    if (a[0], a[1]) > (b[0], b[1]):
        a, b = b, a
    xa, ya = a
    xb, yb = b
    if xa == xb:
        return (xa, max(ya, yb)) if u > 0 else (xa, min(ya, yb))
    r = (yb - ya) / (xb - xa)
    if u > 0:
        if r > u:
            return b
        if r < -1.0 / u:
            return a
    else:
        if r > -1.0 / u:
            return a
        if r < u:
            return b
    xw = (u * (yb - ya) + u * u * xa + xb) / (u * u + 1.0)
    yw = u * (xw - xa) + ya
    return (xw, yw)


def eval_c3(v: float, a: Point, b: Point) -> Point:
    """x/y-swapped analogue of :func:`eval_c2`, keyed on the y-ordering."""
    _require_planar(a, b, "c3")
    if a == b:
        return a
    if (a[1], a[0]) > (b[1], b[0]):
        a, b = b, a
    xa, ya = a
    xb, yb = b
    if ya == yb:
        return (max(xa, xb), ya) if v > 0 else (min(xa, xb), ya)
    s = (xb - xa) / (yb - ya)
    if v > 0:
        if s > v:
            return b
        if s < -1.0 / v:
            return a
    else:
        if s > -1.0 / v:
            return a
        if s < v:
            return b
    yw = (v * (xb - xa) + v * v * ya + yb) / (v * v + 1.0)
    xw = v * (yw - ya) + xa
    return (xw, yw)


def eval_general_median(profile: Profile) -> Point:
    """Per-dimension median; with an even agent count take the larger middle value."""
    if not profile:
        raise ContractViolationError("median of an empty profile")
    n = len(profile)
    return tuple(sorted(pt[d] for pt in profile)[n // 2] for d in range(len(profile[0])))


def eval_midpoint(a: Point, b: Point) -> Point:
    if len(a) != len(b):
        raise ContractViolationError("midpoint of points with different dimensions")
    return tuple((ai + bi) / 2.0 for ai, bi in zip(a, b))


def _require_planar(a: Point, b: Point, family: str) -> None:
    if len(a) != 2 or len(b) != 2:
        raise UnsupportedProfileError(f"{family} is defined only in dimension m = 2")


def evaluate(spec: MechanismSpec, profile: Profile, space: SpaceConfig) -> Point:
    """Run one mechanism on one profile and return the facility location."""
    check_profile(profile, space.m)
    n = len(profile)
    if spec.family in TWO_AGENT_FAMILIES and n != 2:
        raise UnsupportedProfileError(f"{spec.family} requires exactly 2 agents, got {n}")
    if spec.family in PLANAR_FAMILIES and space.m != 2:
        raise UnsupportedProfileError(f"{spec.family} is defined only in dimension m = 2")
    if spec.family == DICTATOR:
        i = spec.dictator_index
        if i >= n:
            raise UnsupportedProfileError(f"dictator index {i} out of range for n = {n}")
        return profile[i]
    if spec.family == C1:
        return eval_c1(int(spec.params[0]), int(spec.params[1]), profile[0], profile[1])
    if spec.family == C2:
        return eval_c2(spec.params[0], profile[0], profile[1])
    if spec.family == C3:
        return eval_c3(spec.params[0], profile[0], profile[1])
    if spec.family == MEDIAN:
        return eval_general_median(profile)
    return eval_midpoint(profile[0], profile[1])


def catalog(include_baselines: bool = True) -> list[MechanismSpec]:
    """The mechanisms exercised by the default verification campaign."""
    specs = [
        MechanismSpec.dictator(0),
        MechanismSpec.general_median(),
        MechanismSpec.c1(0, 0),
        MechanismSpec.c1(0, 1),
        MechanismSpec.c1(1, 0),
        MechanismSpec.c1(1, 1),
        MechanismSpec.c2(1.0),
        MechanismSpec.c2(-1.0),
        MechanismSpec.c2(0.5),
        MechanismSpec.c2(2.0),
        MechanismSpec.c3(1.0),
        MechanismSpec.c3(-1.0),
        MechanismSpec.c3(0.5),
        MechanismSpec.c3(2.0),
    ]
    if include_baselines:
        specs.append(MechanismSpec.midpoint())
    return specs

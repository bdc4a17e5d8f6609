"""Numerical embodiment of the facility-set characterizations.

Covers the Euclidean orthogonality residual (the facility of a two-agent
strategyproof mechanism lies on the sphere with the agent segment as
diameter), the L_p first-order residual pair with its finite-difference
oracle, the pairwise-orthogonality predicate for n agents with the
3-agent median counterexample, and the maximum-cost ratio experiment
that exhibits the factor-2 lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from . import sampling
from .errors import ContractViolationError, UnsupportedProfileError
from .geometry import Point, Profile, SpaceConfig, check_point, lp_distance
from .mechanisms import MechanismSpec, evaluate, required_num_agents
from .properties import FAIL, PASS, CheckConfig, PropertyReport, Witness
from .reportio import point_obj

# below this magnitude a |base|^(p-2) factor is treated as an exact zero of the
# whole term: z * |z|^(p-2) = sign(z) |z|^(p-1) -> 0 as z -> 0 for every p > 1
KINK_CUTOFF = 1e-12

# triples where some |x_i +- y_i| falls inside this margin sit too close to a
# kink of the p < 2 integrand for finite differences to be meaningful
KINK_MARGIN = 1e-4

FD_STEP = 1e-6
_MP_DPS = 40


@dataclass(frozen=True)
class ResidualPair:
    """First-order residuals of the two facility equations.

    Sign convention: each residual is the equation left-hand side
    sum (x_i + y_i)(x_i - y_i)|x_i -+ y_i|^(p-2), which equals the
    *negated* derivative of the corresponding squeezed-distance
    objective at zero.  At p = 2 both residuals collapse to
    sum (x_i^2 - y_i^2) = -<w - a, w - b>, i.e. the negated
    orthogonality residual.
    """

    r_g: float
    r_h: float


@dataclass(frozen=True)
class RatioResult:
    mechanism_max_cost: float
    optimal_max_cost: float
    ratio: float

    def to_json_obj(self) -> dict:
        return {
            "mechanism_max_cost": self.mechanism_max_cost,
            "optimal_max_cost": self.optimal_max_cost,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class Conjecture1Result:
    holds: bool
    best_pair: tuple[int, int]
    best_residual: float


@dataclass(frozen=True)
class StabilityFailure:
    profile: Profile
    output: Point
    expected: Point
    gap: float


@dataclass(frozen=True)
class LowerBoundOutcome:
    """Worst max-cost ratio over a campaign plus the stability evidence.

    ``stability_ok`` asserts that feeding (W, B) back into the mechanism
    returned W on every sampled pair with W != B; a failure flags a
    non-strategyproof mechanism rather than raising.
    """

    worst: RatioResult
    trials: int
    degenerate_skipped: int
    max_stability_gap: float
    stability_failures: tuple[StabilityFailure, ...]

    @property
    def stability_ok(self) -> bool:
        return not self.stability_failures


def orthogonality_residual(a: Point, b: Point, w: Point) -> float:
    """<w - a, w - b>: zero iff w lies on the sphere with segment ab as diameter."""
    m = len(a)
    check_point(b, m)
    check_point(w, m)
    return sum((wi - ai) * (wi - bi) for ai, bi, wi in zip(a, b, w))


def _signed_pow(z: float, q: float) -> float:
    # sign(z) * |z|^q with the continuous-extension cutoff at the kink
    az = abs(z)
    if az < KINK_CUTOFF:
        return 0.0
    return math.copysign(az ** q, z)


def _centered_sums(a: Point, b: Point, w: Point) -> tuple[tuple[float, ...], tuple[float, ...]]:
    # in centered coordinates x = (b-a)/2, y = w-(a+b)/2 the equations only use
    # x_i + y_i = w_i - a_i and x_i - y_i = b_i - w_i; forming those directly
    # keeps w = a an exact zero and the p = 2 sign relation bit-exact
    u = tuple(wi - ai for ai, wi in zip(a, w))
    v = tuple(bi - wi for bi, wi in zip(b, w))
    return u, v


def lp_residuals(a: Point, b: Point, w: Point, space: SpaceConfig) -> ResidualPair:
    """Evaluate both facility equations at (a, b, w) in centered coordinates."""
    m = len(a)
    if m != space.m:
        raise ContractViolationError(f"points of dimension {m} in a {space.m}-dimensional space")
    check_point(b, m)
    check_point(w, m)
    us, vs = _centered_sums(a, b, w)
    p = space.p
    r_g = 0.0
    r_h = 0.0
    for u, v in zip(us, vs):
        r_g += u * _signed_pow(v, p - 1.0)
        r_h += v * _signed_pow(u, p - 1.0)
    return ResidualPair(r_g=r_g, r_h=r_h)


def residual_via_finite_difference(a: Point, b: Point, w: Point, space: SpaceConfig,
                                   step: float = FD_STEP) -> ResidualPair:
    """Independent oracle: central differences of the two squeezed-distance objectives.

    G(alpha) = (1/p) sum |(y_i - x_i) + alpha (x_i + y_i)|^p and
    H(beta)  = (1/p) sum |(y_i + x_i) + beta (y_i - x_i)|^p are
    differentiated at 0.  The derivatives are the negated residuals, so
    the estimates are negated before returning to share the sign
    convention of :func:`lp_residuals`.  The objectives are evaluated in
    high precision (mpmath) because at double precision the rounding
    noise of the difference quotient reaches ~1e-4 at box scale for
    p = 4, which would drown the 1e-5 oracle tolerance.
    """
    us, vs = _centered_sums(a, b, w)
    with mpmath.workdps(_MP_DPS):
        p = mpmath.mpf(space.p)
        h = mpmath.mpf(step)
        ump = [mpmath.mpf(u) for u in us]
        vmp = [mpmath.mpf(v) for v in vs]

        def g_obj(alpha):
            # (1/p) sum |(y_i - x_i) + alpha (x_i + y_i)|^p == (1/p) sum |alpha u_i - v_i|^p
            return sum(abs(alpha * u - v) ** p for u, v in zip(ump, vmp)) / p

        def h_obj(beta):
            # (1/p) sum |(y_i + x_i) + beta (y_i - x_i)|^p == (1/p) sum |u_i - beta v_i|^p
            return sum(abs(u - beta * v) ** p for u, v in zip(ump, vmp)) / p

        dg = (g_obj(h) - g_obj(-h)) / (2 * h)
        dh = (h_obj(h) - h_obj(-h)) / (2 * h)
        return ResidualPair(r_g=float(-dg), r_h=float(-dh))


def near_kink(a: Point, b: Point, w: Point, margin: float = KINK_MARGIN) -> bool:
    """True when some |x_i +- y_i| is within ``margin`` of the kink at zero."""
    us, vs = _centered_sums(a, b, w)
    return any(abs(u) < margin or abs(v) < margin for u, v in zip(us, vs))


def normalized_residuals(pair: ResidualPair, a: Point, b: Point,
                         space: SpaceConfig) -> ResidualPair:
    """Residuals divided by max(1, d_p(a,b)^p): raw values scale like length^p,
    so thresholds on the normalized values are box-size free."""
    denom = max(1.0, lp_distance(a, b, space) ** space.p)
    return ResidualPair(r_g=pair.r_g / denom, r_h=pair.r_h / denom)


def conjecture1_predicate(profile: Profile, w: Point,
                          tolerance: float = 1e-9) -> Conjecture1Result:
    """Does some agent pair (i, j) satisfy <A_i - w, A_j - w> = 0?

    The i = j pair is admitted: when the facility sits on an agent the
    zero vector satisfies the predicate vacuously, and the 2-dimensional
    median argument relies on exactly that reading.
    """
    best = math.inf
    best_pair = (0, 0)
    n = len(profile)
    for i in range(n):
        for j in range(i, n):
            res = abs(orthogonality_residual(profile[i], profile[j], w))
            if res < best:
                best = res
                best_pair = (i, j)
    return Conjecture1Result(holds=best <= tolerance, best_pair=best_pair, best_residual=best)


def median_fits_conjecture_scan(m: int, cfg: CheckConfig) -> PropertyReport:
    """Scan general-median outputs on 3-agent profiles for the pairwise
    orthogonality predicate; expected to pass for m <= 2 and to fail for
    m = 3 on the embedded counterexample fixture."""
    space = SpaceConfig(m, 2.0)
    spec = MechanismSpec.general_median()
    trials = 0
    witness = None
    for profile in sampling.profile_stream(space, 3, cfg.num_profiles, cfg.seed,
                                           cfg.box_lo, cfg.box_hi):
        trials += 1
        w = evaluate(spec, profile, space)
        result = conjecture1_predicate(profile, w)
        if not result.holds:
            witness = Witness(profile, {
                "output": point_obj(w),
                "best_pair": list(result.best_pair),
                "best_residual": result.best_residual,
            })
            break
    return PropertyReport(
        property="median_conjecture1",
        mechanism=spec,
        verdict=FAIL if witness else PASS,
        trials=trials,
        seed=cfg.seed,
        tolerance=cfg.tolerance,
        witness=witness,
    )


def max_cost(profile: Profile, w: Point, space: SpaceConfig) -> float:
    """Largest distance from any agent to the facility."""
    return max(lp_distance(pt, w, space) for pt in profile)


def optimal_max_cost_two_agents(a: Point, b: Point, space: SpaceConfig) -> float:
    """Half the inter-agent distance, achieved by the L_p midpoint."""
    return lp_distance(a, b, space) / 2.0


def lower_bound_experiment(spec: MechanismSpec, space: SpaceConfig,
                           cfg: CheckConfig) -> LowerBoundOutcome:
    """Exhibit the factor-2 maximum-cost lower bound for a two-agent mechanism.

    For each sampled pair (A, B) with facility W = f(A, B): place the two
    agents at (W, B).  A strategyproof mechanism must keep the facility
    at W (an agent already at the facility could otherwise misreport A
    and gain), so the max cost is the full distance d(W, B) while the
    optimum is d(W, B)/2 - ratio 2.  The stability step is verified
    within cfg.tolerance whenever W != B and failures are reported, not
    raised (they flag a non-strategyproof mechanism).
    """
    if required_num_agents(spec) not in (None, 2):
        raise UnsupportedProfileError("lower bound experiment needs a two-agent mechanism")
    trials = 0
    skipped = 0
    worst: RatioResult | None = None
    failures: list[StabilityFailure] = []
    max_gap = 0.0
    for profile in sampling.profile_stream(space, 2, cfg.num_profiles, cfg.seed,
                                           cfg.box_lo, cfg.box_hi):
        trials += 1
        a, b = profile
        w = evaluate(spec, profile, space)
        if lp_distance(w, b, space) <= 1e-12:
            skipped += 1
            continue
        derived = (w, b)
        v = evaluate(spec, derived, space)
        gap = lp_distance(v, w, space)
        max_gap = max(max_gap, gap)
        if gap > cfg.tolerance and len(failures) < 5:
            failures.append(StabilityFailure(profile=derived, output=v, expected=w, gap=gap))
        mech_cost = max_cost(derived, v, space)
        opt_cost = optimal_max_cost_two_agents(w, b, space)
        ratio = mech_cost / opt_cost if opt_cost > 0 else 1.0
        if worst is None or ratio > worst.ratio:
            worst = RatioResult(mechanism_max_cost=mech_cost, optimal_max_cost=opt_cost,
                                ratio=ratio)
    if worst is None:
        worst = RatioResult(mechanism_max_cost=0.0, optimal_max_cost=0.0, ratio=1.0)
    return LowerBoundOutcome(
        worst=worst,
        trials=trials,
        degenerate_skipped=skipped,
        max_stability_gap=max_gap,
        stability_failures=tuple(failures),
    )

"""Executable axiom checkers with an adversarial misreport search at the core.

Each checker fuzzes one mechanism against one axiom over a seeded
workload and returns a PropertyReport: ``pass`` after exhausting the
trials (a statistical statement, not a proof), or ``fail`` with a
machine-readable witness that replays through the public evaluation
operations.

The strategyproofness checker is the expensive one.  For every sampled
profile and every agent it runs a two-stage adversary: a full grid of
candidate misreports over the sampling box, then compass refinement of
the best grid cell with geometrically shrinking steps.  The box is a
real restriction (the axiom quantifies over all of R^m), but every
catalog mechanism is translation-invariant, so searching a box around
the profile loses nothing up to scale.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels, sampling
from .errors import ContractViolationError, UnsupportedProfileError
from .geometry import (
    PlaneRotation,
    Point,
    Profile,
    SpaceConfig,
    lp_distance,
    rotate,
    rotate_point,
    scale,
    scale_point,
    translate,
    translate_point,
)
from .mechanisms import PLANAR_FAMILIES, MechanismSpec, evaluate, required_num_agents
from .reportio import point_obj, profile_obj, render_json

PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class CheckConfig:
    """Workload description for one checker run.

    ``grid_points_per_axis`` and ``refine_iters`` drive the misreport
    adversary; ``refine_iters=0`` keeps the grid stage only, which the
    self-consistency oracle relies on.  ``num_agents`` applies to
    families of flexible arity; two-agent families always use n=2.
    """

    box_lo: float = -10.0
    box_hi: float = 10.0
    num_profiles: int = 1000
    seed: int = 0
    tolerance: float = 1e-7
    grid_points_per_axis: int = 9
    refine_iters: int = 40
    num_agents: int = 2

    def __post_init__(self) -> None:
        if not self.box_lo < self.box_hi:
            raise ContractViolationError("box_lo must be strictly below box_hi")
        if self.tolerance <= 0:
            raise ContractViolationError("tolerance must be positive")
        g = self.grid_points_per_axis
        if g < 3 or g % 2 == 0:
            raise ContractViolationError("grid_points_per_axis must be an odd integer >= 3")
        if self.refine_iters < 0:
            raise ContractViolationError("refine_iters must be nonnegative")
        if self.num_profiles < 0 or self.num_agents < 1:
            raise ContractViolationError("num_profiles >= 0 and num_agents >= 1 required")


@dataclass(frozen=True)
class Witness:
    profile: Profile
    detail: dict

    def to_json_obj(self) -> dict:
        return {"profile": profile_obj(self.profile), "detail": self.detail}


@dataclass(frozen=True)
class PropertyReport:
    property: str
    mechanism: MechanismSpec
    verdict: str
    trials: int
    seed: int
    tolerance: float
    witness: Witness | None

    def to_json_obj(self) -> dict:
        return {
            "property": self.property,
            "mechanism": self.mechanism.to_string(),
            "verdict": self.verdict,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "witness": self.witness.to_json_obj() if self.witness else None,
        }

    def to_json(self) -> str:
        return render_json(self.to_json_obj())


@dataclass(frozen=True)
class MisreportSearchResult:
    agent_index: int
    true_cost: float
    best_misreport: Point
    best_cost: float
    gain: float


def effective_num_agents(spec: MechanismSpec, cfg: CheckConfig) -> int:
    n = required_num_agents(spec)
    if n is not None:
        return n
    n = cfg.num_agents
    if spec.family == "dictator" and spec.dictator_index >= n:
        raise UnsupportedProfileError(
            f"dictator index {spec.dictator_index} needs num_agents > {spec.dictator_index}"
        )
    return n


def _validate_space(spec: MechanismSpec, space: SpaceConfig) -> None:
    if spec.family in PLANAR_FAMILIES and space.m != 2:
        raise UnsupportedProfileError(f"{spec.family} is defined only in dimension m = 2")


def _profiles(spec: MechanismSpec, space: SpaceConfig, cfg: CheckConfig):
    _validate_space(spec, space)
    n = effective_num_agents(spec, cfg)
    return sampling.profile_stream(space, n, cfg.num_profiles, cfg.seed, cfg.box_lo, cfg.box_hi)


def _report(prop: str, spec: MechanismSpec, cfg: CheckConfig, trials: int,
            witness: Witness | None) -> PropertyReport:
    return PropertyReport(
        property=prop,
        mechanism=spec,
        verdict=FAIL if witness else PASS,
        trials=trials,
        seed=cfg.seed,
        tolerance=cfg.tolerance,
        witness=witness,
    )


# ---------------------------------------------------------------------------
# misreport adversary
# ---------------------------------------------------------------------------

def misreport_search(spec: MechanismSpec, profile: Profile, agent_index: int,
                     space: SpaceConfig, cfg: CheckConfig) -> MisreportSearchResult:
    """Two-stage search for the agent's most profitable misreport.

    Stage 1 evaluates the post-misreport cost on the full
    grid_points_per_axis^m lattice spanning the box; stage 2 refines the
    best cell by compass search with step halving (refine_iters levels,
    initial step of one grid cell).  A gain above cfg.tolerance is a
    strategyproofness violation witness.
    """
    n = len(profile)
    if agent_index < 0 or agent_index >= n:
        raise ContractViolationError(f"agent_index {agent_index} out of range for n = {n}")
    evaluate(spec, profile, space)  # surfaces arity/dimension violations eagerly
    code, p1, p2 = spec.kernel_args()
    arr = np.asarray(profile, dtype=np.float64)
    true_cost, best_cost, best = _kernels.misreport_scan(
        code, p1, p2, arr, agent_index, space.p,
        cfg.box_lo, cfg.box_hi, cfg.grid_points_per_axis, cfg.refine_iters,
    )
    return MisreportSearchResult(
        agent_index=agent_index,
        true_cost=float(true_cost),
        best_misreport=tuple(float(c) for c in best),
        best_cost=float(best_cost),
        gain=float(true_cost - best_cost),
    )


def check_strategyproofness(spec: MechanismSpec, space: SpaceConfig,
                            cfg: CheckConfig) -> PropertyReport:
    """No agent may reduce her distance to the facility by misreporting."""
    code, p1, p2 = spec.kernel_args()
    trials = 0
    for profile in _profiles(spec, space, cfg):
        trials += 1
        arr = np.asarray(profile, dtype=np.float64)
        for agent in range(len(profile)):
            true_cost, best_cost, best = _kernels.misreport_scan(
                code, p1, p2, arr, agent, space.p,
                cfg.box_lo, cfg.box_hi, cfg.grid_points_per_axis, cfg.refine_iters,
            )
            gain = true_cost - best_cost
            if gain > cfg.tolerance:
                witness = Witness(profile, {
                    "agent_index": agent,
                    "true_cost": float(true_cost),
                    "best_misreport": point_obj(best),
                    "best_cost": float(best_cost),
                    "gain": float(gain),
                })
                return _report("strategyproofness", spec, cfg, trials, witness)
    return _report("strategyproofness", spec, cfg, trials, None)


# ---------------------------------------------------------------------------
# axiom checkers
# ---------------------------------------------------------------------------

def check_unanimity(spec: MechanismSpec, space: SpaceConfig, cfg: CheckConfig) -> PropertyReport:
    """Identical reports must pin the facility onto the common point."""
    _validate_space(spec, space)
    n = effective_num_agents(spec, cfg)
    rng = sampling.sub_rng(cfg.seed, sampling.STREAM_UNANIMITY)
    trials = 0
    for _ in range(cfg.num_profiles):
        trials += 1
        c = tuple(float(v) for v in rng.uniform(cfg.box_lo, cfg.box_hi, space.m))
        profile = tuple(c for _ in range(n))
        w = evaluate(spec, profile, space)
        dev = max(abs(wi - ci) for wi, ci in zip(w, c))
        if dev > cfg.tolerance:
            witness = Witness(profile, {"point": point_obj(c), "output": point_obj(w),
                                        "deviation": dev})
            return _report("unanimity", spec, cfg, trials, witness)
    return _report("unanimity", spec, cfg, trials, None)


def check_translation_invariance(spec: MechanismSpec, space: SpaceConfig,
                                 cfg: CheckConfig) -> PropertyReport:
    """f(A + t) must equal f(A) + t."""
    rng = sampling.sub_rng(cfg.seed, sampling.STREAM_TRANSLATION)
    trials = 0
    for profile in _profiles(spec, space, cfg):
        trials += 1
        t = tuple(float(v) for v in rng.uniform(cfg.box_lo, cfg.box_hi, space.m))
        lhs = evaluate(spec, translate(profile, t), space)
        rhs = translate_point(evaluate(spec, profile, space), t)
        dev = max(abs(a - b) for a, b in zip(lhs, rhs))
        if dev > cfg.tolerance:
            witness = Witness(profile, {"t": point_obj(t), "shifted_output": point_obj(lhs),
                                        "output_shifted": point_obj(rhs), "deviation": dev})
            return _report("translation_invariance", spec, cfg, trials, witness)
    return _report("translation_invariance", spec, cfg, trials, None)


def check_scalability(spec: MechanismSpec, space: SpaceConfig, cfg: CheckConfig) -> PropertyReport:
    """f(k A) must equal k f(A) for k > 0; deviation is measured relative to
    max(1, |k f(A)|_inf) so the verdict is scale-free."""
    rng = sampling.sub_rng(cfg.seed, sampling.STREAM_SCALABILITY)
    trials = 0
    for profile in _profiles(spec, space, cfg):
        trials += 1
        k = float(10.0 ** rng.uniform(-2.0, 2.0))
        lhs = evaluate(spec, scale(profile, k), space)
        rhs = scale_point(evaluate(spec, profile, space), k)
        denom = max(1.0, max(abs(b) for b in rhs))
        dev = max(abs(a - b) for a, b in zip(lhs, rhs)) / denom
        if dev > cfg.tolerance:
            witness = Witness(profile, {"k": k, "scaled_output": point_obj(lhs),
                                        "output_scaled": point_obj(rhs), "deviation": dev})
            return _report("scalability", spec, cfg, trials, witness)
    return _report("scalability", spec, cfg, trials, None)


def check_anonymity(spec: MechanismSpec, space: SpaceConfig, cfg: CheckConfig) -> PropertyReport:
    """Permuting the agents must not move the facility."""
    rng = sampling.sub_rng(cfg.seed, sampling.STREAM_ANONYMITY)
    trials = 0
    for profile in _profiles(spec, space, cfg):
        trials += 1
        n = len(profile)
        if n == 1:
            continue
        perm = tuple(int(i) for i in rng.permutation(n))
        while perm == tuple(range(n)):
            perm = tuple(int(i) for i in rng.permutation(n))
        permuted = tuple(profile[i] for i in perm)
        w = evaluate(spec, profile, space)
        wp = evaluate(spec, permuted, space)
        dev = max(abs(a - b) for a, b in zip(w, wp))
        if dev > cfg.tolerance:
            witness = Witness(profile, {"permutation": list(perm), "output": point_obj(w),
                                        "permuted_output": point_obj(wp), "deviation": dev})
            return _report("anonymity", spec, cfg, trials, witness)
    return _report("anonymity", spec, cfg, trials, None)


def check_rotation_invariance(spec: MechanismSpec, space: SpaceConfig,
                              cfg: CheckConfig) -> PropertyReport:
    """Rotating all reports in a coordinate plane must rotate the facility identically."""
    if space.m < 2:
        raise UnsupportedProfileError("rotation invariance needs dimension m >= 2")
    rng = sampling.sub_rng(cfg.seed, sampling.STREAM_ROTATION)
    planes = list(itertools.combinations(range(space.m), 2))
    trials = 0
    for profile in _profiles(spec, space, cfg):
        trials += 1
        axis_i, axis_j = planes[int(rng.integers(len(planes)))]
        rot = PlaneRotation(
            axis_i=axis_i,
            axis_j=axis_j,
            theta=float(rng.uniform(0.0, 2.0 * math.pi)),
            center=tuple(float(v) for v in rng.uniform(cfg.box_lo, cfg.box_hi, space.m)),
        )
        lhs = rotate_point(evaluate(spec, profile, space), rot)
        rhs = evaluate(spec, rotate(profile, rot), space)
        dev = max(abs(a - b) for a, b in zip(lhs, rhs))
        if dev > cfg.tolerance:
            witness = Witness(profile, {
                "rotation": {"axis_i": rot.axis_i, "axis_j": rot.axis_j,
                             "theta": rot.theta, "center": point_obj(rot.center)},
                "output_rotated": point_obj(lhs),
                "rotated_output": point_obj(rhs),
                "deviation": dev,
            })
            return _report("rotation_invariance", spec, cfg, trials, witness)
    return _report("rotation_invariance", spec, cfg, trials, None)


def _lipschitz_core(eval_fn: Callable[[Profile], Point], spec: MechanismSpec,
                    space: SpaceConfig, cfg: CheckConfig) -> PropertyReport:
    # cost-contraction test: |u(A_i) - u(A_i')| <= d(A_i, A_i'), a necessary
    # condition for strategyproofness usable as a cheap prefilter
    rng = sampling.sub_rng(cfg.seed, sampling.STREAM_LIPSCHITZ)
    trials = 0
    for profile in _profiles(spec, space, cfg):
        trials += 1
        n = len(profile)
        agent = int(rng.integers(n))
        moved = tuple(float(v) for v in rng.uniform(cfg.box_lo, cfg.box_hi, space.m))
        perturbed = profile[:agent] + (moved,) + profile[agent + 1:]
        u = lp_distance(eval_fn(profile), profile[agent], space)
        u_prime = lp_distance(eval_fn(perturbed), moved, space)
        bound = lp_distance(profile[agent], moved, space)
        if abs(u - u_prime) > bound + cfg.tolerance:
            witness = Witness(profile, {
                "agent_index": agent, "perturbed": point_obj(moved),
                "cost_true": u, "cost_perturbed": u_prime,
                "difference": abs(u - u_prime), "bound": bound,
            })
            return _report("continuity_lipschitz", spec, cfg, trials, witness)
    return _report("continuity_lipschitz", spec, cfg, trials, None)


def check_continuity_lipschitz(spec: MechanismSpec, space: SpaceConfig,
                               cfg: CheckConfig) -> PropertyReport:
    """The cost of an agent's report is 1-Lipschitz in that report for any
    strategyproof mechanism; violating this prefilter implies a violation of
    strategyproofness itself."""
    return _lipschitz_core(lambda prof: evaluate(spec, prof, space), spec, space, cfg)


def check_output_at_agent_1d(spec: MechanismSpec, cfg: CheckConfig,
                             space: SpaceConfig | None = None) -> PropertyReport:
    """In one dimension the facility must sit on some agent's location."""
    space = space or SpaceConfig(1, 2.0)
    if space.m != 1:
        raise UnsupportedProfileError("output_at_agent_1d is defined only for m = 1")
    trials = 0
    for profile in _profiles(spec, space, cfg):
        trials += 1
        w = evaluate(spec, profile, space)
        min_dist = min(abs(w[0] - pt[0]) for pt in profile)
        if min_dist > cfg.tolerance:
            witness = Witness(profile, {"output": point_obj(w), "min_distance": min_dist})
            return _report("output_at_agent_1d", spec, cfg, trials, witness)
    return _report("output_at_agent_1d", spec, cfg, trials, None)


def check_pull_stability(spec: MechanismSpec, space: SpaceConfig,
                         cfg: CheckConfig) -> PropertyReport:
    """Moving one agent along the segment toward the facility must not move it;
    a consequence of strategyproofness in the Euclidean case, used as a diagnostic."""
    rng = sampling.sub_rng(cfg.seed, sampling.STREAM_PULL)
    trials = 0
    for profile in _profiles(spec, space, cfg):
        trials += 1
        n = len(profile)
        agent = int(rng.integers(n))
        lam = float(rng.uniform(0.0, 1.0))
        w = evaluate(spec, profile, space)
        moved = tuple(a + lam * (wi - a) for a, wi in zip(profile[agent], w))
        pulled = profile[:agent] + (moved,) + profile[agent + 1:]
        w_prime = evaluate(spec, pulled, space)
        dev = max(abs(a - b) for a, b in zip(w, w_prime))
        if dev > cfg.tolerance:
            witness = Witness(profile, {"agent_index": agent, "lambda": lam,
                                        "moved": point_obj(moved), "output": point_obj(w),
                                        "moved_output": point_obj(w_prime), "deviation": dev})
            return _report("pull_stability", spec, cfg, trials, witness)
    return _report("pull_stability", spec, cfg, trials, None)


PROPERTY_CHECKS: dict[str, Callable[[MechanismSpec, SpaceConfig, CheckConfig], PropertyReport]] = {
    "strategyproofness": check_strategyproofness,
    "unanimity": check_unanimity,
    "translation_invariance": check_translation_invariance,
    "scalability": check_scalability,
    "anonymity": check_anonymity,
    "rotation_invariance": check_rotation_invariance,
    "continuity_lipschitz": check_continuity_lipschitz,
    "output_at_agent_1d": lambda spec, space, cfg: check_output_at_agent_1d(spec, cfg, space),
    "pull_stability": check_pull_stability,
}


def default_checks(space: SpaceConfig) -> list[str]:
    """All property names applicable to the given space."""
    names = list(PROPERTY_CHECKS)
    if space.m < 2:
        names.remove("rotation_invariance")
    if space.m != 1:
        names.remove("output_at_agent_1d")
    return names


def run_check(name: str, spec: MechanismSpec, space: SpaceConfig,
              cfg: CheckConfig) -> PropertyReport:
    if name not in PROPERTY_CHECKS:
        known = ", ".join(sorted(PROPERTY_CHECKS))
        raise ContractViolationError(f"unknown property {name!r}; known: {known}")
    return PROPERTY_CHECKS[name](spec, space, cfg)

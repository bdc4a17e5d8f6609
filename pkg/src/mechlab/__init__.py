"""mechlab: verification lab for strategyproof single-facility location in L_p space.

Implements the mechanism catalog (dictator, coordinatewise extrema,
perpendicular-line constructions, general median, plus a deliberately
manipulable midpoint baseline), adversarial axiom checkers with a
misreport search, the facility-set residual characterizations with an
independent finite-difference oracle, and a reproducible campaign CLI.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .characterization import (
    Conjecture1Result,
    LowerBoundOutcome,
    RatioResult,
    ResidualPair,
    conjecture1_predicate,
    lower_bound_experiment,
    lp_residuals,
    max_cost,
    median_fits_conjecture_scan,
    near_kink,
    normalized_residuals,
    optimal_max_cost_two_agents,
    orthogonality_residual,
    residual_via_finite_difference,
)
from .errors import (
    ContractViolationError,
    DomainError,
    MechLabError,
    ParseError,
    UnsupportedProfileError,
)
from .geometry import (
    PlaneRotation,
    Point,
    Profile,
    SpaceConfig,
    as_point,
    as_profile,
    center_two_agent,
    lp_distance,
    rotate,
    rotate_point,
    scale,
    scale_point,
    translate,
    translate_point,
)
from .harness import (
    CampaignConfig,
    CampaignReport,
    generate_profiles,
    load_profile,
    run_campaign,
    save_profile,
    save_report,
)
from .mechanisms import (
    MechanismSpec,
    catalog,
    eval_c1,
    eval_c2,
    eval_c3,
    eval_general_median,
    eval_midpoint,
    evaluate,
    parse_mechanism,
)
from .properties import (
    CheckConfig,
    MisreportSearchResult,
    PropertyReport,
    PROPERTY_CHECKS,
    Witness,
    check_anonymity,
    check_continuity_lipschitz,
    check_output_at_agent_1d,
    check_pull_stability,
    check_rotation_invariance,
    check_scalability,
    check_strategyproofness,
    check_translation_invariance,
    check_unanimity,
    default_checks,
    misreport_search,
    run_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]

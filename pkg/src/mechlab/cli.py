"""Command-line interface.

Subcommands
-----------
eval          run one mechanism on one profile file, print the facility
check         run one property checker, print its JSON report
fuzz          run a full mechanisms x checks campaign, write a report file
characterize  sweep facility residuals over sampled profiles, emit CSV
ratio         maximum-cost lower-bound experiment, print the ratio JSON

The environment variable MECHLAB_SEED overrides --seed everywhere.
Exit codes: 0 all verdicts matched expectations, 1 some verdict was
unexpected (or a check failed), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from ._kernels import BACKEND
from .characterization import lower_bound_experiment, lp_residuals, orthogonality_residual
from .errors import MechLabError
from .geometry import SpaceConfig, lp_distance
from .harness import CampaignConfig, load_profile, parse_mechanism_list, run_campaign
from .mechanisms import evaluate, parse_mechanism
from .properties import CheckConfig, default_checks, run_check
from .reportio import render_json
from .sampling import profile_stream


def _parse_space(text: str) -> SpaceConfig:
    try:
        m_str, p_str = text.split(",")
        return SpaceConfig(int(m_str), float(p_str))
    except ValueError as exc:
        raise MechLabError(f"--space expects 'm,p' (e.g. '2,2'), got {text!r}") from exc


def _parse_box(text: str) -> tuple[float, float]:
    try:
        lo_str, hi_str = text.split(",")
        return float(lo_str), float(hi_str)
    except ValueError as exc:
        raise MechLabError(f"--box expects 'lo,hi', got {text!r}") from exc


def _resolve_seed(arg_seed: int) -> int:
    env = os.environ.get("MECHLAB_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError as exc:
            raise MechLabError(f"MECHLAB_SEED must be an integer, got {env!r}") from exc
    return arg_seed


def _add_workload_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--space", default="2,2", help="dimension and exponent as 'm,p' (default 2,2)")
    sub.add_argument("--seed", type=int, default=0, help="campaign seed (MECHLAB_SEED overrides)")
    sub.add_argument("--trials", type=int, default=1000, help="sampled profiles per check")
    sub.add_argument("--box", default="-10,10", help="sampling box as 'lo,hi' (default -10,10)")
    sub.add_argument("--tolerance", type=float, default=1e-7, help="violation threshold")
    sub.add_argument("--grid", type=int, default=9, help="misreport grid points per axis (odd)")
    sub.add_argument("--refine", type=int, default=40, help="misreport refinement halvings")
    sub.add_argument("--agents", type=int, default=2, help="agents for flexible-arity mechanisms")


def _check_config(args) -> CheckConfig:
    lo, hi = _parse_box(args.box)
    return CheckConfig(
        box_lo=lo,
        box_hi=hi,
        num_profiles=args.trials,
        seed=_resolve_seed(args.seed),
        tolerance=args.tolerance,
        grid_points_per_axis=args.grid,
        refine_iters=args.refine,
        num_agents=args.agents,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mechlab",
        description="Verification lab for strategyproof facility-location mechanisms",
    )
    parser.add_argument("--version", action="version",
                        version=f"mechlab {__version__} (kernel backend: {BACKEND})")
    subs = parser.add_subparsers(dest="command", required=True)

    p_eval = subs.add_parser("eval", help="evaluate one mechanism on one profile file")
    p_eval.add_argument("--mechanism", required=True, help="e.g. dictator:0, c1:1,1, c2:1.5, median")
    p_eval.add_argument("--profile", required=True, help="profile CSV path (one agent per line)")
    p_eval.add_argument("--space", default=None, help="'m,p'; m defaults to the profile width, p to 2")

    p_check = subs.add_parser("check", help="run one property checker")
    p_check.add_argument("--mechanism", required=True)
    p_check.add_argument("--property", required=True, dest="prop")
    _add_workload_flags(p_check)
    p_check.add_argument("--out", default=None, help="also write the report JSON here")

    p_fuzz = subs.add_parser("fuzz", help="run a mechanisms x checks campaign")
    p_fuzz.add_argument("--mechanism", action="append", default=[], required=True,
                        help="repeatable mechanism string")
    p_fuzz.add_argument("--checks", default=None,
                        help="comma-separated property names (default: all valid for the space)")
    _add_workload_flags(p_fuzz)
    p_fuzz.add_argument("--expect-fail", action="append", default=[],
                        metavar="MECH/PROPERTY",
                        help="declare a negative control, e.g. midpoint/strategyproofness")
    p_fuzz.add_argument("--out", default=None, help="report file path")
    p_fuzz.add_argument("--format", choices=("json", "csv"), default="json")

    p_char = subs.add_parser("characterize", help="residual sweep CSV over sampled profiles")
    p_char.add_argument("--mechanism", action="append", default=[], required=True)
    _add_workload_flags(p_char)
    p_char.add_argument("--out", default=None, help="CSV path (default stdout)")

    p_ratio = subs.add_parser("ratio", help="maximum-cost lower-bound experiment")
    p_ratio.add_argument("--mechanism", required=True)
    _add_workload_flags(p_ratio)

    return parser


def _cmd_eval(args) -> int:
    spec = parse_mechanism(args.mechanism)
    profile = load_profile(args.profile)
    if args.space:
        space = _parse_space(args.space)
    else:
        space = SpaceConfig(len(profile[0]), 2.0)
    w = evaluate(spec, profile, space)
    print(",".join(format(c, ".17g") for c in w))
    return 0


def _cmd_check(args) -> int:
    spec = parse_mechanism(args.mechanism)
    space = _parse_space(args.space)
    cfg = _check_config(args)
    report = run_check(args.prop, spec, space, cfg)
    text = report.to_json()
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0 if report.verdict == "pass" else 1


def _cmd_fuzz(args) -> int:
    mechanisms = parse_mechanism_list(args.mechanism)
    space = _parse_space(args.space)
    cfg = _check_config(args)
    checks = tuple(args.checks.split(",")) if args.checks else tuple(default_checks(space))
    expected = set()
    for decl in args.expect_fail:
        mech, sep, prop = decl.partition("/")
        if not sep:
            raise MechLabError(f"--expect-fail wants MECH/PROPERTY, got {decl!r}")
        expected.add((mech, prop))
    campaign_cfg = CampaignConfig(
        mechanisms=mechanisms,
        space=space,
        checks=checks,
        check_config=cfg,
        output_path=args.out,
        format=args.format,
        expected_failures=frozenset(expected),
    )
    report = run_campaign(campaign_cfg)
    if not args.out:
        sys.stdout.write(report.to_json() if args.format == "json" else report.to_csv())
    for item in report.unexpected:
        print(
            f"unexpected: {item['mechanism']} / {item['property']} -> "
            f"{item['verdict']} (expected {item['expected']})",
            file=sys.stderr,
        )
    return 0 if report.expectations_met else 1


def _cmd_characterize(args) -> int:
    mechanisms = parse_mechanism_list(args.mechanism)
    space = _parse_space(args.space)
    if space.p <= 2.0:
        print(
            f"note: p = {space.p:g} is outside the stated hypothesis (2 < p) of the "
            "residual characterization; residuals are reported anyway",
            file=sys.stderr,
        )
    cfg = _check_config(args)
    lines = []
    coord_cols = [f"{tag}{d}" for tag in ("a", "b", "w") for d in range(space.m)]
    lines.append(",".join(
        ["mechanism", "p", "m", *coord_cols,
         "residual_raw", "residual_normalized", "r_g", "r_h"]
    ))
    for spec in mechanisms:
        for profile in profile_stream(space, 2, cfg.num_profiles, cfg.seed,
                                      cfg.box_lo, cfg.box_hi):
            a, b = profile
            w = evaluate(spec, profile, space)
            raw = orthogonality_residual(a, b, w)
            d2 = lp_distance(a, b, SpaceConfig(space.m, 2.0))
            norm = raw / max(1.0, d2 * d2)
            pair = lp_residuals(a, b, w, space)
            row = [spec.to_string(), format(space.p, ".17g"), str(space.m)]
            row += [format(c, ".17g") for pt in (a, b, w) for c in pt]
            row += [format(v, ".17g") for v in (raw, norm, pair.r_g, pair.r_h)]
            lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_ratio(args) -> int:
    spec = parse_mechanism(args.mechanism)
    space = _parse_space(args.space)
    cfg = _check_config(args)
    outcome = lower_bound_experiment(spec, space, cfg)
    print(render_json(outcome.worst.to_json_obj()))
    print(
        f"trials={outcome.trials} degenerate_skipped={outcome.degenerate_skipped} "
        f"max_stability_gap={outcome.max_stability_gap:.3e} "
        f"stability={'ok' if outcome.stability_ok else 'VIOLATED'}",
        file=sys.stderr,
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "eval": _cmd_eval,
        "check": _cmd_check,
        "fuzz": _cmd_fuzz,
        "characterize": _cmd_characterize,
        "ratio": _cmd_ratio,
    }
    try:
        return handlers[args.command](args)
    except MechLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

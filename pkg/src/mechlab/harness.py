"""Campaign orchestration, profile I/O and report persistence.

A campaign is the cross product of a mechanism list and a check list
under one CheckConfig.  Reports are deterministic given the seed and are
written with a fixed field order and 17-significant-digit floats, so two
runs of the same configuration produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from . import __version__ as _version
from . import sampling
from .errors import ContractViolationError, ParseError
from .geometry import Profile, SpaceConfig, as_profile
from .mechanisms import MechanismSpec, parse_mechanism
from .properties import CheckConfig, PropertyReport, PROPERTY_CHECKS, run_check
from .reportio import render_json


@dataclass(frozen=True)
class CampaignConfig:
    mechanisms: tuple[MechanismSpec, ...]
    space: SpaceConfig
    checks: tuple[str, ...]
    check_config: CheckConfig
    output_path: str | None = None
    format: str = "json"
    # expected verdict per (mechanism string, check); anything absent is
    # expected to pass, so negative controls must be declared explicitly
    expected_failures: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not self.mechanisms:
            raise ContractViolationError("campaign needs at least one mechanism")
        if not self.checks:
            raise ContractViolationError("campaign needs at least one check")
        unknown = [c for c in self.checks if c not in PROPERTY_CHECKS]
        if unknown:
            raise ContractViolationError(f"unknown properties in campaign: {unknown}")
        if self.format not in ("json", "csv"):
            raise ContractViolationError(f"format must be json or csv, got {self.format!r}")

    def expected_verdict(self, mechanism: str, check: str) -> str:
        return "fail" if (mechanism, check) in self.expected_failures else "pass"

    def to_json_obj(self) -> dict:
        cc = self.check_config
        return {
            "mechanisms": [m.to_string() for m in self.mechanisms],
            "space": {"m": self.space.m, "p": self.space.p},
            "checks": list(self.checks),
            "check_config": {
                "box_lo": cc.box_lo,
                "box_hi": cc.box_hi,
                "num_profiles": cc.num_profiles,
                "seed": cc.seed,
                "tolerance": cc.tolerance,
                "grid_points_per_axis": cc.grid_points_per_axis,
                "refine_iters": cc.refine_iters,
                "num_agents": cc.num_agents,
            },
            "output_path": self.output_path,
            "format": self.format,
            "expected_failures": sorted(list(pair) for pair in self.expected_failures),
        }


@dataclass(frozen=True)
class CampaignReport:
    tool_version: str
    config_echo: CampaignConfig
    reports: tuple[PropertyReport, ...]
    summary: dict
    unexpected: tuple[dict, ...]

    @property
    def expectations_met(self) -> bool:
        return not self.unexpected

    def to_json_obj(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "config_echo": self.config_echo.to_json_obj(),
            "reports": [r.to_json_obj() for r in self.reports],
            "summary": self.summary,
            "unexpected": list(self.unexpected),
        }

    def to_json(self) -> str:
        return render_json(self.to_json_obj()) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["property", "mechanism", "verdict", "trials", "seed",
                         "tolerance", "witness"])
        for r in self.reports:
            obj = r.to_json_obj()
            writer.writerow([
                obj["property"], obj["mechanism"], obj["verdict"], obj["trials"],
                obj["seed"], render_json(obj["tolerance"]),
                render_json(obj["witness"]) if obj["witness"] is not None else "",
            ])
        return buf.getvalue()


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Execute every (mechanism, check) pair and optionally persist the report."""
    reports: list[PropertyReport] = []
    summary: dict[str, dict[str, int]] = {}
    unexpected: list[dict] = []
    for spec in cfg.mechanisms:
        for check in cfg.checks:
            report = run_check(check, spec, cfg.space, cfg.check_config)
            reports.append(report)
            bucket = summary.setdefault(check, {"pass": 0, "fail": 0})
            bucket[report.verdict] += 1
            expected = cfg.expected_verdict(spec.to_string(), check)
            if report.verdict != expected:
                unexpected.append({
                    "mechanism": spec.to_string(),
                    "property": check,
                    "verdict": report.verdict,
                    "expected": expected,
                })
    campaign = CampaignReport(
        tool_version=_version,
        config_echo=cfg,
        reports=tuple(reports),
        summary=summary,
        unexpected=tuple(unexpected),
    )
    if cfg.output_path:
        save_report(campaign, cfg.output_path, cfg.format)
    return campaign


def generate_profiles(space: SpaceConfig, cfg: CheckConfig,
                      num_agents: int | None = None) -> Iterator[Profile]:
    """Seeded uniform profiles with the corner-case fixtures prepended."""
    n = num_agents if num_agents is not None else cfg.num_agents
    return sampling.profile_stream(space, n, cfg.num_profiles, cfg.seed,
                                   cfg.box_lo, cfg.box_hi)


# ---------------------------------------------------------------------------
# file I/O
# ---------------------------------------------------------------------------

def load_profile(path: str | Path) -> Profile:
    """Read a profile CSV: one agent per line, '#' comments ignored, no header."""
    rows: list[tuple[float, ...]] = []
    width: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = [tok.strip() for tok in line.split(",")]
            try:
                coords = tuple(float(tok) for tok in fields)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-numeric field in {line!r}") from exc
            if width is None:
                width = len(coords)
            elif len(coords) != width:
                raise ParseError(
                    f"{path}:{lineno}: expected {width} coordinates, got {len(coords)}"
                )
            rows.append(coords)
    if not rows:
        raise ParseError(f"{path}: no agents found")
    return as_profile(rows)


def save_profile(profile: Profile, path: str | Path) -> None:
    """Write a profile CSV with 17-significant-digit coordinates (lossless round trip)."""
    with open(path, "w", encoding="utf-8") as fh:
        for pt in profile:
            fh.write(",".join(format(c, ".17g") for c in pt) + "\n")


def save_report(report: CampaignReport, path: str | Path, format: str = "json") -> None:
    if format == "json":
        text = report.to_json()
    elif format == "csv":
        text = report.to_csv()
    else:
        raise ContractViolationError(f"unknown report format {format!r}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ContractViolationError(f"cannot write report to {path}: {exc}") from exc


def parse_mechanism_list(texts: list[str]) -> tuple[MechanismSpec, ...]:
    # one mechanism per token; the compact grammar itself uses commas
    # (c1:1,1) so list items are separate CLI flags, not comma-joined
    specs = [parse_mechanism(text) for text in texts if text.strip()]
    if not specs:
        raise ParseError("no mechanisms given")
    return tuple(specs)

"""Run registered checks and serialize the report."""
from __future__ import annotations

import json
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .registry import REGISTRY, Check, Ctx, RunConfig

REPORT_VERSION = 1


class FilterError(ValueError):
    """Bad or empty check filter."""


@dataclass(frozen=True)
class IdentityCheck:
    id: str
    description: str
    anchor: str
    inputs: dict
    residual: float
    tolerance: float
    mode: str
    status: str

    def to_dict(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "mode": self.mode, "residual": _finite(self.residual),
                "tolerance": self.tolerance, "status": self.status}


def _finite(x: float):
    return x if math.isfinite(x) else repr(x)


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple
    config: RunConfig

    @property
    def failed(self) -> list[IdentityCheck]:
        return [c for c in self.checks if c.status == "fail"]

    def summary(self) -> dict:
        count = {s: sum(c.status == s for c in self.checks) for s in ("pass", "fail", "reported")}
        return {"total": len(self.checks), **count, "seed": self.config.seed, "mode": self.config.mode,
                "samples": self.config.samples, "points": self.config.points,
                "chart_seeds": self.config.chart_seeds, "filter": self.config.filter}

    def to_json(self) -> str:
        doc = {"version": REPORT_VERSION, "checks": [c.to_dict() for c in self.checks], "summary": self.summary()}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def select(pattern: str | None) -> list[Check]:
    if pattern is None:
        return list(REGISTRY.values())
    try:
        rx = re.compile(pattern)
    except re.error as exc:
        raise FilterError(f"invalid filter regex {pattern!r}: {exc}") from exc
    chosen = [c for c in REGISTRY.values() if rx.match(c.id)]
    if not chosen:
        raise FilterError(f"filter {pattern!r} matches no check")
    return chosen


def run_check(check: Check, config: RunConfig) -> IdentityCheck:
    if check.float_only and config.mode != "float":
        config = RunConfig(**{**config.__dict__, "mode": "float"})
    res = check.fn(Ctx(config))
    mode = "rational" if res.exact else "float"
    if check.reported:
        status = "reported"
    else:
        status = "pass" if res.passed else "fail"
    tol = 0.0 if res.exact else check.tolerance
    return IdentityCheck(check.id, check.description, check.anchor, res.inputs, float(res.residual), tol, mode,
                         status)


def _run_by_id(args) -> IdentityCheck:
    check_id, config = args
    return run_check(REGISTRY[check_id], config)


def threads() -> int:
    raw = os.environ.get("CURV_THREADS", "1")
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"CURV_THREADS must be a positive integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"CURV_THREADS must be a positive integer, got {raw!r}")
    return value


def run_suite(config: RunConfig = RunConfig()) -> VerificationReport:
    """Run selected checks; with CURV_THREADS > 1 they run in worker processes.

    Results are collected in registry order either way, so the report does
    not depend on scheduling.
    """
    chosen = select(config.filter)
    workers = min(threads(), len(chosen))
    if workers <= 1:
        results = [run_check(c, config) for c in chosen]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_by_id, [(c.id, config) for c in chosen]))
    return VerificationReport(tuple(results), config)

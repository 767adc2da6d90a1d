"""Scenario runner: samples points, evaluates every identity, aggregates residuals."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import tolerances as tl
from .bundle import (TangentPoint, TTVector, canonical_flip, connection_map, horizontal_curve,
                     psi, sasaki_metric, tg_tilde, vertical_lift, whitney_metric, xi,
                     xi_inverse, covdev_via_connection)
from .core import check_levi_civita, covariant_derivative, metric_at
from .errors import GeometryError, PreconditionError, ScenarioNotFoundError
from .immersion import (DEFAULT_TG_TOL, Immersion, check_cstar, check_vsas, check_vstar,
                        is_totally_geodesic, isometry_residual, sff_normality_residual,
                        sff_symmetry_residual, theorem_residual)
from .report import CheckRecord, VerificationReport
from .scenarios import MAP_KINDS, Scenario, get_scenario

log = logging.getLogger(__name__)

MODES = ("analytic", "fd", "cross-check")
MAX_RESAMPLES = 10
SAMPLE_MARGIN = 0.05
TG_SAMPLES = 25

# name, anchor, tier in analytic mode, tier in fd mode
CHECKS = [
    ("isometry-precondition", "isometric immersion: g = pullback of gbar", tl.ANALYTIC, tl.FD1),
    ("lc-metric-compat", "Levi-Civita: metric compatibility", tl.ANALYTIC, tl.FD1),
    ("lc-torsion", "Levi-Civita: torsion free", tl.ANALYTIC, tl.FD1),
    ("flip-involution", "canonical flip is an involution", tl.EXACT, tl.EXACT),
    ("flip-intertwining", "canonical flip exchanges the two projections", tl.EXACT, tl.EXACT),
    ("flip-torsion", "torsion free iff C(u,v) = flip C(v,u)", tl.ANALYTIC, tl.FD1),
    ("splitting-roundtrip", "horizontal/vertical splitting and its inverse", tl.ROUNDOFF,
     tl.ROUNDOFF),
    ("sasaki-blocks", "Sasaki metric: orthogonal blocks isometric to g", tl.ANALYTIC,
     tl.ANALYTIC),
    ("psi-isometry", "Whitney-sum metric isometry", tl.ROUNDOFF, tl.ROUNDOFF),
    ("metric-criterion", "metric iff Tg vanishes on horizontal pairs", tl.FD2, tl.FD2),
    ("covdev-consistency", "covariant derivative from the connection map", tl.FD1, tl.FD1),
    ("vertical-naturality", "double pushforward commutes with the vertical lift", tl.ANALYTIC,
     tl.FD1),
    ("vertical-sasaki", "vertical parts of the pulled-back Sasaki metric", tl.ANALYTIC, tl.FD1),
    ("connection-pushforward", "pushforward of the connection map", tl.ANALYTIC2, tl.FD2),
    ("sff-symmetry", "second fundamental form is symmetric", tl.ANALYTIC2, tl.FD1),
    ("sff-normality", "second fundamental form is normal", tl.ANALYTIC2, tl.FD1),
    ("theorem-pullback", "pullback Sasaki = Sasaki + gbar(B, B)", tl.ANALYTIC2, tl.FD2),
]
CHECK_NAMES = [c[0] for c in CHECKS]


@dataclass
class ScenarioSpec:
    scenario: Optional[str] = None
    custom: Optional[dict] = None
    samples: int = 100
    seed: int = 0
    mode: str = "analytic"
    tolerances: dict = field(default_factory=dict)
    tg_tol: float = DEFAULT_TG_TOL

    def __post_init__(self):
        if (self.scenario is None) == (self.custom is None):
            raise ValueError("give exactly one of 'scenario' or 'custom'")
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ValueError("samples must be a positive integer")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        bad = set(self.tolerances) - set(tl.TIERS)
        if bad:
            raise ValueError(f"unknown tolerance tiers: {sorted(bad)}")

    def resolve(self) -> Scenario:
        if self.scenario is not None:
            return get_scenario(self.scenario)
        return custom_scenario(self.custom)

    def tier_tol(self, tier: str) -> float:
        return float(self.tolerances.get(tier, tl.TIERS[tier]))


_CUSTOM_FIELDS = {"name", "description", "source", "target", "map", "params", "expected"}
_SPEC_FIELDS = {"scenario", "custom", "samples", "seed", "mode", "tolerances", "tg_tol"}


def custom_scenario(d: dict) -> Scenario:
    unknown = set(d) - _CUSTOM_FIELDS
    if unknown:
        raise ValueError(f"unknown fields in custom scenario: {sorted(unknown)}")
    for key in ("source", "target", "map"):
        if key not in d:
            raise ValueError(f"custom scenario needs {key!r}")
    if d["map"] not in MAP_KINDS:
        raise ScenarioNotFoundError(f"unknown map kind {d['map']!r}")
    return Scenario(d.get("name", "custom"), d.get("description", ""), d["source"], d["target"],
                    d["map"], dict(d.get("params", {})), d.get("expected"))


def load_spec(text: str, **overrides) -> ScenarioSpec:
    """Parse a scenario file (one JSON object); unknown fields are rejected."""
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("scenario file must hold a JSON object")
    unknown = set(data) - _SPEC_FIELDS
    if unknown:
        raise ValueError(f"unknown fields in scenario file: {sorted(unknown)}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    data.setdefault("seed", default_seed())
    return ScenarioSpec(**data)


def default_seed() -> int:
    env = os.environ.get("SASAKI_SEED")
    return int(env) if env else 0


def _polynomial_field(rng, n, x0):
    c0, c1, c2 = rng.standard_normal(n), rng.standard_normal((n, n)), rng.standard_normal((n, n, n))
    return lambda x: c0 + c1 @ (x - x0) + 0.5 * np.einsum("kij,i,j->k", c2, x - x0, x - x0)


def _sample_residuals(I: Immersion, rng: np.random.Generator) -> dict:
    """One draw of every residual at a random point of the source chart."""
    M = I.source
    n = M.dim
    x = M.sample(rng, margin=SAMPLE_MARGIN)
    normal = rng.standard_normal
    u = TangentPoint(x, normal(n), M)
    X = TTVector(u, normal(n), normal(n))
    Y = TTVector(u, normal(n), normal(n))
    out = {}

    out["isometry-precondition"] = isometry_residual(I, x)
    out["lc-metric-compat"], out["lc-torsion"] = check_levi_civita(M, x)

    twice = canonical_flip(canonical_flip(X))
    out["flip-involution"] = float(np.max(np.abs(twice.slots() - X.slots())))
    F = canonical_flip(X)
    out["flip-intertwining"] = float(max(np.max(np.abs(F.at.x - x)), np.max(np.abs(F.at.v - X.a)),
                                         np.max(np.abs(F.a - u.v))))
    w = normal(n)
    lhs = canonical_flip(connection_map(u, w))
    rhs = connection_map(TangentPoint(x, w, M), u.v)
    out["flip-torsion"] = float(np.max(np.abs(lhs.slots() - rhs.slots())))

    h, wv = normal(n), normal(n)
    back = xi_inverse(xi(u, h, wv))
    split = xi_inverse(X)
    again = xi(u, split.h, split.w)
    out["splitting-roundtrip"] = float(max(np.max(np.abs(back.h - h)), np.max(np.abs(back.w - wv)),
                                           np.max(np.abs(again.components() - X.components()))))

    g = metric_at(M, x)
    f1, f2, d1, d2 = normal(n), normal(n), normal(n), normal(n)
    out["sasaki-blocks"] = max(
        abs(sasaki_metric(u, vertical_lift(u, f1), vertical_lift(u, f2)) - f1 @ g @ f2),
        abs(sasaki_metric(u, connection_map(u, d1), connection_map(u, d2)) - d1 @ g @ d2),
        abs(sasaki_metric(u, vertical_lift(u, f1), connection_map(u, d1))))
    out["psi-isometry"] = abs(whitney_metric(psi(X), psi(Y)) - sasaki_metric(u, X, Y))

    u2 = TangentPoint(x, normal(n), M)
    out["metric-criterion"] = abs(tg_tilde(horizontal_curve(u, h), horizontal_curve(u2, h)))

    field_ = _polynomial_field(rng, n, x)
    out["covdev-consistency"] = float(np.max(np.abs(
        covdev_via_connection(M, field_, x, d1) - covariant_derivative(M, x, field_, d1))))

    out["vertical-naturality"] = check_vstar(I, u, f1)
    out["vertical-sasaki"] = check_vsas(I, u, f1, f2)
    out["connection-pushforward"] = check_cstar(I, u, d1)
    out["sff-symmetry"] = sff_symmetry_residual(I, x, d1, d2)
    out["sff-normality"] = sff_normality_residual(I, x, d1, d2, normal(n))
    out["theorem-pullback"] = theorem_residual(I, u, X, Y)
    return out


def _run_checks(I: Immersion, spec: ScenarioSpec, mode: str, suffix: str = "") -> list:
    per_check = {name: [] for name in CHECK_NAMES}
    errors = 0
    for i in range(spec.samples):
        # per-sample generator: results do not depend on evaluation order
        rng = np.random.default_rng([spec.seed, i])
        for attempt in range(MAX_RESAMPLES):
            try:
                res = _sample_residuals(I, rng)
                break
            except (GeometryError, np.linalg.LinAlgError) as exc:
                log.debug("sample %d attempt %d failed: %s", i, attempt, exc)
        else:
            errors += 1
            continue
        for name, val in res.items():
            per_check[name].append(float(val))

    records = []
    for name, anchor, t_an, t_fd in CHECKS:
        tier = t_an if mode == "analytic" else t_fd
        tol = spec.tier_tol(tier)
        vals = per_check[name]
        mx = max(vals) if vals else 0.0
        mean = float(np.mean(vals)) if vals else 0.0
        ok = bool(vals) and errors == 0 and tl.passes(mx, tol)
        records.append(CheckRecord(name + suffix, anchor, tier, tol, len(vals), mx, mean, ok,
                                   errors))
    return records


def _classify(I: Immersion, spec: ScenarioSpec, scenario: Scenario) -> dict:
    c = is_totally_geodesic(I, samples=min(spec.samples, TG_SAMPLES), tol=spec.tg_tol,
                            seed=spec.seed)
    out = {
        "verdict": c.verdict,
        "verdict_by_deviation": c.verdict_by_deviation,
        "max_b_norm": c.max_b_norm,
        "max_deviation": c.max_deviation,
        "tol": c.tol,
        "samples": c.samples,
        "consistent": c.consistent,
        "expected": scenario.expected,
    }
    out["matches_expected"] = scenario.expected is None or scenario.expected == c.verdict
    return out


def _precondition(records, scenario: Scenario) -> None:
    for r in records:
        if (r.check.startswith("isometry-precondition") and r.n_samples
                and not tl.passes(r.max_residual, r.tolerance)):
            raise PreconditionError(
                f"{scenario.name}: source metric is not the pullback of the target metric "
                f"(max gap {r.max_residual:.3g})")


def run_scenario(spec: ScenarioSpec) -> VerificationReport:
    """Run the full check suite for one scenario; deterministic for a fixed spec."""
    scenario = spec.resolve()
    report = VerificationReport(scenario=scenario.name, description=scenario.description,
                                mode=spec.mode, seed=spec.seed, samples=spec.samples,
                                source=scenario.source, target=scenario.target)
    modes = ["analytic", "fd"] if spec.mode == "cross-check" else [spec.mode]
    classifications = {}
    for mode in modes:
        I = scenario.immersion(mode)
        suffix = f"@{mode}" if spec.mode == "cross-check" else ""
        records = _run_checks(I, spec, mode, suffix)
        _precondition(records, scenario)
        report.checks.extend(records)
        classifications[mode] = _classify(I, spec, scenario)

    if spec.mode == "cross-check":
        by_name = {r.check: r for r in report.checks}
        for name in CHECK_NAMES:
            a, f = by_name[name + "@analytic"], by_name[name + "@fd"]
            ratio = None if a.max_residual == 0.0 else f.max_residual / a.max_residual
            report.cross_check.append({"check": name, "agree": a.passed == f.passed,
                                       "ratio": ratio})
        ca, cf = classifications["analytic"], classifications["fd"]
        report.cross_check.append({"check": "verdict", "agree": ca["verdict"] == cf["verdict"],
                                   "ratio": None})
        report.classification = ca
    else:
        report.classification = classifications[spec.mode]

    cl = report.classification
    report.passed = (all(r.passed for r in report.checks) and cl["consistent"]
                     and cl["matches_expected"]
                     and all(x["agree"] for x in report.cross_check))
    return report

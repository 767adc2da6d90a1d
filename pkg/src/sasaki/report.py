"""Verification report records and their JSON / CSV / text serializations."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

CSV_COLUMNS = ("scenario", "check", "anchor", "tier", "samples",
               "max_residual", "mean_residual", "pass")


@dataclass
class CheckRecord:
    check: str
    anchor: str
    tier: str
    tolerance: float
    n_samples: int
    max_residual: float
    mean_residual: float
    passed: bool
    errors: int = 0


@dataclass
class VerificationReport:
    scenario: str
    description: str = ""
    mode: str = "analytic"
    seed: int = 0
    samples: int = 0
    source: str = ""
    target: str = ""
    checks: list = field(default_factory=list)
    classification: Optional[dict] = None
    cross_check: list = field(default_factory=list)
    passed: bool = True

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown report fields: {sorted(unknown)}")
        kwargs = dict(data)
        kwargs["checks"] = [CheckRecord(**c) for c in data.get("checks", [])]
        return cls(**kwargs)

    def failed_checks(self) -> list[CheckRecord]:
        return [c for c in self.checks if not c.passed]


def to_json(report: VerificationReport) -> str:
    # sorted keys + repr floats give byte-stable output for identical runs
    return json.dumps(report.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"


def from_json(text: str) -> VerificationReport:
    return VerificationReport.from_dict(json.loads(text))


def to_csv(reports) -> str:
    if isinstance(reports, VerificationReport):
        reports = [reports]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        for c in r.checks:
            writer.writerow([r.scenario, c.check, c.anchor, c.tier, c.n_samples,
                             repr(c.max_residual), repr(c.mean_residual),
                             "true" if c.passed else "false"])
    return buf.getvalue()


def to_text(report: VerificationReport) -> str:
    lines = [f"scenario {report.scenario} ({report.mode}, seed {report.seed}, "
             f"{report.samples} samples): {'PASS' if report.passed else 'FAIL'}"]
    width = max([len(c.check) for c in report.checks] + [5])
    for c in report.checks:
        flag = "ok  " if c.passed else "FAIL"
        extra = f"  errors={c.errors}" if c.errors else ""
        lines.append(f"  {flag} {c.check:<{width}}  max={c.max_residual:.3e}  "
                     f"mean={c.mean_residual:.3e}  tol={c.tolerance:.0e} [{c.tier}]{extra}")
    cl = report.classification
    if cl:
        lines.append(f"  verdict {cl['verdict']} (max |B| = {cl['max_b_norm']:.3e}, "
                     f"max metric deviation = {cl['max_deviation']:.3e}, "
                     f"consistent = {cl['consistent']})")
    for x in report.cross_check:
        ratio = "n/a" if x["ratio"] is None else f"{x['ratio']:.3g}"
        lines.append(f"  cross-check {x['check']}: agree={x['agree']} fd/analytic={ratio}")
    return "\n".join(lines) + "\n"


def emit_report(report: VerificationReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return to_json(report).encode()
    if fmt == "csv":
        return to_csv(report).encode()
    if fmt == "text":
        return to_text(report).encode()
    raise ValueError(f"unknown report format {fmt!r}")

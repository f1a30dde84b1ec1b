"""Check reports and deterministic text / structured serialization.

Serialized bytes must be identical across runs on identical input, so the
elapsed field is carried for interactive display but never serialized.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class CheckReport:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    ref: str  # catalog tag, e.g. "A4"; see README for the tag table
    witness: str | None = None
    elapsed: float = 0.0

    def __post_init__(self):
        if self.status not in ("pass", "fail", "skipped"):
            raise ValueError(f"unknown check status {self.status!r}")

    @staticmethod
    def passed(name: str, ref: str, elapsed: float = 0.0) -> "CheckReport":
        return CheckReport(name, "pass", ref, None, elapsed)

    @staticmethod
    def failed(
        name: str, ref: str, witness: str, elapsed: float = 0.0
    ) -> "CheckReport":
        return CheckReport(name, "fail", ref, witness, elapsed)

    @staticmethod
    def skipped(name: str, ref: str) -> "CheckReport":
        return CheckReport(name, "skipped", ref, None, 0.0)


class Stopwatch:
    """Context manager measuring wall time into .elapsed."""

    def __enter__(self):
        self.start = time.perf_counter()
        self.elapsed = 0.0
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False


def witness_at(idx: tuple[int, ...], expr) -> str:
    """Witness text locating a residual at a frame-index tuple."""
    place = ", ".join(f"E{i + 1}" for i in idx)
    return f"[{place}]: {expr}"


def report_from_failures(
    name: str, ref: str, failures: list, elapsed: float
) -> CheckReport:
    """Pass unless failures is nonempty; first failure becomes the witness."""
    if failures:
        idx, expr = failures[0]
        return CheckReport.failed(name, ref, witness_at(idx, expr), elapsed)
    return CheckReport.passed(name, ref, elapsed)


@dataclass(frozen=True)
class SolitonSummary:
    lam: str
    mu: str
    classification: str


@dataclass(frozen=True)
class SuiteResult:
    manifold: str
    dimension: int
    n: int
    checks: tuple[CheckReport, ...]
    notes: tuple[str, ...] = ()
    soliton: SolitonSummary | None = None


def any_failed(checks: Iterable[CheckReport]) -> bool:
    return any(c.status == "fail" for c in checks)


def exit_code(checks: Iterable[CheckReport]) -> int:
    return 1 if any_failed(checks) else 0


def emit_report(result: SuiteResult, format: str) -> bytes:
    if format == "text":
        return emit_text(result)
    if format == "json-like":
        return emit_structured(result)
    raise ValueError(f"unknown report format {format!r}")


def emit_text(result: SuiteResult) -> bytes:
    lines = [
        f"manifold {result.manifold}  (dimension {result.dimension}, n = {result.n})"
    ]
    width = max((len(c.name) for c in result.checks), default=0)
    tags = {"pass": "pass", "fail": "FAIL", "skipped": "skip"}
    for c in result.checks:
        line = f"  {tags[c.status]}  {c.name.ljust(width)}  [{c.ref}]"
        if c.witness is not None:
            line += f"  witness: {c.witness}"
        lines.append(line)
    if result.notes:
        lines.append("notes:")
        for note in result.notes:
            lines.append(f"  - {note}")
    if result.soliton is not None:
        s = result.soliton
        lines.append(
            f"soliton: lambda = {s.lam}, mu = {s.mu}  ({s.classification})"
        )
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for c in result.checks:
        counts[c.status] += 1
    lines.append(
        f"summary: {counts['pass']} pass, {counts['fail']} fail,"
        f" {counts['skipped']} skipped"
    )
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_structured(result: SuiteResult) -> bytes:
    checks = []
    for c in result.checks:
        entry: dict = {"name": c.name, "status": c.status, "paper_ref": c.ref}
        if c.witness is not None:
            entry["witness"] = c.witness
        checks.append(entry)
    soliton = None
    if result.soliton is not None:
        soliton = {
            "lambda": result.soliton.lam,
            "mu": result.soliton.mu,
            "classification": result.soliton.classification,
        }
    doc = {
        "manifold": result.manifold,
        "dimension": result.dimension,
        "n": result.n,
        "checks": checks,
        "notes": list(result.notes),
        "soliton": soliton,
    }
    return (json.dumps(doc, indent=2, sort_keys=False) + "\n").encode("utf-8")

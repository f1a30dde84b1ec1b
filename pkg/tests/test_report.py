import json

import pytest

from parakenmotsu.report import (
    CheckReport,
    SolitonSummary,
    Stopwatch,
    SuiteResult,
    any_failed,
    emit_report,
    exit_code,
    report_from_failures,
    witness_at,
)


def _result(elapsed: float) -> SuiteResult:
    checks = (
        CheckReport.passed("axioms/phi-square", "A1", elapsed),
        CheckReport.failed("identities/xi-curvature", "I1", "[E1, E1]: -1", elapsed),
        CheckReport.skipped("soliton/constants", "L1"),
    )
    return SuiteResult(
        manifold="demo",
        dimension=3,
        n=1,
        checks=checks,
        notes=("reference table disagrees here",),
        soliton=SolitonSummary("1", "1", "Einstein"),
    )


def test_serialization_ignores_elapsed_for_determinism():
    fast, slow = _result(0.001), _result(9.75)
    for format in ("text", "json-like"):
        assert emit_report(fast, format) == emit_report(slow, format)


def test_text_format_contents():
    out = emit_report(_result(0.5), "text").decode("utf-8")
    assert out.startswith("manifold demo  (dimension 3, n = 1)\n")
    assert "  pass  axioms/phi-square" in out
    assert "  FAIL  identities/xi-curvature" in out
    assert "witness: [E1, E1]: -1" in out
    assert "  skip  soliton/constants" in out
    assert "  - reference table disagrees here" in out
    assert "soliton: lambda = 1, mu = 1  (Einstein)" in out
    assert out.endswith("summary: 1 pass, 1 fail, 1 skipped\n")


def test_structured_format_contents():
    doc = json.loads(emit_report(_result(0.5), "json-like"))
    assert doc["manifold"] == "demo"
    assert doc["dimension"] == 3
    assert doc["n"] == 1
    assert [c["status"] for c in doc["checks"]] == ["pass", "fail", "skipped"]
    assert doc["checks"][0]["paper_ref"] == "A1"
    assert doc["checks"][1]["witness"] == "[E1, E1]: -1"
    assert "witness" not in doc["checks"][0]
    assert doc["notes"] == ["reference table disagrees here"]
    assert doc["soliton"] == {
        "lambda": "1",
        "mu": "1",
        "classification": "Einstein",
    }


def test_empty_suite_serializes():
    empty = SuiteResult("void", 3, 1, ())
    out = emit_report(empty, "text").decode("utf-8")
    assert "summary: 0 pass, 0 fail, 0 skipped" in out
    doc = json.loads(emit_report(empty, "json-like"))
    assert doc["checks"] == [] and doc["soliton"] is None


def test_unknown_format_rejected():
    with pytest.raises(ValueError):
        emit_report(_result(0.0), "yaml")


def test_exit_code_and_any_failed():
    ok = (CheckReport.passed("a", "A1"), CheckReport.skipped("b", "A2"))
    assert not any_failed(ok)
    assert exit_code(ok) == 0
    bad = ok + (CheckReport.failed("c", "A3", "w"),)
    assert any_failed(bad)
    assert exit_code(bad) == 1


def test_status_validation():
    with pytest.raises(ValueError):
        CheckReport("x", "maybe", "A1")


def test_witness_at_formats_frame_indices():
    assert witness_at((0, 2), "-1") == "[E1, E3]: -1"


def test_report_from_failures_picks_first_witness():
    report = report_from_failures("t", "A1", [((1, 1), "2"), ((0, 0), "3")], 0.1)
    assert report.status == "fail"
    assert report.witness == "[E2, E2]: 2"
    assert report_from_failures("t", "A1", [], 0.1).status == "pass"


def test_stopwatch_measures_nonnegative_time():
    with Stopwatch() as t:
        pass
    assert t.elapsed >= 0.0

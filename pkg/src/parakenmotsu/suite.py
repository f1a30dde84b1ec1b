"""Dependency-ordered verification suite for a manifold document.

Checks run in stages.  A stage runs only when every stage it depends on
has computed and passed; otherwise its checks are reported as skipped.
Selection by name or by group prefix controls which checks are reported
(and count toward the exit status), not which stages are computed:
unselected checks still run when a selected check needs their results,
but always appear as skipped.
"""

from __future__ import annotations

from fractions import Fraction

from parakenmotsu.connection import ConnectionError_, koszul_connection
from parakenmotsu.curvature import (
    CurvatureError,
    ricci,
    ricci_operator,
    riemann,
    w2_tensor,
)
from parakenmotsu.dsl import ManifoldDocument
from parakenmotsu.fixtures import reference_conflict_notes
from parakenmotsu.geometry import ValenceError
from parakenmotsu.report import (
    CheckReport,
    SolitonSummary,
    Stopwatch,
    SuiteResult,
    witness_at,
)
from parakenmotsu.soliton import (
    ConditionKind,
    FactorError,
    NoConstantSolution,
    NotInSpan,
    condition_check,
    mu_zero_variant_check,
    phi_ricci_prefactor,
    phi_ricci_symmetric_check,
    quasi_einstein_decompose,
    soliton_from_parallel_check,
    solve_soliton,
    symbolic_factor_check,
)
from parakenmotsu.structure import (
    ParacontactStructure,
    check_axioms,
    check_para_kenmotsu,
    kenmotsu_identity_suite,
)

# (stage, check name, catalog tag), in report order.  The skip path
# synthesizes reports from this table, so it must list every check each
# stage can emit, in the order the stage emits them.
CATALOG: tuple[tuple[str, str, str], ...] = (
    ("axioms", "axioms/eta-xi-pairing", "A1"),
    ("axioms", "axioms/phi-annihilates-xi", "A2"),
    ("axioms", "axioms/eta-annihilates-phi", "A3"),
    ("axioms", "axioms/phi-square", "A4"),
    ("axioms", "axioms/metric-phi-compatibility", "A5"),
    ("axioms", "axioms/phi-skew-adjoint", "A6"),
    ("axioms", "axioms/eta-is-metric-dual", "A7"),
    ("axioms", "axioms/unit-xi", "A8"),
    ("axioms", "axioms/signature", "A9"),
    ("axioms", "axioms/eigendistribution-ranks", "A10"),
    ("connection", "connection/koszul", "C1"),
    ("para-kenmotsu", "para-kenmotsu/covariant-phi", "K1"),
    ("identities", "identities/xi-covariant-derivative", "I1"),
    ("identities", "identities/eta-of-nabla-xi", "I2"),
    ("identities", "identities/xi-parallel-along-xi", "I3"),
    ("identities", "identities/curvature-on-xi", "I4"),
    ("identities", "identities/eta-of-curvature", "I5"),
    ("identities", "identities/eta-of-curvature-on-xi", "I6"),
    ("identities", "identities/eta-covariant-derivative", "I7"),
    ("identities", "identities/eta-parallel-along-xi", "I8"),
    ("identities", "identities/lie-phi-along-xi", "I9"),
    ("identities", "identities/lie-eta-along-xi", "I10"),
    ("identities", "identities/lie-eta-square-along-xi", "I11"),
    ("identities", "identities/lie-metric-along-xi", "I12"),
    ("identities", "identities/eta-closed", "I13"),
    ("identities", "identities/nijenhuis-vanishes", "I14"),
    ("curvature", "curvature/riemann-symmetries", "C2"),
    ("curvature", "curvature/ricci-symmetric", "C3"),
    ("curvature-pk", "curvature/ricci-on-xi", "C4"),
    ("curvature-pk", "curvature/q-commutes-with-phi", "C5"),
    ("soliton", "soliton/constants", "L1"),
    ("soliton", "soliton/quasi-einstein-split", "L2"),
    ("condition", "condition/R.S", "D1"),
    ("condition", "condition/S.R", "D2"),
    ("condition", "condition/W2.S", "D3"),
    ("condition", "condition/S.W2", "D4"),
    ("factors", "factors/R.S", "F1"),
    ("factors", "factors/S.R", "F2"),
    ("factors", "factors/W2.S", "F3"),
    ("factors", "factors/S.W2", "F4"),
    ("factors", "factors/phi-ricci", "F5"),
    ("parallel", "soliton/parallel-deformation-recovery", "T1"),
    ("parallel", "soliton/mu-zero-deformation-not-parallel", "T2"),
    ("phi-ricci", "phi-ricci/phi-square-of-nabla-q", "P1"),
    ("phi-ricci", "phi-ricci/q-parallel-along-xi", "P2"),
    ("phi-ricci", "phi-ricci/s-parallel-along-xi", "P3"),
)

_STAGE_DEPS: dict[str, tuple[str, ...]] = {
    "axioms": (),
    "connection": (),
    "para-kenmotsu": ("axioms", "connection"),
    "identities": ("para-kenmotsu",),
    "curvature": ("connection",),
    "curvature-pk": ("curvature", "para-kenmotsu"),
    "soliton": ("curvature", "para-kenmotsu"),
    "condition": ("soliton",),
    "factors": (),
    "parallel": ("soliton",),
    "phi-ricci": ("soliton",),
}

_STAGE_ORDER = tuple(dict.fromkeys(stage for stage, _, _ in CATALOG))


def check_names() -> tuple[str, ...]:
    return tuple(name for _, name, _ in CATALOG)


def selectable_names() -> frozenset[str]:
    names = {name for _, name, _ in CATALOG}
    names.update(name.split("/")[0] for _, name, _ in CATALOG)
    return frozenset(names)


def _selected(name: str, selection: frozenset[str] | None) -> bool:
    if selection is None:
        return True
    return name in selection or name.split("/")[0] in selection


def run_suite(
    source: ManifoldDocument | ParacontactStructure,
    selection=None,
    name: str | None = None,
) -> SuiteResult:
    if isinstance(source, ManifoldDocument):
        structure = source.to_structure()
        manifold_name = name or source.name
    else:
        structure = source
        manifold_name = name or "manifold"
    sel = None if selection is None else frozenset(selection)

    s = structure
    n = s.n
    ctx: dict[str, object] = {}
    stage_passed: dict[str, bool] = {}
    computed: dict[str, list[CheckReport]] = {}

    for stage in _STAGE_ORDER:
        if all(stage_passed.get(dep, False) for dep in _STAGE_DEPS[stage]):
            reports = _RUNNERS[stage](s, n, ctx)
            computed[stage] = reports
            stage_passed[stage] = all(r.status == "pass" for r in reports)

    checks: list[CheckReport] = []
    for stage, check_name, ref in CATALOG:
        if stage not in computed or not _selected(check_name, sel):
            checks.append(CheckReport.skipped(check_name, ref))
            continue
        match = next(r for r in computed[stage] if r.name == check_name)
        checks.append(match)

    notes: tuple[str, ...] = ()
    if "conn" in ctx and "riem" in ctx and "ricci" in ctx:
        sol = ctx.get("sol")
        pair = (sol.lam, sol.mu) if sol is not None else None
        notes = tuple(
            reference_conflict_notes(ctx["conn"], ctx["riem"], ctx["ricci"], pair)
        )

    soliton = None
    sol = ctx.get("sol")
    reported = {r.name: r.status for r in checks}
    if sol is not None and reported.get("soliton/constants") == "pass":
        soliton = SolitonSummary(str(sol.lam), str(sol.mu), sol.classification)

    return SuiteResult(
        manifold=manifold_name,
        dimension=s.dim,
        n=n,
        checks=tuple(checks),
        notes=notes,
        soliton=soliton,
    )


# -- stage runners -----------------------------------------------------------


def _run_axioms(s, n, ctx):
    return list(check_axioms(s))


def _run_connection(s, n, ctx):
    with Stopwatch() as t:
        try:
            conn = koszul_connection(s.frame)
        except ConnectionError_ as err:
            conn = None
            message = str(err)
    if conn is None:
        return [CheckReport.failed("connection/koszul", "C1", message, t.elapsed)]
    ctx["conn"] = conn
    return [CheckReport.passed("connection/koszul", "C1", t.elapsed)]


def _run_para_kenmotsu(s, n, ctx):
    return [check_para_kenmotsu(s, ctx["conn"])]


def _run_identities(s, n, ctx):
    return list(kenmotsu_identity_suite(s, ctx["conn"], ctx.get("riem")))


def _run_curvature(s, n, ctx):
    reports = []
    with Stopwatch() as t:
        try:
            riem = riemann(ctx["conn"])
        except CurvatureError as err:
            riem = None
            message = str(err)
    if riem is None:
        reports.append(
            CheckReport.failed("curvature/riemann-symmetries", "C2", message, t.elapsed)
        )
        reports.append(CheckReport.skipped("curvature/ricci-symmetric", "C3"))
        return reports
    ctx["riem"] = riem
    reports.append(CheckReport.passed("curvature/riemann-symmetries", "C2", t.elapsed))

    with Stopwatch() as t:
        try:
            ricci_tensor = ricci(riem)
        except (CurvatureError, ValenceError) as err:
            ricci_tensor = None
            message = str(err)
    if ricci_tensor is None:
        reports.append(
            CheckReport.failed("curvature/ricci-symmetric", "C3", message, t.elapsed)
        )
        return reports
    ctx["ricci"] = ricci_tensor
    ctx["q"] = ricci_operator(ricci_tensor)
    reports.append(CheckReport.passed("curvature/ricci-symmetric", "C3", t.elapsed))
    return reports


def _run_curvature_pk(s, n, ctx):
    frame = s.frame
    d = frame.dim
    ricci_tensor = ctx["ricci"]
    q = ctx["q"]
    phi = s.phi
    xif = s.xi_components()
    two_n = frame.chart.const(2 * n)

    with Stopwatch() as t:
        bad = None
        for j in range(d):
            value = sum(
                (ricci_tensor[j, m] * xif[m] for m in range(d) if not xif[m].is_zero()),
                frame.chart.zero(),
            )
            residual = value + two_n * s.eta.on_member(j)
            if not residual.is_zero():
                bad = ((j,), residual)
                break
    on_xi = (
        CheckReport.passed("curvature/ricci-on-xi", "C4", t.elapsed)
        if bad is None
        else CheckReport.failed(
            "curvature/ricci-on-xi", "C4", witness_at(*bad), t.elapsed
        )
    )

    with Stopwatch() as t:
        bad = None
        for a in range(d):
            for i in range(d):
                residual = sum(
                    (q[a, m] * phi[m, i] - phi[a, m] * q[m, i] for m in range(d)),
                    frame.chart.zero(),
                )
                if not residual.is_zero():
                    bad = ((a, i), residual)
                    break
            if bad is not None:
                break
    commute = (
        CheckReport.passed("curvature/q-commutes-with-phi", "C5", t.elapsed)
        if bad is None
        else CheckReport.failed(
            "curvature/q-commutes-with-phi", "C5", witness_at(*bad), t.elapsed
        )
    )
    return [on_xi, commute]


def _run_soliton(s, n, ctx):
    reports = []
    with Stopwatch() as t:
        try:
            sol = solve_soliton(s, ctx["ricci"])
        except (NoConstantSolution, ValueError) as err:
            sol = None
            message = str(err)
    if sol is None:
        reports.append(CheckReport.failed("soliton/constants", "L1", message, t.elapsed))
        reports.append(CheckReport.skipped("soliton/quasi-einstein-split", "L2"))
        return reports
    ctx["sol"] = sol
    reports.append(CheckReport.passed("soliton/constants", "L1", t.elapsed))

    with Stopwatch() as t:
        witness = None
        try:
            a, b = quasi_einstein_decompose(ctx["ricci"], s.metric(), s.eta)
            expected = (Fraction(-(sol.lam + 1)), Fraction(-(sol.mu - 1)))
            if (a, b) != expected:
                witness = f"split gives ({a}, {b}), soliton implies {expected}"
        except NotInSpan as err:
            witness = str(err)
    reports.append(
        CheckReport.passed("soliton/quasi-einstein-split", "L2", t.elapsed)
        if witness is None
        else CheckReport.failed("soliton/quasi-einstein-split", "L2", witness, t.elapsed)
    )
    return reports


def _run_condition(s, n, ctx):
    riem = ctx["riem"]
    ricci_tensor = ctx["ricci"]
    sol = ctx["sol"]
    w2 = w2_tensor(riem, ctx["q"], n)
    return [
        condition_check(kind, s, riem, ricci_tensor, sol, w2=w2)
        for kind in ConditionKind
    ]


_FACTOR_REFS = {
    ConditionKind.R_DOT_S: "F1",
    ConditionKind.S_DOT_R: "F2",
    ConditionKind.W2_DOT_S: "F3",
    ConditionKind.S_DOT_W2: "F4",
}


def _run_factors(s, n, ctx):
    reports = []
    for kind in ConditionKind:
        ref = _FACTOR_REFS[kind]
        name = f"factors/{kind.value}"
        with Stopwatch() as t:
            try:
                result = symbolic_factor_check(kind, n)
            except FactorError as err:
                result = None
                message = str(err)
        reports.append(
            CheckReport.passed(name, ref, t.elapsed)
            if result is not None
            else CheckReport.failed(name, ref, message, t.elapsed)
        )
    with Stopwatch() as t:
        try:
            result = phi_ricci_prefactor(n)
        except FactorError as err:
            result = None
            message = str(err)
    reports.append(
        CheckReport.passed("factors/phi-ricci", "F5", t.elapsed)
        if result is not None
        else CheckReport.failed("factors/phi-ricci", "F5", message, t.elapsed)
    )
    return reports


def _run_parallel(s, n, ctx):
    return [
        soliton_from_parallel_check(s, ctx["conn"], ctx["ricci"], ctx["sol"]),
        mu_zero_variant_check(s, ctx["conn"], ctx["ricci"]),
    ]


def _run_phi_ricci(s, n, ctx):
    return list(phi_ricci_symmetric_check(s, ctx["conn"], ctx["ricci"], ctx["sol"]))


_RUNNERS = {
    "axioms": _run_axioms,
    "connection": _run_connection,
    "para-kenmotsu": _run_para_kenmotsu,
    "identities": _run_identities,
    "curvature": _run_curvature,
    "curvature-pk": _run_curvature_pk,
    "soliton": _run_soliton,
    "condition": _run_condition,
    "factors": _run_factors,
    "parallel": _run_parallel,
    "phi-ricci": _run_phi_ricci,
}

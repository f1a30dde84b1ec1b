"""Almost paracontact metric structures and the defining identity suites.

A structure packages the frame together with the endomorphism phi (a
(1,1) tensor in frame components), the distinguished unit vector field
xi, and its metric-dual one-form eta.  All checks below are exact: a
check passes only when the residual normalizes to the zero element of
the scalar ring, and a failing check carries the first nonzero residual
as a printable witness instead of aborting the run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from parakenmotsu.connection import FrameConnection
from parakenmotsu.curvature import lie_derivative, nijenhuis, riemann
from parakenmotsu.geometry import (
    Frame,
    OneForm,
    Tensor,
    ValenceError,
    VectorField,
    exterior_derivative,
    mat_rank,
)
from parakenmotsu.report import CheckReport, Stopwatch, report_from_failures
from parakenmotsu.scalar import ScalarExpr


@dataclass(frozen=True)
class ParacontactStructure:
    frame: Frame
    phi: Tensor
    xi: VectorField
    eta: OneForm
    n: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if (self.phi.r, self.phi.s) != (1, 1):
            raise ValenceError("phi must be a (1,1) tensor")
        if self.frame.dim != 2 * self.n + 1:
            raise ValenceError(
                f"dimension {self.frame.dim} does not equal 2n+1 for n={self.n}"
            )

    @property
    def chart(self):
        return self.frame.chart

    @property
    def dim(self) -> int:
        return self.frame.dim

    def metric(self) -> Tensor:
        if "g" not in self._cache:
            self._cache["g"] = self.frame.metric_tensor()
        return self._cache["g"]

    def xi_components(self) -> tuple[ScalarExpr, ...]:
        if "xi" not in self._cache:
            self._cache["xi"] = self.frame.to_frame(self.xi)
        return self._cache["xi"]

    def eta_square(self) -> Tensor:
        """The (0,2) tensor eta tensor eta."""
        if "ee" not in self._cache:
            eta = self.eta
            self._cache["ee"] = Tensor.build(
                self.frame, 0, 2, lambda i, j: eta.on_member(i) * eta.on_member(j)
            )
        return self._cache["ee"]

    def phi_components(self, comps) -> list[ScalarExpr]:
        """Apply phi to a vector given by frame components."""
        d = self.dim
        out = []
        for a in range(d):
            acc = self.chart.zero()
            for m in range(d):
                if not self.phi[a, m].is_zero() and not comps[m].is_zero():
                    acc = acc + self.phi[a, m] * comps[m]
            out.append(acc)
        return out


def check_axioms(s: ParacontactStructure) -> list[CheckReport]:
    """The defining axioms, each as its own named check; never aborts early."""
    frame = s.frame
    d = s.dim
    chart = s.chart
    gram = frame.gram
    phi = s.phi
    eta = [s.eta.on_member(i) for i in range(d)]
    xif = s.xi_components()
    reports: list[CheckReport] = []

    def run(name, ref, residuals):
        with Stopwatch() as t:
            failures = [(idx, r) for idx, r in residuals if not r.is_zero()]
        reports.append(report_from_failures(name, ref, failures, t.elapsed))

    pairing = sum((eta[m] * xif[m] for m in range(d)), chart.zero())
    run("axioms/eta-xi-pairing", "A1", [((), pairing - 1)])

    run(
        "axioms/phi-annihilates-xi",
        "A2",
        [((a,), c) for a, c in enumerate(s.phi_components(xif))],
    )

    run(
        "axioms/eta-annihilates-phi",
        "A3",
        [
            ((i,), sum((eta[a] * phi[a, i] for a in range(d)), chart.zero()))
            for i in range(d)
        ],
    )

    def phi_square(a, i):
        acc = sum(
            (phi[a, m] * phi[m, i] for m in range(d) if not phi[a, m].is_zero()),
            chart.zero(),
        )
        target = chart.const(1) if a == i else chart.zero()
        return acc - target + xif[a] * eta[i]

    run(
        "axioms/phi-square",
        "A4",
        [((a, i), phi_square(a, i)) for a in range(d) for i in range(d)],
    )

    def metric_compat(i, j):
        acc = chart.zero()
        for m in range(d):
            if phi[m, i].is_zero():
                continue
            for l in range(d):
                if not gram[m][l].is_zero() and not phi[l, j].is_zero():
                    acc = acc + phi[m, i] * gram[m][l] * phi[l, j]
        return acc + gram[i][j] - eta[i] * eta[j]

    run(
        "axioms/metric-phi-compatibility",
        "A5",
        [((i, j), metric_compat(i, j)) for i in range(d) for j in range(d)],
    )

    def skew(i, j):
        left = sum(
            (phi[m, i] * gram[m][j] for m in range(d) if not phi[m, i].is_zero()),
            chart.zero(),
        )
        right = sum(
            (gram[i][m] * phi[m, j] for m in range(d) if not phi[m, j].is_zero()),
            chart.zero(),
        )
        return left + right

    run(
        "axioms/phi-skew-adjoint",
        "A6",
        [((i, j), skew(i, j)) for i in range(d) for j in range(d)],
    )

    run(
        "axioms/eta-is-metric-dual",
        "A7",
        [
            (
                (i,),
                eta[i]
                - sum(
                    (gram[i][m] * xif[m] for m in range(d) if not xif[m].is_zero()),
                    chart.zero(),
                ),
            )
            for i in range(d)
        ],
    )

    unit = chart.zero()
    for i in range(d):
        for j in range(d):
            if not xif[i].is_zero() and not gram[i][j].is_zero():
                unit = unit + xif[i] * gram[i][j] * xif[j]
    run("axioms/unit-xi", "A8", [((), unit - 1)])

    with Stopwatch() as t:
        try:
            signs = frame.gram_signs()
            plus = sum(1 for q in signs if q == 1)
            minus = sum(1 for q in signs if q == -1)
            ok = plus == s.n + 1 and minus == s.n
            msg = f"signature ({plus}, {minus}), expected ({s.n + 1}, {s.n})"
        except ValenceError as err:
            ok, msg = False, str(err)
    reports.append(
        CheckReport.passed("axioms/signature", "A9", t.elapsed)
        if ok
        else CheckReport.failed("axioms/signature", "A9", msg, t.elapsed)
    )

    with Stopwatch() as t:
        horizontal = [i for i in range(d) if eta[i].is_zero()]
        ok = len(horizontal) == 2 * s.n
        msg = f"{len(horizontal)} frame members annihilated by eta, expected {2 * s.n}"
        if ok:
            one = chart.const(1)
            minus_id = [
                [
                    phi[a, i] - (one if a == i else chart.zero())
                    for i in horizontal
                ]
                for a in horizontal
            ]
            plus_id = [
                [
                    phi[a, i] + (one if a == i else chart.zero())
                    for i in horizontal
                ]
                for a in horizontal
            ]
            r_minus = mat_rank(minus_id, chart.zero())
            r_plus = mat_rank(plus_id, chart.zero())
            ok = r_minus == s.n and r_plus == s.n
            msg = (
                f"eigendistribution ranks ({r_minus}, {r_plus}),"
                f" expected ({s.n}, {s.n})"
            )
    reports.append(
        CheckReport.passed("axioms/eigendistribution-ranks", "A10", t.elapsed)
        if ok
        else CheckReport.failed(
            "axioms/eigendistribution-ranks", "A10", msg, t.elapsed
        )
    )
    return reports


def check_para_kenmotsu(
    s: ParacontactStructure, conn: FrameConnection
) -> CheckReport:
    """Defining condition: (nabla_X phi)Y = g(phi X, Y) xi - eta(Y) phi X."""
    frame = s.frame
    d = s.dim
    chart = s.chart
    gram = frame.gram
    phi = s.phi
    xif = s.xi_components()
    eta = [s.eta.on_member(i) for i in range(d)]
    with Stopwatch() as t:
        failures = []
        for i in range(d):
            nabla_phi = conn.nabla_tensor(s.phi, frame.members[i])
            phi_ei = [phi[m, i] for m in range(d)]
            for j in range(d):
                pairing = chart.zero()
                for m in range(d):
                    if not phi_ei[m].is_zero() and not gram[m][j].is_zero():
                        pairing = pairing + phi_ei[m] * gram[m][j]
                for a in range(d):
                    res = nabla_phi[a, j] - pairing * xif[a] + eta[j] * phi[a, i]
                    if not res.is_zero():
                        failures.append(((a, i, j), res))
    return report_from_failures("para-kenmotsu/covariant-phi", "K1", failures, t.elapsed)


def kenmotsu_identity_suite(
    s: ParacontactStructure,
    conn: FrameConnection,
    riem: Tensor | None = None,
) -> list[CheckReport]:
    """The fourteen structural identities satisfied by the defining condition."""
    frame = s.frame
    d = s.dim
    chart = s.chart
    gram = frame.gram
    xif = s.xi_components()
    eta = [s.eta.on_member(i) for i in range(d)]
    if riem is None:
        riem = riemann(conn, verify=False)
    reports: list[CheckReport] = []

    def run(name, ref, residuals):
        with Stopwatch() as t:
            failures = [(idx, r) for idx, r in residuals if not r.is_zero()]
        reports.append(report_from_failures(name, ref, failures, t.elapsed))

    # nabla_X xi = X - eta(X) xi
    nabla_xi = [conn.nabla_frame_components(i, xif) for i in range(d)]
    run(
        "identities/xi-covariant-derivative",
        "I1",
        [
            (
                (a, i),
                nabla_xi[i][a]
                - (chart.const(1) if a == i else chart.zero())
                + eta[i] * xif[a],
            )
            for i in range(d)
            for a in range(d)
        ],
    )

    run(
        "identities/eta-of-nabla-xi",
        "I2",
        [
            (
                (i,),
                sum(
                    (eta[a] * nabla_xi[i][a] for a in range(d)),
                    chart.zero(),
                ),
            )
            for i in range(d)
        ],
    )

    nabla_xi_xi = frame.to_frame(conn.nabla_vv(s.xi, s.xi))
    run(
        "identities/xi-parallel-along-xi",
        "I3",
        [((a,), nabla_xi_xi[a]) for a in range(d)],
    )

    def r_on_xi(a, i, j):
        acc = chart.zero()
        for k in range(d):
            if not xif[k].is_zero() and not riem[a, i, j, k].is_zero():
                acc = acc + riem[a, i, j, k] * xif[k]
        return acc

    run(
        "identities/curvature-on-xi",
        "I4",
        [
            (
                (a, i, j),
                r_on_xi(a, i, j)
                - eta[i] * (chart.const(1) if a == j else chart.zero())
                + eta[j] * (chart.const(1) if a == i else chart.zero()),
            )
            for a in range(d)
            for i in range(d)
            for j in range(d)
        ],
    )

    def eta_of_r(i, j, k):
        acc = chart.zero()
        for a in range(d):
            if not eta[a].is_zero() and not riem[a, i, j, k].is_zero():
                acc = acc + eta[a] * riem[a, i, j, k]
        return acc

    run(
        "identities/eta-of-curvature",
        "I5",
        [
            (
                (i, j, k),
                eta_of_r(i, j, k) + eta[i] * gram[j][k] - eta[j] * gram[i][k],
            )
            for i in range(d)
            for j in range(d)
            for k in range(d)
        ],
    )

    run(
        "identities/eta-of-curvature-on-xi",
        "I6",
        [
            (
                (i, j),
                sum((eta[a] * r_on_xi(a, i, j) for a in range(d)), chart.zero()),
            )
            for i in range(d)
            for j in range(d)
        ],
    )

    eta_tensor = Tensor(frame, 0, 1, tuple(eta))
    nabla_eta = [conn.nabla_tensor_dir(eta_tensor, i) for i in range(d)]
    run(
        "identities/eta-covariant-derivative",
        "I7",
        [
            ((i, j), nabla_eta[i][j] - gram[i][j] + eta[i] * eta[j])
            for i in range(d)
            for j in range(d)
        ],
    )

    run(
        "identities/eta-parallel-along-xi",
        "I8",
        [
            (
                (j,),
                sum(
                    (xif[i] * nabla_eta[i][j] for i in range(d)),
                    chart.zero(),
                ),
            )
            for j in range(d)
        ],
    )

    lie_phi = lie_derivative(s.xi, s.phi)
    run(
        "identities/lie-phi-along-xi",
        "I9",
        [((a, i), lie_phi[a, i]) for a in range(d) for i in range(d)],
    )

    lie_eta = lie_derivative(s.xi, s.eta)
    run(
        "identities/lie-eta-along-xi",
        "I10",
        [((i,), lie_eta.on_member(i)) for i in range(d)],
    )

    lie_ee = lie_derivative(s.xi, s.eta_square())
    run(
        "identities/lie-eta-square-along-xi",
        "I11",
        [((i, j), lie_ee[i, j]) for i in range(d) for j in range(d)],
    )

    lie_g = lie_derivative(s.xi, s.metric())
    run(
        "identities/lie-metric-along-xi",
        "I12",
        [
            ((i, j), lie_g[i, j] - (gram[i][j] - eta[i] * eta[j]) * 2)
            for i in range(d)
            for j in range(d)
        ],
    )

    d_eta = exterior_derivative(s.eta)
    run(
        "identities/eta-closed",
        "I13",
        [((i, j), d_eta[i, j]) for i in range(d) for j in range(d)],
    )

    nij = nijenhuis(s.phi)
    run(
        "identities/nijenhuis-vanishes",
        "I14",
        [
            ((a, i, j), nij[a, i, j])
            for a in range(d)
            for i in range(d)
            for j in range(d)
        ],
    )
    return reports

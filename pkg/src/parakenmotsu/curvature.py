"""Curvature tensors, Lie derivatives, and the Nijenhuis torsion.

Index layout for a (1,3) curvature tensor T: T[a, i, j, k] is the
coefficient of E_a in T(E_i, E_j)E_k.  The curvature convention is

    R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z,

and the Ricci trace S(X,Y) = sum_i eps_i g(R(E_i,X)Y, E_i) over a
pseudo-orthonormal frame with signs eps_i.  This pairing is the one
under which the warped fixtures have S = -2n g.
"""

from __future__ import annotations

from fractions import Fraction

from parakenmotsu.connection import FrameConnection, raise_first
from parakenmotsu.geometry import (
    Frame,
    OneForm,
    Tensor,
    ValenceError,
    VectorField,
    bracket,
)
from parakenmotsu.scalar import ScalarExpr


class CurvatureError(ValueError):
    """Raised when a computed curvature tensor violates an invariant."""


def riemann(conn: FrameConnection, verify: bool = True) -> Tensor:
    """(1,3) curvature tensor of the connection, in frame components."""
    frame = conn.frame
    d = frame.dim
    gamma = conn.gamma
    members = frame.members

    def entry(a: int, i: int, j: int, k: int) -> ScalarExpr:
        acc = members[i](gamma[j][k][a]) - members[j](gamma[i][k][a])
        c = frame.bracket_members(i, j)
        for m in range(d):
            if not gamma[j][k][m].is_zero() and not gamma[i][m][a].is_zero():
                acc = acc + gamma[j][k][m] * gamma[i][m][a]
            if not gamma[i][k][m].is_zero() and not gamma[j][m][a].is_zero():
                acc = acc - gamma[i][k][m] * gamma[j][m][a]
            if not c[m].is_zero() and not gamma[m][k][a].is_zero():
                acc = acc - c[m] * gamma[m][k][a]
        return acc

    riem = Tensor.build(frame, 1, 3, entry)
    if verify:
        _verify_riemann(riem)
    return riem


def _verify_riemann(riem: Tensor) -> None:
    frame = riem.frame
    d = frame.dim
    gram = frame.gram
    for a in range(d):
        for i in range(d):
            for j in range(i, d):
                for k in range(d):
                    if not (riem[a, i, j, k] + riem[a, j, i, k]).is_zero():
                        raise CurvatureError(
                            f"curvature not antisymmetric at ({a},{i},{j},{k})"
                        )
                    cyc = riem[a, i, j, k] + riem[a, j, k, i] + riem[a, k, i, j]
                    if not cyc.is_zero():
                        raise CurvatureError(
                            f"first Bianchi identity fails at ({a},{i},{j},{k})"
                        )

    def lowered(i: int, j: int, k: int, l: int) -> ScalarExpr:
        acc = frame.chart.zero()
        for a in range(d):
            if not gram[l][a].is_zero() and not riem[a, i, j, k].is_zero():
                acc = acc + gram[l][a] * riem[a, i, j, k]
        return acc

    for i in range(d):
        for j in range(i + 1, d):
            for k in range(d):
                for l in range(k + 1, d):
                    if not (lowered(i, j, k, l) - lowered(k, l, i, j)).is_zero():
                        raise CurvatureError(
                            f"pair symmetry fails at ({i},{j},{k},{l})"
                        )


def ricci(riem: Tensor, verify: bool = True) -> Tensor:
    """Ricci tensor S(X,Y) = sum_i eps_i g(R(E_i,X)Y, E_i).

    With the diagonal +1/-1 gram the metric pairing contributes the same
    sign eps_i, so the component formula collapses to sum_i R[i,i,j,k].
    """
    frame = riem.frame
    d = frame.dim
    frame.gram_signs()

    def entry(j: int, k: int) -> ScalarExpr:
        acc = frame.chart.zero()
        for i in range(d):
            c = riem[i, i, j, k]
            if not c.is_zero():
                acc = acc + c
        return acc

    s = Tensor.build(frame, 0, 2, entry)
    if verify:
        for j in range(d):
            for k in range(j + 1, d):
                if not (s[j, k] - s[k, j]).is_zero():
                    raise CurvatureError(f"Ricci tensor not symmetric at ({j},{k})")
    return Tensor(frame, 0, 2, s.components, symmetric=True)


def ricci_operator(s: Tensor) -> Tensor:
    """(1,1) operator Q with g(QX, Y) = S(X, Y)."""
    if s.r != 0 or s.s != 2:
        raise ValenceError("ricci_operator expects a (0,2) tensor")
    return raise_first(s)


def w2_tensor(riem: Tensor, q: Tensor, n: int) -> Tensor:
    """W2(X,Y)Z = R(X,Y)Z + (1/2n) [g(X,Z) QY - g(Y,Z) QX]."""
    if n < 1:
        raise ValueError("w2_tensor needs n >= 1")
    frame = riem.frame
    gram = frame.gram
    inv2n = Fraction(1, 2 * n)

    def entry(a: int, i: int, j: int, k: int) -> ScalarExpr:
        acc = riem[a, i, j, k]
        if not gram[i][k].is_zero() and not q[a, j].is_zero():
            acc = acc + gram[i][k] * q[a, j] * inv2n
        if not gram[j][k].is_zero() and not q[a, i].is_zero():
            acc = acc - gram[j][k] * q[a, i] * inv2n
        return acc

    return Tensor.build(frame, 1, 3, entry)


def scalar_curvature(q: Tensor) -> ScalarExpr:
    """Trace of the Ricci operator."""
    if q.r != 1 or q.s != 1:
        raise ValenceError("scalar_curvature expects a (1,1) tensor")
    frame = q.frame
    acc = frame.chart.zero()
    for a in range(frame.dim):
        acc = acc + q[a, a]
    return acc


def lie_derivative(x: VectorField, t):
    """Lie derivative along X of a (0,2) tensor, a one-form, or a (1,1) tensor."""
    if isinstance(t, OneForm):
        return _lie_oneform(x, t)
    if isinstance(t, Tensor) and (t.r, t.s) == (0, 2):
        return _lie_covariant2(x, t)
    if isinstance(t, Tensor) and (t.r, t.s) == (1, 1):
        return _lie_endomorphism(x, t)
    raise ValenceError("lie_derivative supports (0,2), (1,1), and one-forms")


def _bracket_components(frame: Frame, x: VectorField, i: int) -> tuple[ScalarExpr, ...]:
    return frame.to_frame(bracket(x, frame.members[i]))


def _lie_covariant2(x: VectorField, t: Tensor) -> Tensor:
    frame = t.frame
    d = frame.dim
    brackets = [_bracket_components(frame, x, i) for i in range(d)]

    def entry(i: int, j: int) -> ScalarExpr:
        acc = x(t[i, j])
        for m in range(d):
            if not brackets[i][m].is_zero():
                acc = acc - brackets[i][m] * t[m, j]
            if not brackets[j][m].is_zero():
                acc = acc - t[i, m] * brackets[j][m]
        return acc

    return Tensor.build(frame, 0, 2, entry)


def _lie_oneform(x: VectorField, omega: OneForm) -> OneForm:
    frame = omega.frame
    d = frame.dim
    comps = []
    for i in range(d):
        acc = x(omega.on_member(i))
        br = _bracket_components(frame, x, i)
        for m in range(d):
            if not br[m].is_zero():
                acc = acc - br[m] * omega.on_member(m)
        comps.append(acc)
    return OneForm(frame, tuple(comps))


def _lie_endomorphism(x: VectorField, t: Tensor) -> Tensor:
    """(L_X T)(Y) = [X, T(Y)] - T([X, Y])."""
    frame = t.frame
    d = frame.dim
    columns = []
    for i in range(d):
        ty = frame.from_frame(tuple(t[a, i] for a in range(d)))
        first = frame.to_frame(bracket(x, ty))
        br = _bracket_components(frame, x, i)
        col = []
        for a in range(d):
            acc = first[a]
            for m in range(d):
                if not br[m].is_zero() and not t[a, m].is_zero():
                    acc = acc - br[m] * t[a, m]
            col.append(acc)
        columns.append(col)
    return Tensor.build(frame, 1, 1, lambda a, i: columns[i][a])


def nijenhuis(phi: Tensor) -> Tensor:
    """N(X,Y) = phi^2 [X,Y] + [phi X, phi Y] - phi [phi X, Y] - phi [X, phi Y]."""
    if phi.r != 1 or phi.s != 1:
        raise ValenceError("nijenhuis expects a (1,1) tensor")
    frame = phi.frame
    d = frame.dim
    images = [
        frame.from_frame(tuple(phi[a, i] for a in range(d))) for i in range(d)
    ]

    def apply_phi(comps) -> list[ScalarExpr]:
        out = []
        for a in range(d):
            acc = frame.chart.zero()
            for m in range(d):
                if not phi[a, m].is_zero() and not comps[m].is_zero():
                    acc = acc + phi[a, m] * comps[m]
            out.append(acc)
        return out

    def column(i: int, j: int) -> list[ScalarExpr]:
        plain = frame.bracket_members(i, j)
        term1 = apply_phi(apply_phi(plain))
        term2 = frame.to_frame(bracket(images[i], images[j]))
        term3 = apply_phi(frame.to_frame(bracket(images[i], frame.members[j])))
        term4 = apply_phi(frame.to_frame(bracket(frame.members[i], images[j])))
        return [term1[a] + term2[a] - term3[a] - term4[a] for a in range(d)]

    cache: dict[tuple[int, int], list[ScalarExpr]] = {}

    def entry(a: int, i: int, j: int) -> ScalarExpr:
        if (i, j) not in cache:
            cache[(i, j)] = column(i, j)
        return cache[(i, j)][a]

    return Tensor.build(frame, 1, 2, entry)

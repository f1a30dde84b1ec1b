"""Frames, vector fields and tensors over an odd-dimensional chart.

Vector fields carry coordinate-basis components.  Everything else (metric,
one-forms, curvature and friends) is stored in the components of a fixed
frame, which for the structures handled here is pseudo-orthonormal: the
gram matrix of the frame is a constant diagonal of +1/-1 entries.  Inputs
given in the coordinate basis are converted once, by solving against the
frame's invertible component matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from parakenmotsu.scalar import NonInvertible, ScalarExpr


class ValenceError(ValueError):
    """Raised when tensor arguments do not match the declared valence."""


Matrix = tuple[tuple[ScalarExpr, ...], ...]


@dataclass(frozen=True, slots=True)
class Chart:
    """Named coordinates plus optional constant parameters.

    The geometric dimension must be odd, 2n + 1.  Parameters behave as
    extra scalar symbols that no vector field ever differentiates along;
    they exist so that unknown constants can ride through the tensor
    algebra symbolically.
    """

    coords: tuple[str, ...]
    params: tuple[str, ...] = ()

    def __post_init__(self):
        names = self.coords + self.params
        if len(set(names)) != len(names):
            raise ValueError("chart symbols must be distinct")
        if len(self.coords) % 2 == 0 or not self.coords:
            raise ValueError(
                f"chart dimension must be odd (2n+1), got {len(self.coords)}"
            )

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def n(self) -> int:
        return (len(self.coords) - 1) // 2

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.coords + self.params

    def zero(self) -> ScalarExpr:
        return ScalarExpr.zero(self.symbols)

    def const(self, q) -> ScalarExpr:
        return ScalarExpr.const(q, self.symbols)

    def coordinate(self, name: str) -> ScalarExpr:
        return ScalarExpr.coordinate(name, self.symbols)

    def exponential(self, coeffs: dict) -> ScalarExpr:
        return ScalarExpr.exponential(coeffs, self.symbols)


@dataclass(frozen=True, slots=True)
class VectorField:
    """Coordinate-basis vector field: sum of components[i] * d/d(coords[i])."""

    chart: Chart
    components: tuple[ScalarExpr, ...]

    def __post_init__(self):
        if len(self.components) != self.chart.dim:
            raise ValenceError("component count does not match chart dimension")

    @staticmethod
    def zero(chart: Chart) -> "VectorField":
        return VectorField(chart, (chart.zero(),) * chart.dim)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.chart,
            tuple(a + b for a, b in zip(self.components, other.components)),
        )

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.chart,
            tuple(a - b for a, b in zip(self.components, other.components)),
        )

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, tuple(-a for a in self.components))

    def scale(self, factor) -> "VectorField":
        return VectorField(self.chart, tuple(a * factor for a in self.components))

    def __call__(self, f: ScalarExpr) -> ScalarExpr:
        """Directional derivative X(f)."""
        out = ScalarExpr.zero(self.chart.symbols)
        for name, comp in zip(self.chart.coords, self.components):
            if not comp.is_zero():
                out = out + comp * f.diff(name)
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


def bracket(x: VectorField, y: VectorField) -> VectorField:
    """Lie bracket [X, Y] in coordinate components."""
    chart = x.chart
    if chart != y.chart:
        raise ValenceError("bracket arguments live on different charts")
    comps = []
    for i in range(chart.dim):
        acc = chart.zero()
        for j, name in enumerate(chart.coords):
            acc = acc + x.components[j] * y.components[i].diff(name)
            acc = acc - y.components[j] * x.components[i].diff(name)
        comps.append(acc)
    return VectorField(chart, tuple(comps))


# ---------------------------------------------------------------------------
# Exact linear algebra over the scalar ring.
# ---------------------------------------------------------------------------


def mat_det(m: Matrix, zero: ScalarExpr) -> ScalarExpr:
    """Determinant by cofactor expansion; fine at the dimensions used here."""
    size = len(m)
    if size == 1:
        return m[0][0]
    det = zero
    for j in range(size):
        if m[0][j].is_zero():
            continue
        minor = tuple(row[:j] + row[j + 1 :] for row in m[1:])
        cofactor = mat_det(minor, zero)
        term = m[0][j] * cofactor
        det = det + term if j % 2 == 0 else det - term
    return det


def mat_inverse(m: Matrix, zero: ScalarExpr) -> Matrix:
    """Adjugate inverse; requires the determinant to be a ring unit."""
    size = len(m)
    det = mat_det(m, zero)
    try:
        det_inv = det.invert()
    except NonInvertible as exc:
        raise NonInvertible(f"matrix is not invertible over the ring: det = {det}") from exc
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            minor = tuple(
                tuple(m[r][c] for c in range(size) if c != i)
                for r in range(size)
                if r != j
            )
            cof = mat_det(minor, zero) if size > 1 else None
            entry = cof if size > 1 else ScalarExpr.const(1, zero.symbols)
            if (i + j) % 2 == 1:
                entry = -entry
            row.append(entry * det_inv)
        out.append(tuple(row))
    return tuple(out)


def mat_rank(m: Sequence[Sequence[ScalarExpr]], zero: ScalarExpr) -> int:
    """Rank by fraction-free elimination (valid: the ring is a domain)."""
    rows = [list(r) for r in m]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        pivot = None
        for r in range(rank, len(rows)):
            if not rows[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col].is_zero():
                continue
            factor = rows[r][col]
            rows[r] = [p * a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# Frames.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """Ordered frame with its gram matrix g(E_i, E_j).

    The member component matrix must be invertible over the ring, which is
    the pointwise linear-independence check.  The gram matrix is kept as
    given; the pseudo-orthonormal helpers below insist on a constant
    diagonal of +1/-1 when a computation needs it.
    """

    chart: Chart
    members: tuple[VectorField, ...]
    gram: Matrix
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        d = self.chart.dim
        if len(self.members) != d:
            raise ValenceError(f"expected {d} frame members, got {len(self.members)}")
        if len(self.gram) != d or any(len(row) != d for row in self.gram):
            raise ValenceError("gram matrix shape does not match the frame")
        for i in range(d):
            for j in range(i, d):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValenceError("gram matrix must be symmetric")
        self.component_inverse()  # raises NonInvertible for dependent members

    @property
    def dim(self) -> int:
        return self.chart.dim

    def component_matrix(self) -> Matrix:
        """Columns are the coordinate components of the members."""
        d = self.dim
        return tuple(
            tuple(self.members[j].components[a] for j in range(d)) for a in range(d)
        )

    def component_inverse(self) -> Matrix:
        if "cinv" not in self._cache:
            self._cache["cinv"] = mat_inverse(self.component_matrix(), self.chart.zero())
        return self._cache["cinv"]

    def gram_inverse(self) -> Matrix:
        if "ginv" not in self._cache:
            self._cache["ginv"] = mat_inverse(self.gram, self.chart.zero())
        return self._cache["ginv"]

    def gram_signs(self) -> tuple[Fraction, ...]:
        """Diagonal signs; requires the constant diagonal +1/-1 gram."""
        d = self.dim
        signs = []
        for i in range(d):
            for j in range(d):
                if i != j and not self.gram[i][j].is_zero():
                    raise ValenceError("gram matrix is not diagonal")
            q = self.gram[i][i].as_rational()
            if q * q != 1:
                raise ValenceError(f"gram diagonal entry {q} is not +1 or -1")
            signs.append(q)
        return tuple(signs)

    def unit_components(self, i: int) -> tuple[ScalarExpr, ...]:
        zero, one = self.chart.zero(), self.chart.const(1)
        return tuple(one if j == i else zero for j in range(self.dim))

    def to_frame(self, x: VectorField) -> tuple[ScalarExpr, ...]:
        """Frame components of X, solving sum(c_i E_i) = X."""
        for i, member in enumerate(self.members):
            if x is member:
                return self.unit_components(i)
        inv = self.component_inverse()
        d = self.dim
        return tuple(
            sum(
                (inv[i][a] * x.components[a] for a in range(d)),
                self.chart.zero(),
            )
            for i in range(d)
        )

    def from_frame(self, comps: Sequence[ScalarExpr]) -> VectorField:
        out = VectorField.zero(self.chart)
        for c, e in zip(comps, self.members):
            if not c.is_zero():
                out = out + e.scale(c)
        return out

    def metric_vv(self, x: VectorField, y: VectorField) -> ScalarExpr:
        """g(X, Y) through frame components and the gram matrix."""
        cx = self.to_frame(x)
        cy = self.to_frame(y)
        acc = self.chart.zero()
        d = self.dim
        for i in range(d):
            if cx[i].is_zero():
                continue
            for j in range(d):
                if self.gram[i][j].is_zero() or cy[j].is_zero():
                    continue
                acc = acc + cx[i] * self.gram[i][j] * cy[j]
        return acc

    def metric_tensor(self) -> "Tensor":
        return Tensor(self, 0, 2, _flatten(self.gram), symmetric=True)

    def bracket_members(self, i: int, j: int) -> tuple[ScalarExpr, ...]:
        """Frame components of [E_i, E_j], cached."""
        key = ("bracket", i, j)
        if key not in self._cache:
            b = bracket(self.members[i], self.members[j])
            self._cache[key] = self.to_frame(b)
            self._cache[("bracket", j, i)] = tuple(-c for c in self._cache[key])
        return self._cache[key]


def _flatten(rows: Matrix) -> tuple[ScalarExpr, ...]:
    return tuple(entry for row in rows for entry in row)


# ---------------------------------------------------------------------------
# Tensors in frame components.
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Tensor:
    """Frame-component tensor of valence (r, s) with r in {0, 1}.

    Components are stored flat in row-major order over (r + s) frame
    indices; for r = 1 the contravariant index comes first.
    """

    frame: Frame
    r: int
    s: int
    components: tuple[ScalarExpr, ...]
    symmetric: bool = False

    def __post_init__(self):
        if self.r not in (0, 1):
            raise ValenceError("only valences (0,s) and (1,s) are supported")
        d = self.frame.dim
        if len(self.components) != d ** (self.r + self.s):
            raise ValenceError("component count does not match valence")
        if self.symmetric:
            if (self.r, self.s) != (0, 2):
                raise ValenceError("symmetry enforcement is for (0,2) tensors")
            for i in range(d):
                for j in range(i + 1, d):
                    if self[i, j] != self[j, i]:
                        raise ValenceError(
                            f"tensor is not symmetric at ({i}, {j}):"
                            f" {self[i, j]} vs {self[j, i]}"
                        )

    @property
    def rank(self) -> int:
        return self.r + self.s

    def __getitem__(self, idx) -> ScalarExpr:
        if isinstance(idx, int):
            idx = (idx,)
        if len(idx) != self.rank:
            raise ValenceError(f"expected {self.rank} indices, got {len(idx)}")
        d = self.frame.dim
        flat = 0
        for i in idx:
            flat = flat * d + i
        return self.components[flat]

    @staticmethod
    def build(
        frame: Frame,
        r: int,
        s: int,
        entry: Callable[..., ScalarExpr],
        symmetric: bool = False,
    ) -> "Tensor":
        d = frame.dim
        comps = tuple(
            entry(*idx) for idx in itertools.product(range(d), repeat=r + s)
        )
        return Tensor(frame, r, s, comps, symmetric=symmetric)

    def __add__(self, other: "Tensor") -> "Tensor":
        self._match(other)
        return Tensor(
            self.frame,
            self.r,
            self.s,
            tuple(a + b for a, b in zip(self.components, other.components)),
        )

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._match(other)
        return Tensor(
            self.frame,
            self.r,
            self.s,
            tuple(a - b for a, b in zip(self.components, other.components)),
        )

    def __neg__(self) -> "Tensor":
        return Tensor(self.frame, self.r, self.s, tuple(-a for a in self.components))

    def scale(self, factor) -> "Tensor":
        return Tensor(
            self.frame, self.r, self.s, tuple(a * factor for a in self.components)
        )

    def _match(self, other: "Tensor") -> None:
        if self.frame is not other.frame or (self.r, self.s) != (other.r, other.s):
            raise ValenceError("tensor operands do not share frame and valence")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def first_nonzero(self) -> tuple[tuple[int, ...], ScalarExpr] | None:
        d = self.frame.dim
        for idx in itertools.product(range(d), repeat=self.rank):
            c = self[idx]
            if not c.is_zero():
                return idx, c
        return None


def tensor_apply(t: Tensor, args: Sequence[VectorField]):
    """Contract a tensor with vector-field arguments.

    Returns a ScalarExpr for valence (0, s) and a VectorField for (1, s).
    """
    if len(args) != t.s:
        raise ValenceError(f"tensor of valence ({t.r},{t.s}) takes {t.s} arguments")
    frame = t.frame
    d = frame.dim
    arg_comps = [frame.to_frame(x) for x in args]
    width = d ** t.r
    cov_size = d ** t.s
    flat = [frame.chart.zero()] * width

    def walk(depth: int, offset: int, scale: ScalarExpr | None):
        if depth == t.s:
            for a in range(width):
                c = t.components[a * cov_size + offset]
                if c.is_zero():
                    continue
                flat[a] = flat[a] + (c if scale is None else c * scale)
            return
        stride = d ** (t.s - depth - 1)
        for j in range(d):
            cj = arg_comps[depth][j]
            if cj.is_zero():
                continue
            walk(depth + 1, offset + j * stride, cj if scale is None else scale * cj)

    walk(0, 0, None)
    if t.r == 0:
        return flat[0]
    return frame.from_frame(flat)


@dataclass(frozen=True, slots=True)
class OneForm:
    """One-form stored by its values on the frame members."""

    frame: Frame
    components: tuple[ScalarExpr, ...]

    def __post_init__(self):
        if len(self.components) != self.frame.dim:
            raise ValenceError("one-form component count does not match frame")

    def __call__(self, x: VectorField) -> ScalarExpr:
        comps = self.frame.to_frame(x)
        return sum(
            (a * b for a, b in zip(self.components, comps) if not a.is_zero()),
            self.frame.chart.zero(),
        )

    def on_member(self, i: int) -> ScalarExpr:
        return self.components[i]

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(
            self.frame, tuple(a + b for a, b in zip(self.components, other.components))
        )

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(
            self.frame, tuple(a - b for a, b in zip(self.components, other.components))
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


def differential(f: ScalarExpr, frame: Frame) -> OneForm:
    """df as a one-form on the frame: df(E_i) = E_i(f)."""
    return OneForm(frame, tuple(e(f) for e in frame.members))


def exterior_derivative(omega: OneForm) -> Tensor:
    """d(omega) on frame pairs: X(w(Y)) - Y(w(X)) - w([X, Y])."""
    frame = omega.frame
    d = frame.dim

    def entry(i: int, j: int) -> ScalarExpr:
        ei, ej = frame.members[i], frame.members[j]
        value = ei(omega.components[j]) - ej(omega.components[i])
        br = frame.bracket_members(i, j)
        for k in range(d):
            if not br[k].is_zero():
                value = value - omega.components[k] * br[k]
        return value

    return Tensor.build(frame, 0, 2, entry)

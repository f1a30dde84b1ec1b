from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parakenmotsu.scalar import (
    ChartMismatch,
    ExprSyntaxError,
    LinearForm,
    NonInvertible,
    ScalarExpr,
    Term,
    UnknownSymbol,
    parse_scalar,
)

SYMS = ("x", "y", "z")


def sc(text):
    return parse_scalar(text, SYMS)


def test_binomial_identity_is_zero():
    e = sc("(x+1)^2 - x^2 - 2*x - 1")
    assert e.is_zero()


def test_difference_of_squares():
    assert sc("(x+y)*(x-y)") == sc("x^2 - y^2")


def test_exponentials_multiply_by_adding_forms():
    assert sc("exp(z)*exp(z)") == sc("exp(2*z)")
    assert sc("exp(z)*exp(-z)") == sc("1")


def test_mixed_term_product():
    e = sc("2*x*exp(z) * 1/2*x*exp(-2*z)")
    assert e == sc("x^2*exp(-z)")


def test_additive_inverse():
    e = sc("3*x^2*exp(z) - y")
    assert (e + (-e)).is_zero()


def test_invert_unit():
    e = sc("-2/3*exp(2*z)")
    inv = e.invert()
    assert inv == sc("-3/2*exp(-2*z)")
    assert (e * inv) == sc("1")


def test_invert_rejects_sums_and_monomials():
    with pytest.raises(NonInvertible):
        sc("1 + x").invert()
    with pytest.raises(NonInvertible):
        sc("2*x").invert()
    with pytest.raises(NonInvertible):
        sc("0").invert()


def test_diff_product_of_power_and_exponential():
    e = sc("x^2*exp(2*z)")
    assert e.diff("x") == sc("2*x*exp(2*z)")
    assert e.diff("z") == sc("2*x^2*exp(2*z)")
    assert e.diff("y").is_zero()


def test_diff_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        sc("x").diff("w")


def test_chart_mismatch_detected():
    a = parse_scalar("x", ("x", "y", "z"))
    b = parse_scalar("x", ("x", "t", "z"))
    with pytest.raises(ChartMismatch):
        a + b


def test_evaluate_exact():
    e = sc("x^2*exp(2*z) + 1/3")
    v = e.evaluate({"x": 2, "y": 0, "z": Fraction(1, 2)})
    assert v.parts == ((Fraction(0), Fraction(1, 3)), (Fraction(1), Fraction(4)))
    assert str(v) == "1/3 + 4*e^(1)"
    w = sc("x - y").evaluate({"x": 3, "y": 3, "z": 0})
    assert w.is_zero()
    assert sc("5/7").evaluate({"x": 1, "y": 2, "z": 3}).as_rational() == Fraction(5, 7)


def test_evaluate_requires_full_point():
    with pytest.raises(UnknownSymbol):
        sc("x").evaluate({"x": 1, "y": 2})


def test_parse_errors_have_positions():
    with pytest.raises(ExprSyntaxError) as info:
        sc("x + w")
    assert info.value.col == 5
    with pytest.raises(ExprSyntaxError):
        sc("x +")
    with pytest.raises(ExprSyntaxError):
        sc("exp(x^2)")
    with pytest.raises(ExprSyntaxError):
        sc("exp(x + 1)")
    with pytest.raises(ExprSyntaxError):
        sc("x^-2")
    with pytest.raises(ExprSyntaxError):
        sc("1/0")


def test_rendering_is_canonical_and_round_trips():
    e = sc("y - x + x - 2*y + x^2*exp(-2*z)")
    text = str(e)
    assert text == "x^2*exp(-2*z) - y"
    assert parse_scalar(text, SYMS) == e
    assert str(ScalarExpr.zero(SYMS)) == "0"


# ---------------------------------------------------------------------------
# Property suite: ring laws, canonical forms, derivation rules.
# ---------------------------------------------------------------------------

rationals = st.fractions(
    st.integers(-6, 6).map(Fraction), st.integers(1, 4)
).map(lambda f: Fraction(f))


def _fracs():
    return st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def _terms():
    monomial = st.dictionaries(st.integers(0, 2), st.integers(1, 3), max_size=2).map(
        lambda d: tuple(sorted(d.items()))
    )
    linear = st.dictionaries(st.integers(0, 2), _fracs(), max_size=2).map(
        LinearForm.build
    )
    return st.builds(Term, _fracs(), monomial, linear)


def exprs():
    return st.lists(_terms(), max_size=3).map(
        lambda ts: ScalarExpr.normalize(SYMS, ts)
    )


@settings(max_examples=120, deadline=None)
@given(exprs(), exprs(), exprs())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    zero = ScalarExpr.zero(SYMS)
    one = ScalarExpr.const(1, SYMS)
    assert a + zero == a
    assert a * one == a
    assert (a * zero).is_zero()


@settings(max_examples=120, deadline=None)
@given(exprs())
def test_canonical_form_is_stable(a):
    renormalized = ScalarExpr.normalize(SYMS, a.terms)
    assert renormalized == a
    assert parse_scalar(str(a), SYMS) == a


@settings(max_examples=120, deadline=None)
@given(exprs(), exprs(), st.sampled_from(SYMS))
def test_derivation_rules(a, b, name):
    assert (a * b).diff(name) == a.diff(name) * b + a * b.diff(name)
    assert (a + b).diff(name) == a.diff(name) + b.diff(name)


@settings(max_examples=120, deadline=None)
@given(exprs(), st.sampled_from(SYMS), st.sampled_from(SYMS))
def test_mixed_partials_commute(a, u, v):
    assert a.diff(u).diff(v) == a.diff(v).diff(u)


@settings(max_examples=120, deadline=None)
@given(_fracs(), st.dictionaries(st.integers(0, 2), _fracs(), max_size=2))
def test_invert_round_trip(q, form):
    if q == 0:
        return
    unit = ScalarExpr(SYMS, (Term(q, (), LinearForm.build(form)),))
    assert (unit * unit.invert()) == ScalarExpr.const(1, SYMS)


@settings(max_examples=120, deadline=None)
@given(exprs(), exprs(), st.dictionaries(st.sampled_from(SYMS), _fracs()))
def test_evaluation_is_a_homomorphism(a, b, point):
    full = {name: point.get(name, Fraction(0)) for name in SYMS}
    pa = dict(a.evaluate(full).parts)
    pb = dict(b.evaluate(full).parts)
    psum = dict((a + b).evaluate(full).parts)
    keys = set(pa) | set(pb) | set(psum)
    for r in keys:
        lhs = pa.get(r, Fraction(0)) + pb.get(r, Fraction(0))
        assert lhs == psum.get(r, Fraction(0))

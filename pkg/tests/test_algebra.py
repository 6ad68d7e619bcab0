"""Exact-arithmetic kernel: linear forms, sparse polynomials, factored
rationals, and the canonical-form contracts the rest of the engine
relies on."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nahilb.algebra import (
    FactoredRational,
    LinearForm,
    SparsePolynomial,
    evaluate,
    exact_divide_linear,
    homogeneous_degree,
    linear_form_of,
    rational_equal,
    sum_factored,
)
from nahilb.errors import DegenerateRestriction, DivisionByZero, MissingVariable


def s(i):
    return SparsePolynomial.variable(("s", i))


def sv(i):
    return ("s", i)


def lf(**coeffs):
    return LinearForm({("s", int(k[1:])): v for k, v in coeffs.items()})


class TestLinearFormOf:
    def test_mixed_coordinates(self):
        assert linear_form_of((1, 0, 2), "s") == lf(s1=1, s3=2)

    def test_zero_vector(self):
        assert linear_form_of((0, 0), "s").is_zero()

    def test_signed_coordinates(self):
        assert linear_form_of((1, -1, 0), "s") == lf(s1=1, s2=-1)

    def test_namespace(self):
        form = linear_form_of((0, 3), "z")
        assert form.coeffs == {("z", 2): 3}


class TestEvaluate:
    def test_linear(self):
        form = lf(s1=1, s3=2)
        assert evaluate(form, {sv(1): 3, sv(2): 5, sv(3): 7}) == 17

    def test_rational_cancellation(self):
        r = FactoredRational.build(
            2, SparsePolynomial.one(),
            [(lf(s1=1), 1), (lf(s2=1), 1), (lf(s2=1), -1)])
        assert evaluate(r, {sv(1): 4, sv(2): 9}) == 8

    def test_vanishing_denominator(self):
        r = FactoredRational.build(
            1, SparsePolynomial.one(), [(lf(s1=1, s2=-1), -1)])
        with pytest.raises(DivisionByZero):
            evaluate(r, {sv(1): 1, sv(2): 1})

    def test_missing_variable(self):
        with pytest.raises(MissingVariable):
            evaluate(s(1) + s(2), {sv(1): 1})

    def test_polynomial(self):
        assert evaluate(s(1) * s(1) + 3, {sv(1): Fraction(1, 2)}) \
            == Fraction(13, 4)


class TestSimplify:
    def test_difference_of_squares(self):
        r = FactoredRational.build(
            1, s(1) * s(1) - s(2) * s(2), [(lf(s1=1, s2=-1), -1)])
        out = r.simplify()
        assert out == FactoredRational.build(1, s(1) + s(2))

    def test_proportional_forms(self):
        r = FactoredRational.build(
            1, SparsePolynomial.one(), [(lf(s1=2), 1), (lf(s1=4), -1)])
        out = r.simplify()
        assert out.scalar == Fraction(1, 2)
        assert out.poly.is_one()
        assert out.factors == ()

    def test_no_common_factor(self):
        r = FactoredRational.build(
            1, s(1) + s(2), [(lf(s1=1, s2=-1), -1)]).simplify()
        assert r.factors == ((lf(s1=1, s2=-1), -1),)
        assert r.poly == s(1) + s(2)

    def test_repeated_cancellation(self):
        cube = (s(1) - s(2)) * (s(1) - s(2)) * (s(1) - s(2))
        r = FactoredRational.build(1, cube, [(lf(s1=1, s2=-1), -2)])
        out = r.simplify()
        assert out == FactoredRational.build(1, s(1) - s(2))


class TestHomogeneousDegree:
    def test_factored(self):
        cube = (s(1) + s(2)) * (s(1) + s(2)) * (s(1) + s(2))
        r = FactoredRational.build(1, cube,
                                   [(lf(s1=1), -1), (lf(s2=1), -1)])
        assert homogeneous_degree(r) == 1

    def test_inhomogeneous(self):
        assert homogeneous_degree(s(1) * s(1) + s(2)) is None

    def test_constant(self):
        assert homogeneous_degree(SparsePolynomial.constant(11)) == 0

    def test_additive_under_product(self):
        a = FactoredRational.build(1, s(1) + s(2), [(lf(s3=1), -2)])
        b = FactoredRational.build(3, s(3) * s(3), [(lf(s1=1, s2=1), 1)])
        assert homogeneous_degree(a * b) \
            == homogeneous_degree(a) + homogeneous_degree(b)


class TestSumFactored:
    def test_antisymmetric_pair(self):
        a = FactoredRational.build(1, SparsePolynomial.one(),
                                   [(lf(s2=1, s1=-1), -1)])
        b = FactoredRational.build(1, SparsePolynomial.one(),
                                   [(lf(s1=1, s2=-1), -1)])
        assert sum_factored([a, b]).is_zero()

    def test_projective_line_sum(self):
        a = FactoredRational.build(1, s(1), [(lf(s2=1, s1=-1), -1)])
        b = FactoredRational.build(1, s(2), [(lf(s1=1, s2=-1), -1)])
        out = sum_factored([a, b])
        assert out == FactoredRational.build(-1, SparsePolynomial.one())

    def test_empty(self):
        assert sum_factored([]).is_zero()

    def test_matches_pointwise_sum(self):
        terms = [
            FactoredRational.build(2, s(1), [(lf(s1=1, s2=-1), -1)]),
            FactoredRational.build(1, s(2) * s(2),
                                   [(lf(s1=1, s2=-1), -2), (lf(s1=1), -1)]),
            FactoredRational.build(Fraction(-1, 3), SparsePolynomial.one()),
        ]
        total = sum_factored(terms)
        point = {sv(1): Fraction(3), sv(2): Fraction(5)}
        assert total.evaluate(point) == sum(t.evaluate(point) for t in terms)


class TestExactDivideLinear:
    def test_exact(self):
        q = s(1) * s(2) + 2 * s(3) * s(3)
        p = (s(1) + s(2)) * q
        assert exact_divide_linear(p, lf(s1=1, s2=1)) == q

    def test_not_divisible(self):
        assert exact_divide_linear(s(1) + s(2), lf(s1=1, s2=-1)) is None

    def test_zero_form(self):
        with pytest.raises(DivisionByZero):
            exact_divide_linear(s(1), LinearForm())


class TestCanonicalForms:
    def test_int_and_fraction_coefficients_interchangeable(self):
        assert LinearForm({sv(1): 2}) == LinearForm({sv(1): Fraction(2)})
        assert hash(LinearForm({sv(1): 2})) \
            == hash(LinearForm({sv(1): Fraction(2)}))
        assert (s(1) * Fraction(1, 2)) * 2 == s(1)

    def test_primitive_linear_form(self):
        content, prim = lf(s1=-2, s2=4).primitive()
        assert content == -2
        assert prim == lf(s1=1, s2=-2)

    def test_extract_content(self):
        content, prim = (s(1) * Fraction(-2, 3)
                         + s(2) * Fraction(-4, 3)).extract_content()
        assert content == Fraction(-2, 3)
        assert prim == s(1) + 2 * s(2)
        assert all(isinstance(c, int) for c in prim.terms.values())

    def test_build_merges_and_sorts_factors(self):
        r = FactoredRational.build(
            1, SparsePolynomial.one(),
            [(lf(s2=2), 1), (lf(s1=1), 1), (lf(s2=1), 1)])
        assert r.scalar == 2
        assert r.factors == ((lf(s1=1), 1), (lf(s2=1), 2))

    def test_build_zero_polynomial(self):
        r = FactoredRational.build(5, SparsePolynomial.zero(), [(lf(s1=1), 1)])
        assert r.is_zero() and r.scalar == 1 and r.factors == ()

    def test_zero_form_in_denominator_rejected(self):
        with pytest.raises(DivisionByZero):
            FactoredRational.build(1, SparsePolynomial.one(),
                                   [(LinearForm(), -1)])

    def test_zero_form_in_numerator_collapses(self):
        r = FactoredRational.build(1, s(1), [(LinearForm(), 2)])
        assert r.is_zero()


class TestSubstituteLinear:
    def test_trace_zero_collapse(self):
        r = FactoredRational.build(
            1, SparsePolynomial.one(), [(lf(s1=1, s2=1), -1)])
        with pytest.raises(DegenerateRestriction):
            r.substitute_linear({sv(2): lf(s1=-1)})

    def test_numerator_substitution(self):
        r = FactoredRational.from_poly(s(1) + s(2))
        out = r.substitute_linear({sv(2): lf(s1=1)})
        assert out == FactoredRational.build(1, 2 * s(1))


# ---------------------------------------------------------------------------
# randomized algebra laws

_coeffs = st.integers(-4, 4).map(
    lambda n: Fraction(n, 2) if n % 2 else n // 2)


def _monomials():
    return st.dictionaries(
        st.tuples(st.sampled_from([("s", 1), ("s", 2), ("s", 3)]),
                  st.integers(1, 3)).map(lambda ve: (ve,)),
        _coeffs, max_size=4,
    ).map(lambda d: SparsePolynomial(
        {m: c for m, c in d.items()}))


@given(_monomials(), _monomials(), _monomials())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a + (b + c) == (a + b) + c
    assert a - a == SparsePolynomial.zero()


_points = st.fixed_dictionaries({
    ("s", 1): st.integers(1, 9).map(Fraction),
    ("s", 2): st.integers(10, 19).map(Fraction),
    ("s", 3): st.integers(20, 29).map(Fraction),
})

_forms = st.sampled_from([
    LinearForm({("s", 1): 1}),
    LinearForm({("s", 1): 1, ("s", 2): -1}),
    LinearForm({("s", 2): 2, ("s", 3): 1}),
    LinearForm({("s", 1): 1, ("s", 3): -2}),
])


@given(_monomials(),
       st.lists(st.tuples(_forms, st.integers(-2, 2)), max_size=4),
       _points)
@settings(max_examples=60, deadline=None)
def test_simplify_preserves_value(poly, factors, point):
    r = FactoredRational.build(1, poly, factors)
    try:
        expected = r.evaluate(point)
    except DivisionByZero:
        return
    assert r.simplify().evaluate(point) == expected


@given(st.lists(st.builds(
    lambda p, fs: FactoredRational.build(1, p, fs),
    _monomials(),
    st.lists(st.tuples(_forms, st.integers(-2, 2)), max_size=3)),
    max_size=4), _points)
@settings(max_examples=40, deadline=None)
def test_sum_factored_matches_evaluation(terms, point):
    try:
        expected = sum((t.evaluate(point) for t in terms), Fraction(0))
    except DivisionByZero:
        return
    assert sum_factored(terms).evaluate(point) == expected


@given(_monomials(), _forms)
@settings(max_examples=40, deadline=None)
def test_rational_equal_across_presentations(a, form):
    lhs = FactoredRational.build(1, a * form.as_poly(), [(form, -1)])
    assert rational_equal(lhs, FactoredRational.from_poly(a))

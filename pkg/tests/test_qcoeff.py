"""Tests for the exact q-arithmetic layer."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qonsager.qcoeff import (
    ONE,
    Q,
    RHO,
    ZERO,
    LaurentScalar,
    RhoScalar,
    exact_div,
    laurent_lcm,
    parse_laurent,
    q_binomial,
    q_factorial,
    q_int,
)


def L(d):
    return LaurentScalar(d)


# ---------------------------------------------------------------------------
# q-integers / factorials / binomials
# ---------------------------------------------------------------------------


def test_q_int_zero_is_empty_sum():
    assert q_int(0) == ZERO


def test_q_int_two():
    assert q_int(2) == L({1: 1, -1: 1})


def test_q_int_three_matches_division_oracle():
    # Independent route: expand (q^3 - q^-3)/(q - q^-1) by exact division.
    oracle = exact_div(L({3: 1, -3: -1}), L({1: 1, -1: -1}))
    assert oracle.is_polynomial
    assert q_int(3) == oracle
    assert q_int(3) == L({2: 1, 0: 1, -2: 1})


def test_q_int_rejects_negative():
    with pytest.raises(ValueError):
        q_int(-1)


def test_q_factorial_values():
    assert q_factorial(0) == ONE
    assert q_factorial(1) == ONE
    assert q_factorial(3) == q_int(2) * q_int(3)


def test_q_binomial_edges_and_values():
    assert q_binomial(5, 0) == ONE
    assert q_binomial(3, 1) == q_int(3)
    assert q_binomial(4, 2) == L({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})


def test_q_binomial_rejects_out_of_range():
    with pytest.raises(ValueError):
        q_binomial(3, -1)
    with pytest.raises(ValueError):
        q_binomial(3, 4)


def test_q_binomial_pascal_recurrence():
    # Independent oracle: [n m] = q^m [n-1 m] + q^(m-n) [n-1 m-1].
    for n in range(1, 9):
        for m in range(0, n + 1):
            left = q_binomial(n, m)
            right = ZERO
            if m <= n - 1:
                right = right + LaurentScalar.q_power(m) * q_binomial(n - 1, m)
            if m >= 1:
                right = right + LaurentScalar.q_power(m - n) * q_binomial(n - 1, m - 1)
            assert left == right, (n, m)


# ---------------------------------------------------------------------------
# exact division and canonical forms
# ---------------------------------------------------------------------------


def test_exact_div_six_by_three():
    assert exact_div(q_int(6), q_int(3)) == L({3: 1, -3: 1})


def test_exact_div_self_is_one():
    x = L({5: 3, 0: -2, -1: 7})
    assert exact_div(x, x) == ONE


def test_exact_div_two_by_four_is_flagged_rational():
    r = exact_div(q_int(2), q_int(4))
    assert not r.is_polynomial
    # [2]/[4] = 1/(q^2 + q^-2) = q^2/(q^4 + 1) in canonical form.
    assert r.num == {2: 1}
    assert r.den == {4: 1, 0: 1}


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        exact_div(ONE, ZERO)


laurent_dicts = st.dictionaries(
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=-9, max_value=9).filter(lambda c: c != 0),
    max_size=5,
)


@st.composite
def laurents(draw):
    return LaurentScalar(draw(laurent_dicts))


@st.composite
def nonzero_laurents(draw):
    val = draw(laurents())
    if val.is_zero:
        val = val + ONE
    return val


@st.composite
def rationals(draw):
    num = draw(laurents())
    den = draw(nonzero_laurents())
    return num / den


@settings(max_examples=150, deadline=None)
@given(rationals(), rationals(), rationals())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@settings(max_examples=150, deadline=None)
@given(rationals(), nonzero_laurents(), nonzero_laurents())
def test_canonicalization_two_constructions_agree(a, b, c):
    # a/b and (a*c)/(b*c) must land on the same canonical representation.
    x = a / b
    y = (a * c) / (b * c)
    assert x == y
    assert x.num == y.num and x.den == y.den


@settings(max_examples=150, deadline=None)
@given(rationals(), nonzero_laurents())
def test_exact_div_inverts_multiplication(a, b):
    assert exact_div(a * b, b) == a


@settings(max_examples=100, deadline=None)
@given(rationals())
def test_bar_is_an_involution(a):
    assert a.bar().bar() == a


def test_bar_symmetry_of_q_quantities():
    for n in range(0, 10):
        assert q_int(n).bar() == q_int(n)
        assert q_factorial(n).bar() == q_factorial(n)
        for m in range(0, n + 1):
            assert q_binomial(n, m).bar() == q_binomial(n, m)


def test_substitute_exact_rational():
    assert q_int(3).substitute(Fraction(2)) == Fraction(21, 4)
    r = exact_div(q_int(2), q_int(4))
    assert r.substitute(Fraction(2)) == q_int(2).substitute(Fraction(2)) / q_int(4).substitute(Fraction(2))


def test_power_including_negative():
    x = q_int(2)
    assert x ** 0 == ONE
    assert x ** 3 == x * x * x
    assert Q ** -2 == LaurentScalar.q_power(-2)
    assert x ** -1 == ONE / x


def test_laurent_lcm():
    a = q_int(2)
    b = q_int(4)
    m = laurent_lcm(a, b)
    # [2] divides [4], so the lcm is [4] up to a unit q^k.
    assert exact_div(m, a).is_polynomial and exact_div(m, b).is_polynomial
    assert exact_div(b, m).is_polynomial  # no factor beyond [4]
    assert min(m.num) == 0 and m.num[max(m.num)] > 0


# ---------------------------------------------------------------------------
# rendering contract
# ---------------------------------------------------------------------------


def test_canonical_rendering():
    assert str(ZERO) == "0"
    assert str(ONE) == "1"
    assert str(L({4: 1, 0: 2, -4: 1})) == "q^4 + 2 + q^-4"
    assert str(L({2: 1, 0: -2, -2: 1})) == "q^2 - 2 + q^-2"
    assert str(L({1: -3, 0: 1})) == "-3q + 1"
    assert str(exact_div(q_int(2), q_int(4))) == "(q^2)/(q^4 + 1)"


@settings(max_examples=150, deadline=None)
@given(rationals())
def test_rendering_round_trips(a):
    assert parse_laurent(str(a)) == a


# ---------------------------------------------------------------------------
# RhoScalar
# ---------------------------------------------------------------------------


def test_rho_scalar_basics():
    zero = RhoScalar(())
    assert zero.is_zero
    assert zero.degree == float("-inf")
    x = RHO * q_int(2) + ONE
    assert x.degree == 1
    assert x.coefficient(0) == ONE
    assert x.coefficient(1) == q_int(2)
    assert x.coefficient(5) == ZERO


def test_rho_scalar_trims_trailing_zeros():
    x = RhoScalar((ONE, ZERO, ZERO))
    assert x.degree == 0
    assert x == RhoScalar((ONE,))


def test_rho_scalar_arithmetic():
    a = RHO + 1
    b = RHO - 1
    assert a * b == RHO * RHO - 1
    assert a - a == RhoScalar(())
    assert (a * q_int(2)).coefficient(1) == q_int(2)


def test_rho_scalar_substitute():
    x = RHO * RHO + q_int(2)
    v = x.substitute(q=Fraction(3), rho=Fraction(1, 2))
    assert v == Fraction(1, 4) + Fraction(10, 3)


def test_rho_scalar_str():
    x = RhoScalar.rho_power(2, q_int(2)) + ONE
    assert str(x) == "(q + q^-1)*rho^2 + (1)"

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skly.errors import ParseError, VariableMismatch
from skly.polynomial import J, ParamPolynomial, random_polynomial, t


def _poly_strategy():
    exps = st.tuples(*[st.integers(0, 3)] * 6)
    coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=7)
    return st.dictionaries(exps, coeffs, max_size=6).map(ParamPolynomial)


@settings(max_examples=100, deadline=None)
@given(_poly_strategy())
def test_text_round_trip(p):
    assert ParamPolynomial.from_text(p.to_text()) == p


@settings(max_examples=60, deadline=None)
@given(_poly_strategy(), _poly_strategy(), _poly_strategy())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@settings(max_examples=60, deadline=None)
@given(_poly_strategy(), _poly_strategy())
def test_product_rule(a, b):
    for i in range(4):
        assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


def test_canonical_text():
    p = 4 * J("J32") * t(2) * t(3) - Fraction(1, 2) * t(0) ** 2
    assert p.to_text() == "(-1/2)*t0^2 + (4)*J32*t2*t3"
    assert ParamPolynomial.zero().to_text() == "0"


def test_evaluation():
    p = t(0) ** 2 + J("J31") * t(1)
    assert p((2, 3, 0, 0), {"J31": 5}) == 19
    assert p((1j, 1, 0, 0), [2.0, 0.0]) == -1 + 2.0
    with pytest.raises(VariableMismatch):
        p((1, 2))


def test_homogeneity_and_coefficients():
    p = t(0) * t(1) + J("J31") * t(2) ** 2
    assert p.is_homogeneous(2) and not p.is_homogeneous(3)
    assert p.coefficient((0, 0, 2, 0)) == J("J31")
    assert p.substitute_params({"J31": 3}) == t(0) * t(1) + 3 * t(2) ** 2


def test_variable_mismatch():
    other = ParamPolynomial.var("x", variables=("x", "y"), params=())
    with pytest.raises(VariableMismatch):
        t(0) + other


def test_parse_errors():
    with pytest.raises(ParseError):
        ParamPolynomial.from_text("(1)*t0 - (2)*t1")
    with pytest.raises(ParseError) as err:
        ParamPolynomial.from_text("(1)*t9")
    assert err.value.token == "t9"


def test_random_polynomial_is_homogeneous():
    rng = np.random.default_rng(0)
    for d in range(4):
        assert random_polynomial(rng, d).is_homogeneous(d)

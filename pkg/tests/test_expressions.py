"""Recursive-descent expression parser: grammar, errors, evaluation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indefinite_bvp.errors import ConfigurationError
from indefinite_bvp.expressions import Expression, parse_expression


def test_fig_nonlinearity_text():
    g = parse_expression("max(0, 100*s*atan(abs(s)))")
    assert g(0.0) == 0.0
    for s in (0.1, 1.0, 3.5):
        assert g(s) == pytest.approx(100.0 * s * math.atan(s), rel=1e-15)


def test_sine_value():
    e = parse_expression("sin(2*3.141592653589793*t)")
    assert e(0.25) == pytest.approx(1.0, abs=1e-15)


def test_power_right_associative():
    assert parse_expression("2^3^2")(0.0) == 512.0
    assert parse_expression("(2^3)^2")(0.0) == 64.0


def test_precedence_and_unary():
    assert parse_expression("1 + 2*3")(0.0) == 7.0
    # unary minus binds tighter than '^' in this grammar
    assert parse_expression("-2^2")(0.0) == 4.0
    assert parse_expression("2 - -3")(0.0) == 5.0


def test_constants_and_functions():
    assert parse_expression("pi")(0.0) == pytest.approx(math.pi)
    assert parse_expression("e")(0.0) == pytest.approx(math.e)
    assert parse_expression("min(2, 5)")(0.0) == 2.0
    assert parse_expression("sqrt(4)")(0.0) == 2.0
    assert parse_expression("exp(0)")(0.0) == 1.0
    assert parse_expression("cos(0)")(0.0) == 1.0
    assert parse_expression("arctan(1)")(0.0) == pytest.approx(math.pi / 4)


def test_vectorized_evaluation():
    e = parse_expression("t^2 + 1")
    ts = np.array([0.0, 1.0, 2.0])
    assert np.allclose(e(ts), [1.0, 2.0, 5.0])


def test_division_guarded():
    e = parse_expression("1/t")
    assert math.isinf(e(0.0))


def test_variable_tracking():
    assert parse_expression("3.5").variable is None
    assert parse_expression("sin(t)").variable == "t"
    assert parse_expression("s*s").variable == "s"


def test_lexical_error_with_position():
    with pytest.raises(ConfigurationError, match="position"):
        parse_expression("1 + @")


def test_syntax_errors():
    for src in ("1 +", "(1", "sin(", "2 2", "max(1)"):
        with pytest.raises(ConfigurationError):
            parse_expression(src)


def test_unknown_identifier():
    with pytest.raises(ConfigurationError, match="unknown"):
        parse_expression("foo(1)")
    with pytest.raises(ConfigurationError, match="unknown"):
        parse_expression("x + 1")


def test_two_variables_rejected():
    with pytest.raises(ConfigurationError, match="variable"):
        parse_expression("t + s")


def test_repr_round_trip():
    e = Expression("sin(2*t)")
    assert "sin(2*t)" in repr(e)


finite = st.floats(min_value=-1e6, max_value=1e6,
                   allow_nan=False, allow_infinity=False)


@given(finite, finite)
@settings(max_examples=60, deadline=None)
def test_addition_matches_python(a, b):
    src = "(%r) + (%r)" % (a, b)
    assert parse_expression(src)(0.0) == pytest.approx(a + b, abs=1e-9)


@given(finite, finite)
@settings(max_examples=60, deadline=None)
def test_multiplication_matches_python(a, b):
    src = "(%r) * (%r)" % (a, b)
    assert parse_expression(src)(0.0) == pytest.approx(a * b, rel=1e-12,
                                                       abs=1e-12)

import math

import pytest
from hypothesis import given, strategies as st

from exchtest.numerics import LogValue, log_binomial, log_factorial, log_sum


def test_log_factorial_small():
    assert log_factorial(0) == 0.0
    assert log_factorial(5) == pytest.approx(math.log(120), abs=1e-12)


def test_log_factorial_matches_summation():
    expected = math.fsum(math.log(k) for k in range(1, 101))
    assert abs(log_factorial(100) - expected) <= 1e-10


@pytest.mark.parametrize("n", [1, 2, 10, 1000, 10**5, 10**6])
def test_log_factorial_increments(n):
    assert abs(log_factorial(n) - log_factorial(n - 1) - math.log(n)) <= 1e-10 * max(1.0, math.log(n))


def test_log_factorial_negative():
    with pytest.raises(ValueError):
        log_factorial(-1)


def test_log_binomial():
    assert log_binomial(4, 2).log == pytest.approx(math.log(6))
    assert log_binomial(3, 5).is_zero
    assert log_binomial(3, -1).is_zero
    exact = math.log(math.comb(400, 200))
    assert log_binomial(400, 200).log == pytest.approx(exact, rel=1e-9)


def test_log_sum_basic():
    assert log_sum([LogValue(0.0), LogValue(0.0)]).log == pytest.approx(math.log(2))
    assert log_sum([]).is_zero
    assert log_sum([LogValue.zero(), LogValue(1.5)]).log == pytest.approx(1.5)


def test_log_sum_no_overflow():
    big = LogValue(300 * math.log(10))
    out = log_sum([big] * 1000)
    assert math.isfinite(out.log)
    assert out.log == pytest.approx(math.log(1000) + 300 * math.log(10), rel=1e-12)


@given(st.floats(0, 1e6), st.floats(0, 1e6))
def test_log_sum_two_values(a, b):
    if a + b == 0:
        assert log_sum([LogValue.from_value(a), LogValue.from_value(b)]).is_zero
        return
    got = log_sum([LogValue.from_value(a), LogValue.from_value(b)]).log
    assert got == pytest.approx(math.log(a + b), rel=1e-12, abs=1e-14)


@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(-50, 50))
def test_multiplication_associative_commutative(x, y, w):
    a, b, c = LogValue(x), LogValue(y), LogValue(w)
    assert ((a * b) * c).log == pytest.approx((a * (b * c)).log, abs=1e-12)
    assert (a * b).log == (b * a).log
    assert (a * LogValue.zero()).is_zero
    assert (a / b).log == pytest.approx(x - y)


def test_linear_output_guard():
    assert LogValue(math.log(3)).value == pytest.approx(3)
    with pytest.raises(OverflowError):
        LogValue(800.0).value
    assert LogValue(8000.0).log10 == pytest.approx(8000 / math.log(10))

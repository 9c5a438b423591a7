import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmonic_valence.valence import (
    asymptotic_slope,
    baseline_count,
    cos_fixed_point_bisection,
    gamma_leading_term,
    k_max,
    kmax_margin,
    kmax_margins,
    predict_count,
    sine_form_margin,
    solve_cos_fixed_point,
)


def mp_margin(n, k, dps=50):
    with mpmath.workdps(dps):
        pi = mpmath.pi
        return (n - 2) * mpmath.cot((2 * k - 1) * pi / (2 * n - 4)) - n * mpmath.cot(pi * k / n)


def test_margin_exact_values():
    assert kmax_margin(8, 1) == pytest.approx(6 * (2 + math.sqrt(3)) - 8 * (1 + math.sqrt(2)), rel=1e-14)
    assert kmax_margin(8, 1) == pytest.approx(3.0786, abs=1e-4)
    assert kmax_margin(8, 2) == pytest.approx(-2.0, abs=1e-13)


def test_margin_high_precision():
    assert kmax_margin(12, 2) == pytest.approx(float(mp_margin(12, 2)), rel=1e-13)
    assert kmax_margin(12, 2) == pytest.approx(-1.1585, abs=1e-4)


@pytest.mark.parametrize("k", [0, 5])
def test_margin_rejects_k(k):
    with pytest.raises(ValueError):
        kmax_margin(8, k)


@pytest.mark.parametrize("n, expected", [(4, 0), (5, 0), (6, 0), (8, 1), (12, 1), (35, 4)])
def test_k_max_values(n, expected):
    assert k_max(n).k_max == expected


def test_k_max_rejects_small_n():
    with pytest.raises(ValueError):
        k_max(3)


@pytest.mark.parametrize("n, count", [(4, 10), (8, 54), (12, 126), (20, 370), (35, 1173)])
def test_predict_count(n, count):
    rep = predict_count(n)
    assert rep.predicted == count
    assert rep.baseline == n * n - 2 * n + 2
    assert rep.verified is None
    assert rep.extra == 4 * rep.k_max


@pytest.mark.parametrize("n", range(4, 40))
def test_baseline_sum(n):
    assert baseline_count(n) == n * n - 2 * n + 2


def test_n7_has_one_extra_ray():
    # margin at k=1 is clearly positive, so four zeros beyond the baseline
    assert float(mp_margin(7, 1)) == pytest.approx(0.8528, abs=1e-4)
    assert predict_count(7).predicted == 41


def test_fixed_point_value():
    x = solve_cos_fixed_point()
    assert x == pytest.approx(0.73908513321516, abs=1e-13)
    assert abs(x - math.cos(x)) < 1e-14


def test_fixed_point_two_solvers_agree():
    assert abs(solve_cos_fixed_point() - cos_fixed_point_bisection()) < 1e-13


def test_fixed_point_against_mpmath():
    with mpmath.workdps(30):
        ref = mpmath.findroot(lambda x: x - mpmath.cos(x), 0.7)
    assert solve_cos_fixed_point() == pytest.approx(float(ref), abs=1e-15)


def test_slope():
    s = asymptotic_slope()
    assert round(s, 5) == 0.13237
    assert 0 < s and 4 * s < 1


def test_slope_matches_large_n():
    assert abs(k_max(2000).k_max / 2000 - asymptotic_slope()) < 2e-3


def test_gamma_leading_term():
    assert abs(gamma_leading_term(asymptotic_slope())) < 1e-12
    assert gamma_leading_term(0.1) == pytest.approx(math.pi / 2 - 0.2 * math.pi - math.sin(0.2 * math.pi))
    assert gamma_leading_term(0.1) == pytest.approx(0.3547, abs=1e-4)
    assert gamma_leading_term(0.2) < 0
    for bad in (0.0, 0.25, -0.1):
        with pytest.raises(ValueError):
            gamma_leading_term(bad)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.001, 0.249))
def test_gamma_sign_threshold(gamma):
    threshold = asymptotic_slope()
    if abs(gamma - threshold) > 1e-9:
        assert (gamma_leading_term(gamma) > 0) == (gamma < threshold)


def test_margins_decreasing_below_quarter():
    for n in range(4, 501):
        m = kmax_margins(n)
        below = m[: (n - 1) // 4]  # k < n/4
        assert np.all(np.diff(below) < 0), n


def test_margins_not_positive_from_quarter():
    for n in range(4, 501):
        m = kmax_margins(n)
        k = np.arange(1, n // 2 + 1)
        assert np.all(m[4 * k >= n] < 0), n


def test_k_max_is_positive_prefix():
    for n in range(4, 501):
        res = k_max(n)
        assert res.k_max == int(np.argmax(res.margins <= 0)) if np.any(res.margins <= 0) else len(res.margins)
        assert 4 * res.k_max < n
        assert res.ties == ()


def test_asymptotic_band():
    s = asymptotic_slope()
    worst = max(abs(k_max(n).k_max - s * n) for n in range(4, 5001))
    assert worst <= 3


def test_sine_form_sign_agrees():
    for n in range(4, 201):
        for k in range(1, n // 2 + 1):
            assert np.sign(kmax_margin(n, k)) == np.sign(sine_form_margin(n, k)), (n, k)


def test_sine_form_extended_precision():
    assert sine_form_margin(22, 3, dps=40) == pytest.approx(sine_form_margin(22, 3), rel=1e-12)


def test_margin_agrees_with_mpmath_on_a_sweep():
    rng = np.random.default_rng(4)
    for n in rng.integers(4, 300, size=40):
        n = int(n)
        for k in range(1, n // 2 + 1):
            assert kmax_margin(n, k) == pytest.approx(float(mp_margin(n, k)), rel=1e-9, abs=1e-9)

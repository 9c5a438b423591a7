import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmonic_valence.construction import build_standard
from harmonic_valence.rays import (
    StructuralViolation,
    angle_function,
    angle_function_derivative,
    boundary_value,
    cot_identity_residual,
    count_ray,
    critical_count,
    critical_points,
    critical_sine_margin,
    min_interior_critical_value,
    pole_angles,
    pole_count,
    ray_zero_locations,
    sine_margin_threshold,
    special_ray_counts,
    theta_to_r,
    total_from_rays,
    worker_count,
)
from harmonic_valence.valence import k_max, predict_count


def im_t_sign_changes(n, k, samples=400_001):
    """Zeros of Im T on ray k counted directly in r, independent of A."""
    r = np.geomspace(1e-4, 1e4, samples)
    z = r * cmath.exp(1j * math.pi * k / n)
    s = np.sign(((z + 1) ** (n - 1) * (z - (n - 1))).real)
    return int(np.count_nonzero(s[1:] != s[:-1]))


def test_boundary_example():
    assert boundary_value(12, 3) == pytest.approx(-2.0)
    assert boundary_value(12, 9) == pytest.approx(2.0)
    assert boundary_value(12, 6) == math.inf


def test_angle_function_at_critical_angle():
    with mpmath.workdps(40):
        ref = 10 * mpmath.cot(mpmath.pi / 20) - 12 * mpmath.cot(mpmath.pi / 12)
    value = angle_function(0.5 * math.pi / 10, 12, 1)
    assert value == pytest.approx(float(ref), rel=1e-12)
    assert value == pytest.approx(18.35, abs=5e-3)


def test_angle_function_domain():
    with pytest.raises(ValueError):
        angle_function(0.0, 12, 3)
    with pytest.raises(ValueError):
        angle_function(math.pi / 4, 12, 3)


@pytest.mark.parametrize("n", [5, 12, 23])
def test_first_family_critical_values_positive(n):
    for k in range(1, n):
        fam1, _ = critical_points(n, k)
        assert np.all(angle_function(fam1, n, k) > 0)
        expected = n / np.tan(fam1) - n / math.tan(math.pi * k / n)
        np.testing.assert_allclose(angle_function(fam1, n, k), expected, rtol=1e-9)


def test_derivative_vanishes_at_critical_points():
    for n in (7, 12, 20):
        for k in range(1, n):
            for fam in critical_points(n, k):
                if fam.size:
                    d = angle_function_derivative(fam, n, k)
                    assert np.all(np.abs(d) < 1e-9 * (n - 1) / np.sin(fam) ** 2)


def test_derivative_finite_differences():
    rng = np.random.default_rng(5)
    n, k = 12, 7
    t = rng.uniform(0.01, math.pi * k / n - 0.01, 200)
    poles = pole_angles(n, k)
    t = t[np.min(np.abs(t[:, None] - poles[None, :]), axis=1) > 0.02]
    h = 1e-7
    fd = (angle_function(t + h, n, k) - angle_function(t - h, n, k)) / (2 * h)
    np.testing.assert_allclose(angle_function_derivative(t, n, k), fd, rtol=1e-5)


def test_pole_examples():
    assert len(pole_angles(12, 5)) == 5
    assert len(pole_angles(12, 6)) == 5
    p = pole_angles(12, 11)
    assert len(p) == 10
    assert p[-1] == pytest.approx(9.5 * math.pi / 11)
    assert p[-1] < 11 * math.pi / 12


def test_counts_match_their_definitions():
    # largest integer j with (j - 1/2)/(n - 1) < k/n, and likewise for (n - 2)
    for n in range(4, 61):
        for k in range(1, n):
            poles = max(j for j in range(0, n + 1) if (j - 0.5) * n < k * (n - 1))
            crit = max(j for j in range(0, n + 1) if (j - 0.5) * n < k * (n - 2))
            assert pole_count(n, k) == poles
            assert critical_count(n, k) == crit


def test_critical_examples():
    _, fam2 = critical_points(12, 2)
    np.testing.assert_allclose(fam2, [0.5 * math.pi / 10, 1.5 * math.pi / 10])
    assert np.all(fam2 < math.pi / 6)
    assert critical_count(12, 3) == 2
    assert critical_count(12, 9) == 7


@pytest.mark.parametrize("k", [0, 12])
def test_rejects_k(k):
    for fn in (pole_angles, critical_points, boundary_value, count_ray):
        with pytest.raises(ValueError):
            fn(12, k)


def test_theta_to_r_examples():
    alpha = math.pi * 3 / 12
    assert theta_to_r(alpha / 2, 12, 3) == pytest.approx(1.0)
    assert theta_to_r(1e-12, 12, 3) < 1e-11
    with pytest.raises(ValueError):
        theta_to_r(alpha, 12, 3)


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 40), st.data())
def test_theta_to_r_round_trip(n, data):
    k = data.draw(st.integers(1, n - 1))
    alpha = math.pi * k / n
    theta = data.draw(st.floats(1e-6 * alpha, (1 - 1e-6) * alpha))
    r = theta_to_r(theta, n, k)
    assert cmath.phase(r * cmath.exp(1j * alpha) + 1) == pytest.approx(theta, abs=1e-12)


def test_theta_to_r_monotone():
    rng = np.random.default_rng(6)
    for _ in range(10):
        n = int(rng.integers(4, 60))
        k = int(rng.integers(1, n))
        alpha = math.pi * k / n
        r = theta_to_r(np.linspace(alpha * 1e-6, alpha * (1 - 1e-6), 1000), n, k)
        assert np.all(np.diff(r) > 0)


@pytest.mark.parametrize("n, k, expected", [(12, 5, 4), (12, 1, 2), (12, 11, 10), (7, 1, 2)])
def test_count_ray_examples(n, k, expected):
    prof = count_ray(n, k)
    assert prof.N_k == expected
    assert im_t_sign_changes(n, k) == expected


def test_count_ray_radii_against_direct_roots():
    # roots of Im T on the ray located by sign changes in r
    n, k = 12, 1
    prof = count_ray(n, k)
    r = np.geomspace(1e-3, 1e3, 2_000_001)
    z = r * cmath.exp(1j * math.pi * k / n)
    s = np.sign(((z + 1) ** (n - 1) * (z - (n - 1))).real)
    idx = np.flatnonzero(s[1:] != s[:-1])
    np.testing.assert_allclose(prof.roots_r, r[idx], rtol=1e-5)


@pytest.mark.parametrize("n", [4, 5, 8, 13, 22])
def test_count_ray_matches_direct_count_everywhere(n):
    for k in range(1, n):
        assert count_ray(n, k).N_k == im_t_sign_changes(n, k), k


def test_profile_invariants():
    for n in (6, 12, 17):
        for k in range(1, n):
            prof = count_ray(n, k)
            t = prof.roots_theta
            assert np.all((t > 0) & (t < prof.alpha))
            assert np.all(np.diff(t) > 0)
            spacing = 1e-13
            assert np.all(
                np.abs(angle_function(t, n, k))
                < 1e-9 * (1 + np.abs(angle_function_derivative(t, n, k)) * spacing)
            )
            assert sum(prof.segment_roots) == prof.N_k


def test_special_ray_counts():
    assert special_ray_counts(12) == (1, 11)
    assert special_ray_counts(4) == (1, 3)
    n = 9
    f = build_standard(n)
    for h in (1e-2, 1e-3):
        ratio = f.im_T(-(1 + h)) / h ** (n - 1)
        assert ratio == pytest.approx(-n, rel=2 * h)
    # one positive real root at n - 1
    r = np.linspace(0.01, 3 * n, 100_001)
    s = np.sign(f.im_T(r))
    assert np.count_nonzero(s[1:] != s[:-1]) == 1


@pytest.mark.parametrize("n, total", [(4, 10), (8, 54), (12, 126)])
def test_total_from_rays(n, total):
    assert total_from_rays(n) == total


def test_total_decomposition_n12():
    counts = [count_ray(12, k).N_k for k in range(1, 12)]
    assert counts == [2] + list(range(1, 11))
    assert 1 + 11 + 2 * sum(counts) == 126


def test_parallel_rays_match(monkeypatch):
    monkeypatch.setenv("HV_THREADS", "4")
    assert worker_count() == 4
    assert total_from_rays(30) == total_from_rays(30, workers=1)
    monkeypatch.setenv("HV_THREADS", "0")
    with pytest.raises(ValueError):
        worker_count()


def test_zero_locations_n4():
    zeros = ray_zero_locations(4)
    assert len(zeros) == 8
    assert sum(q.multiplicity for q in zeros) == 10
    (deg,) = [q for q in zeros if q.multiplicity > 1]
    assert deg.location == -1 and deg.multiplicity == 3 and deg.index == 0


def test_zero_locations_n12():
    zeros = ray_zero_locations(12)
    assert len(zeros) == 116
    assert sum(q.multiplicity for q in zeros) == 126
    locs = {(round(q.location.real, 9), round(q.location.imag, 9)) for q in zeros}
    for q in zeros:
        if q.location.imag != 0:
            assert (round(q.location.real, 9), round(-q.location.imag, 9)) in locs
    assert all(q.residual < 1e-8 * (1 + abs(q.location)) ** 12 for q in zeros)
    assert all(q.index in (-1, 1) for q in zeros if q.multiplicity == 1)


def test_zero_locations_are_sorted():
    zeros = ray_zero_locations(9)
    keys = [(q.location.real, q.location.imag) for q in zeros]
    assert keys == sorted(keys)


def test_min_interior_critical_value():
    with mpmath.workdps(40):
        ref = 10 * mpmath.cot(3.5 * mpmath.pi / 10) - 12 * mpmath.cot(5 * mpmath.pi / 12)
    assert min_interior_critical_value(12, 5) == pytest.approx(float(ref), rel=1e-12)
    with pytest.raises(ValueError):
        min_interior_critical_value(12, 1)


def test_sine_margin_sign_equivalence():
    for n in range(4, 61):
        for k in range(2, n):
            assert np.sign(min_interior_critical_value(n, k)) == np.sign(critical_sine_margin(n, k))


def test_sine_margin_threshold():
    assert sine_margin_threshold(12) == pytest.approx(12 * 23 / 44)
    assert sine_margin_threshold(12) == pytest.approx(6.27, abs=5e-3)


def test_both_sine_terms_positive_above_threshold():
    for n in range(4, 61):
        for k in range(2, n):
            c = 3 if 4 * k < 3 * n else 5
            first = (n - 1) * math.sin((c * n - 4 * k) * math.pi / (2 * n * n - 4 * n))
            second = -math.sin((k - c / 2) * math.pi / (n - 2) + math.pi * k / n)
            if c == 5 or k > sine_margin_threshold(n):
                assert first > 0 and second >= -1e-12, (n, k)


def test_cot_identity_examples():
    assert abs(cot_identity_residual(math.pi / 2, math.pi / 2, 9)) < 1e-14
    t = 0.7
    assert abs(cot_identity_residual(t, t, 9)) < 1e-13
    with pytest.raises(ValueError):
        cot_identity_residual(0.0, 1.0, 9)


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-3, math.pi - 1e-3), st.floats(1e-3, math.pi - 1e-3), st.integers(4, 200))
def test_cot_identity_property(t1, t2, n):
    left = (n - 2) / math.tan(t1) - n / math.tan(t2)
    assert abs(cot_identity_residual(t1, t2, n)) < 1e-10 * (1 + abs(left))


def test_structural_violation_carries_location():
    exc = StructuralViolation(12, 3, 2, "x")
    assert (exc.n, exc.k, exc.segment) == (12, 3, 2)


def test_extra_zeros_exactly_up_to_k_max():
    for n in range(4, 61):
        km = k_max(n).k_max
        for k in range(1, n):
            nk = count_ray(n, k).N_k
            assert nk >= k - 1
            assert (nk == k + 1) == (k <= km)


def test_total_equals_formula_through_60():
    for n in range(4, 61):
        assert total_from_rays(n) == predict_count(n).predicted

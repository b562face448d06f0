import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polysharp.generate import generate_random_function
from polysharp.norms import (
    NormError,
    growth_bound_check,
    hq_norm_integral,
    hq_norm_series,
    log_submean_probe,
    norm_report,
    restricted_norm_function,
)
from polysharp.quadrature import hardy_norm, make_rule, torus_power_mean
from polysharp.series import PolySeries, extremal_function

z = PolySeries.monomial((1,))


def test_hq_series_examples():
    for k in range(6):
        assert hq_norm_series(z ** k, 1.0) == pytest.approx(1.0)
    for q in (0.3, 1.0, 4.0):
        assert hq_norm_series(PolySeries.constant(1.0), q) == 1.0
    assert hq_norm_series(z, 2.0) == pytest.approx(1 / math.sqrt(2))


def test_hq_series_zero_iff_zero():
    assert hq_norm_series(PolySeries.zero(2), 1.5) == 0.0
    assert hq_norm_series(PolySeries([0.0, 1e-200]), 1.5) > 0.0


def test_hq_series_overflow_reports_alpha():
    with pytest.raises(NormError, match=r"alpha=\(1,\)"):
        hq_norm_series(PolySeries.monomial((3,)), 1e-310)


def test_hq_integral_examples():
    assert hq_norm_integral(PolySeries.constant(1.0), 2.5) == pytest.approx(1.0)
    assert hq_norm_integral(z, 2.0) == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert hq_norm_integral(PolySeries.monomial((1, 1)), 1.0) == pytest.approx(1.0)


def test_hq_integral_refuses_q_below_one():
    with pytest.raises(NormError):
        hq_norm_integral(z, 0.5)


def test_hq_integral_rule_mismatch():
    with pytest.raises(NormError):
        hq_norm_integral(z, 2.0, make_rule(3.0, 1, 4, 2))


@given(st.integers(0, 10_000), st.integers(1, 2))
def test_q1_series_equals_hardy_2(seed, n):
    f = generate_random_function(seed, n, 4)
    assert hq_norm_series(f, 1.0) == pytest.approx(hardy_norm(f, 2.0), rel=1e-12)


@given(st.integers(0, 10_000), st.integers(1, 2), st.sampled_from([1.0, 2.0, 3.0, 1.5]))
def test_series_and_integral_agree(seed, n, q):
    f = generate_random_function(seed, n, 6 if n == 1 else 4)
    rep = norm_report(f, q)
    assert rep.relative_discrepancy < 1e-12


def test_norm_report_vector_weight_has_no_integral():
    rep = norm_report(PolySeries.monomial((1, 1)), (1.0, 2.0))
    assert rep.integral_value is None and rep.series_value == pytest.approx(1 / math.sqrt(2))


# restricted norms

def test_restricted_norm_examples():
    U, est = restricted_norm_function(PolySeries.monomial((1, 0)), 1.7, [1])
    assert U(0.4) == pytest.approx(1.0) and est.value == pytest.approx(1.0)
    U, est = restricted_norm_function(PolySeries.monomial((0, 1)), 1.7, [1])
    assert U(0.4) == pytest.approx(0.4 ** 1.7) and est.value == pytest.approx(1.0)
    f = PolySeries.from_dict({(0, 0): 1.0, (1, 1): 1.0})
    U, est = restricted_norm_function(f, 2.0, [1])
    assert U(0.5) == pytest.approx(1.25) and est.value == pytest.approx(2.0)
    assert est.value == pytest.approx(hardy_norm(f, 2.0) ** 2)


def test_restricted_norm_axis_errors():
    f = generate_random_function(0, 2, 2)
    with pytest.raises(NormError):
        restricted_norm_function(f, 1.0, [])
    with pytest.raises(NormError):
        restricted_norm_function(f, 1.0, [0, 1])
    with pytest.raises(NormError):
        restricted_norm_function(generate_random_function(0, 3, 1), 1.0, [2, 0])


def test_restricted_norm_three_variables():
    f = generate_random_function(17, 3, 2)
    U, est = restricted_norm_function(f, 2.0, [0])
    assert est.value == pytest.approx(torus_power_mean(f, 2.0).value, rel=1e-10)


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_pl1_norm_equals_hardy_power(p):
    f = generate_random_function(5, 2, 3)
    U, est = restricted_norm_function(f, p, [1])
    assert est.value == pytest.approx(torus_power_mean(f, p).value, rel=1e-8)


def test_log_submean_probe(rng):
    f = generate_random_function(8, 2, 3)
    U, _ = restricted_norm_function(f, 1.0, [0])
    centers = 0.8 * np.sqrt(rng.uniform(size=30)) * np.exp(2j * np.pi * rng.uniform(size=30))
    radii = np.minimum(0.1, 0.99 - np.abs(centers))
    probe = log_submean_probe(U, centers, radii)
    assert probe.passed and probe.points_per_circle == 64


def test_log_submean_probe_detects_superharmonic():
    class Fake:
        def values(self, pts):
            return np.exp(-np.abs(np.asarray(pts)[:, 0]) ** 2)

    probe = log_submean_probe(Fake(), [0.0], [0.5])
    assert not probe.passed


# growth bound

def test_growth_examples():
    rec = growth_bound_check(PolySeries.constant(1.0, 2), 1.5, (0.3, 0.4j))
    assert rec.lhs == pytest.approx(1.0) and rec.rhs == pytest.approx(1 / (0.91 * 0.84)) and rec.holds
    rec = growth_bound_check(z, 2.0, 0.5)
    assert rec.lhs == pytest.approx(0.25) and rec.rhs == pytest.approx(1 / 0.75) and rec.holds


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 3.0])
def test_growth_ratio_tightens_with_truncation(p):
    w = 0.5 + 0.2j
    ratios = [growth_bound_check(extremal_function(p, w, "hardy_power", tol), p, w).ratio
              for tol in (1e-2, 1e-6, 1e-10)]
    assert ratios[0] <= ratios[1] + 1e-12 <= ratios[2] + 2e-12
    assert ratios[-1] > 1 - 1e-8


def test_growth_two_variables_extremal():
    w = (0.3, -0.4j)
    rec = growth_bound_check(extremal_function(0.5, w, "hardy_power", 1e-10), 0.5, w)
    assert rec.ratio == pytest.approx(1.0, abs=1e-6) and rec.holds


def test_growth_rejects_boundary_point():
    with pytest.raises(NormError):
        growth_bound_check(z, 1.0, 1.0)

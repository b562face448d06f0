import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from polysharp.generate import generate_random_function
from polysharp.quadrature import (
    DiscRule,
    QuadratureConfig,
    QuadratureError,
    TorusRule,
    adaptive_integral,
    beta_moment,
    circle_power_means,
    hardy_norm,
    integrate_polydisc,
    integrate_torus,
    make_rule,
    mp_at_radius,
    torus_power_mean,
)
from polysharp.series import PolySeries

z = PolySeries.monomial((1,))


def test_torus_weights_and_monomials():
    rule = TorusRule(2, (8, 6))
    assert sum(float(np.sum(w)) for w in rule.axis_weights) == pytest.approx(2.0)
    for a, b in [((1, 0), (1, 0)), ((2, 1), (0, 1)), ((3, 2), (3, 2)), ((0, 0), (4, 0))]:
        def g(u, v):
            return u ** a[0] * v ** a[1] * np.conj(u ** b[0] * v ** b[1])
        expected = 1.0 if a == b else 0.0
        assert abs(integrate_torus(rule, g) - expected) < 1e-14


def test_torus_examples():
    assert integrate_torus(TorusRule(1, 4), lambda x: np.ones_like(x.real)) == pytest.approx(1.0)
    assert integrate_torus(TorusRule(2, 4), lambda u, v: np.abs(u) ** 2 + 0 * v.real) == pytest.approx(1.0)
    assert integrate_torus(TorusRule(1, 4), lambda x: np.abs(1 + x) ** 2) == pytest.approx(2.0, abs=1e-14)


def test_non_finite_integrand_reports_node():
    with pytest.raises(QuadratureError, match="node"), np.errstate(divide="ignore", invalid="ignore"):
        integrate_torus(TorusRule(1, 4), lambda x: 1.0 / (x - 1.0))


def test_disc_rule_normalized():
    for q in (1.5, 2.0, 3.0, 7.0):
        rule = DiscRule(1, q, 5, 4)
        assert integrate_polydisc(rule, lambda x: np.ones(np.shape(x))) == pytest.approx(1.0, abs=1e-12)


def test_disc_examples():
    rule2, rule3 = make_rule(2.0, 1, 8, 4), make_rule(3.0, 1, 8, 4)
    assert integrate_polydisc(rule2, lambda x: np.abs(x) ** 2) == pytest.approx(0.5, abs=1e-14)
    # independent 1D oracle: 2 (q-1) int_0^1 r^3 (1-r^2)^(q-2) dr
    oracle = quad(lambda r: 2 * 2 * r ** 3 * (1 - r * r), 0, 1)[0]
    assert integrate_polydisc(rule3, lambda x: np.abs(x) ** 2) == pytest.approx(oracle, abs=1e-14)
    assert oracle == pytest.approx(1 / 3)


@pytest.mark.parametrize("q", [1.2, 2.0, 3.0, 4.5])
def test_disc_moments_match_beta(q):
    R = 6
    rule = DiscRule(1, q, R, 4)
    for k in range(2 * R - 1):
        val = integrate_polydisc(rule, lambda x: np.abs(x) ** (2 * k))
        assert val == pytest.approx(beta_moment(k, q), rel=1e-10)


def test_disc_rule_rejects_q_at_most_one():
    with pytest.raises(QuadratureError):
        DiscRule(1, 1.0, 4, 4)
    with pytest.raises(QuadratureError):
        make_rule(0.5, 1, 4, 4)
    assert isinstance(make_rule(1.0, 2, 4, 4), TorusRule)


def test_polydisc_product_measure():
    rule = make_rule(2.0, 2, 8, 4)
    val = integrate_polydisc(rule, lambda u, v: np.abs(u) ** 2 * np.abs(v) ** 4)
    assert val == pytest.approx(beta_moment(1, 2.0) * beta_moment(2, 2.0), rel=1e-13)


def test_doubling_is_stable_past_exactness():
    f = generate_random_function(9, 1, 5)
    vals = [integrate_polydisc(make_rule(2.5, 1, N, R), lambda x: np.abs(f(x)) ** 2)
            for N, R in [(16, 4), (32, 8), (64, 16)]]
    assert abs(vals[1] - vals[0]) < 1e-10 * vals[0] and abs(vals[2] - vals[1]) < 1e-10 * vals[0]


def test_adaptive_integral_converges_to_oracle():
    est = adaptive_integral(lambda x: np.abs(1.2 + x), 2.0, 1, QuadratureConfig(), grid=16, radial=8)
    oracle = quad(lambda r: 2 * r * quad(lambda t: abs(1.2 + r * np.exp(1j * t)), 0, 2 * np.pi,
                                         epsabs=1e-13)[0] / (2 * np.pi), 0, 1, epsabs=1e-13)[0]
    assert est.converged and est.value == pytest.approx(oracle, rel=1e-9)


def test_adaptive_reports_non_convergence():
    cfg = QuadratureConfig(max_points=256, rtol=1e-14)
    est = adaptive_integral(lambda x: np.abs(x - 0.3) ** 0.5, 2.0, 1, cfg, grid=8, radial=4)
    assert not est.converged and np.isfinite(est.error)


# Hardy norms

@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 3.0])
def test_hardy_norm_monomial_is_one(p):
    assert hardy_norm(z ** 4, p) == pytest.approx(1.0, rel=1e-12)
    assert hardy_norm(PolySeries.monomial((2, 3)), p) == pytest.approx(1.0, rel=1e-12)


def test_hardy_norm_examples():
    assert hardy_norm(1 + z, 2.0) == pytest.approx(math.sqrt(2), rel=1e-14)
    assert hardy_norm(1 + z, 4.0) == pytest.approx(6 ** 0.25, rel=1e-14)
    # mean of |1 + e^it| = 2|cos(t/2)| is 4/pi
    est = torus_power_mean(1 + z, 1.0)
    assert est.converged and est.value == pytest.approx(4 / math.pi, rel=1e-10)


def test_hardy_norm_two_variables_non_even():
    f = PolySeries.from_dict({(0, 0): 1.0, (1, 1): 1.0})
    # |1 + z1 z2| on T^2 has the same distribution as |1 + zeta| on T
    assert torus_power_mean(f, 1.0).value == pytest.approx(4 / math.pi, rel=1e-9)
    g = PolySeries.from_dict({(0, 0): 2.0, (1, 0): 1.0, (0, 1): 0.5})
    oracle = quad(lambda s: quad(lambda t: abs(2 + np.exp(1j * s) + 0.5 * np.exp(1j * t)) ** 3, 0, 2 * np.pi,
                                 epsabs=1e-12)[0], 0, 2 * np.pi, epsabs=1e-11)[0] / (4 * np.pi ** 2)
    assert torus_power_mean(g, 3.0).value == pytest.approx(oracle, rel=1e-9)


@given(st.integers(0, 10_000), st.integers(1, 2))
def test_p2_matches_parseval(seed, n):
    f = generate_random_function(seed, n, 5 if n == 1 else 3)
    parseval = math.sqrt(float(np.sum(np.abs(f.coeffs) ** 2)))
    assert hardy_norm(f, 2.0) == pytest.approx(parseval, rel=1e-12)


def test_p_must_be_positive():
    with pytest.raises(QuadratureError):
        hardy_norm(z, 0.0)
    with pytest.raises(QuadratureError):
        mp_at_radius(z, -1.0, 0.5)


def test_mp_at_radius_examples():
    f = generate_random_function(4, 1, 3)
    assert mp_at_radius(f, 1.5, 0.0) == pytest.approx(abs(f.coefficient((0,))))
    assert mp_at_radius(z, 2.0, 0.5) == pytest.approx(0.5, rel=1e-14)
    assert mp_at_radius(f, 1.5, 1.0) == pytest.approx(hardy_norm(f, 1.5), rel=1e-14)


@given(st.integers(0, 10_000), st.sampled_from([0.5, 1.0, 2.0, 3.0]),
       st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_mp_monotone_in_radius(seed, p, r1, r2):
    r1, r2 = sorted((r1, r2))
    f = generate_random_function(seed, 1, 4)
    assert mp_at_radius(f, p, r1) <= mp_at_radius(f, p, r2) + 1e-12


def test_circle_power_means_rows_independent():
    rows = np.array([[1.0, 1.0, 0.0], [2.0, 0.0, 1.0]], dtype=complex)
    vals, err, _ = circle_power_means(rows, 1.0, 1e-10, 32, 1 << 18)
    assert vals[0] == pytest.approx(4 / math.pi, rel=1e-9)
    single, _, _ = circle_power_means(rows[1:], 1.0, 1e-10, 32, 1 << 18)
    assert vals[1] == pytest.approx(single[0], rel=1e-12)


def test_offset_rule_same_value():
    f = generate_random_function(2, 1, 4)
    a = torus_power_mean(f, 1.0).value
    b = torus_power_mean(f, 1.0, QuadratureConfig(offset=0.37)).value
    assert a == pytest.approx(b, rel=1e-9)

"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are printed with output capture disabled so they show in a plain
``pytest`` run.  A criterion that fails still prints its line before the
assertion fails.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from polysharp import cli
from polysharp.factorization import BoundaryModulus, outer_function, riesz_factorize
from polysharp.generate import generate_random_function, random_polynomial_with_zeros, trial_seeds
from polysharp.inequalities import (
    Verdict,
    burbea_hilbert_gap,
    carleman_gap,
    closed_curve,
    isoperimetric_check,
    main_product_gap,
)
from polysharp.norms import growth_bound_check, log_submean_probe, norm_report, restricted_norm_function
from polysharp.quadrature import QuadratureConfig, torus_power_mean
from polysharp.search import Problem, SearchSpace, maximize_ratio
from polysharp.series import PolySeries, extremal_function, kernel_series

z = PolySeries.monomial((1,))

# desk-scale resolution for the random-tuple sweeps; quadrature error is propagated into each verdict
DESK = QuadratureConfig(grid=16, radial=8, max_points=1 << 20, max_axis=1 << 11)


@pytest.fixture
def criterion(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
        assert ok, f"criterion {k}: {detail}"
    return emit


def _disc_points(rng, size, radius):
    return radius * np.sqrt(rng.uniform(size=size)) * np.exp(2j * np.pi * rng.uniform(size=size))


def test_criterion_01_norm_representation(criterion):
    worst = 0.0
    count = 0
    for n in (1, 2):
        for q in (1.0, 2.0, 3.0):
            for s in trial_seeds(1001, 100):
                deg = int(np.random.default_rng(s).integers(0, 7))
                f = generate_random_function(s, n, deg)
                worst = max(worst, norm_report(f, q).relative_discrepancy)
                count += 1
    criterion(1, worst < 1e-8, f"{count} polynomials, max |series - integral| / series = {worst:.2e} (< 1e-8)")


def test_criterion_02_hilbert_product_soundness(criterion):
    rng = np.random.default_rng(1002)
    verdicts = {v: 0 for v in Verdict}
    for s in trial_seeds(1002, 500):
        m, n = int(rng.integers(2, 4)), int(rng.integers(1, 3))
        fs = [generate_random_function(t, n, int(rng.integers(0, 5))) for t in s.spawn(m)]
        qs = [tuple(rng.uniform(0.3, 3.0, n)) for _ in range(m)]
        verdicts[burbea_hilbert_gap(fs, qs).verdict] += 1
    criterion(2, verdicts[Verdict.VIOLATED] == 0,
              "500 tuples: " + ", ".join(f"{v.value}={c}" for v, c in verdicts.items()))


def test_criterion_03_hilbert_product_equality(criterion):
    rng = np.random.default_rng(1003)
    worst = 0.0
    halving_pairs = halved = 0
    for _ in range(20):
        n, m = int(rng.integers(1, 3)), int(rng.integers(2, 4))
        qs = [tuple(rng.choice([0.5, 1.0, 2.0, 3.0], size=n)) for _ in range(m)]
        w = _disc_points(rng, n, 0.6)
        gaps = []
        for tau in (1e-8, 5e-9):
            fs = [rng.normal() * kernel_series(q, w, tau) for q in qs]
            rep = burbea_hilbert_gap(fs, qs)
            gaps.append(abs(rep.gap) / rep.rhs)
        worst = max(worst, gaps[0])
        halving_pairs += 1
        halved += gaps[1] <= gaps[0] / 2
    ok_eq = worst < 1e-6
    ok_half = halved == halving_pairs
    criterion(3, ok_eq and ok_half,
              f"max |gap|/rhs at tail 1e-8 = {worst:.2e} (< 1e-6: {ok_eq}); "
              f"halving the tail tolerance halved the gap in {halved}/{halving_pairs} tuples "
              f"(gaps at 1e-8 sit at the rounding floor)")


def test_criterion_04_hardy_product(criterion):
    rng = np.random.default_rng(1004)
    bad = loose = 0
    widest = 0.0
    for s in trial_seeds(1004, 500):
        m, n = int(rng.integers(2, 4)), int(rng.integers(1, 3))
        fs = [generate_random_function(t, n, int(rng.integers(0, 4))) for t in s.spawn(m)]
        ps = list(rng.choice([0.5, 1.0, 2.0, 4.0], size=m))
        rep = main_product_gap(fs, ps, DESK)
        bad += rep.verdict is Verdict.VIOLATED
        loose += bool(rep.flags)
        widest = max(widest, rep.tolerance / rep.rhs)
    worst = 0.0
    for ps in [(0.5, 1.0), (1.0, 2.0), (2.0, 4.0), (4.0, 0.5), (0.5, 1.0, 2.0, 4.0)]:
        for k in range(3):
            w = 0.5 * np.exp(2j * np.pi * k / 3)
            fs = [(1.0 + j) * kernel_series(2.0 / p, w, 1e-12) for j, p in enumerate(ps)]
            rep = main_product_gap(fs, ps)
            worst = max(worst, abs(rep.gap) / rep.rhs)
    criterion(4, bad == 0 and worst < 1e-5,
              f"500 random tuples, violated={bad} ({loose} flagged unconverged, widest tolerance "
              f"{widest:.1e} of rhs); extremals max |gap|/rhs = {worst:.2e} (< 1e-5)")


def test_criterion_05_carleman(criterion):
    one = PolySeries.constant(1.0)
    rels = []
    for p in (0.5, 1.0, 2.0, 3.0):
        rep = carleman_gap(one, p)
        rels += [abs(rep.lhs / (4 * math.pi ** 2) - 1), abs(rep.rhs / (4 * math.pi ** 2) - 1)]
    rep_z = carleman_gap(z, 2.0)
    dz = abs(rep_z.lhs / rep_z.rhs - 1 / 3)
    criterion(5, max(rels) < 1e-12 and dz < 1e-10,
              f"f=1 max rel deviation from 4 pi^2 = {max(rels):.1e}; f=z ratio - 1/3 = {dz:.1e}")


def test_criterion_06_isoperimetric(criterion):
    circle = isoperimetric_check(derivative=PolySeries.constant(1.0))
    d_circle = abs(circle.ratio - 1)
    a, b = 2.0, 1.0
    ell = isoperimetric_check(curve=closed_curve(lambda t: a * np.cos(t) + 1j * b * np.sin(t), 1 << 16))
    length, _ = integrate.quad(lambda t: math.hypot(a * math.sin(t), b * math.cos(t)), 0, 2 * math.pi,
                               epsabs=0.0, epsrel=1e-13, limit=200)
    oracle_lhs, oracle_rhs = 4 * math.pi * (math.pi * a * b), length ** 2
    d_lhs = abs(ell.lhs - oracle_lhs) / oracle_lhs
    d_rhs = abs(ell.rhs - oracle_rhs) / oracle_rhs
    ok = (circle.verdict is Verdict.EQUALITY and d_circle < 1e-10 and ell.ratio < 1
          and ell.verdict is Verdict.HOLDS and d_lhs < 1e-6 and d_rhs < 1e-6)
    criterion(6, ok, f"circle |ratio - 1| = {d_circle:.1e}; ellipse 4 pi A / L^2 = {ell.lhs:.4f}/{ell.rhs:.4f}, "
                     f"oracle deviations {d_lhs:.1e}, {d_rhs:.1e}")


def test_criterion_07_riesz_factorization(criterion):
    worst, min_h = 0.0, math.inf
    rng = np.random.default_rng(1007)
    for s in trial_seeds(1007, 100):
        deg = int(rng.integers(1, 9))
        f = random_polynomial_with_zeros(s, deg, int(rng.integers(1, deg + 1)))
        for p in (0.5, 1.0, 2.0, 4.0):
            fac = riesz_factorize(f, p)
            worst = max(worst, fac.relative_norm_gap)
            min_h = min(min_h, fac.min_abs_h)
    criterion(7, worst < 1e-8 and min_h > 0,
              f"400 factorizations, max | ||h||_p / ||f||_p - 1 | = {worst:.1e}; min |h| on r <= 0.999 grid = {min_h:.2e}")


def test_criterion_08_outer_function(criterion):
    rng = np.random.default_rng(1008)
    worst = 0.0
    for s in trial_seeds(1008, 10):
        g = random_polynomial_with_zeros(s, int(rng.integers(1, 6)), 0)
        F = outer_function(BoundaryModulus.from_function(lambda x: np.abs(g(x)), 4096))
        pts = _disc_points(rng, 100, 0.99)
        worst = max(worst, float(np.max(np.abs(np.abs(F(pts)) - np.abs(g(pts))))))
    criterion(8, worst < 1e-6, f"10 zero-free g, 100 interior points each, max ||F| - |g|| = {worst:.1e} (N = 4096)")


def test_criterion_09_restricted_norm(criterion):
    rng = np.random.default_rng(1009)
    worst = 0.0
    probe_ok = True
    for idx, s in enumerate(trial_seeds(1009, 50)):
        f = generate_random_function(s, 2, int(rng.integers(1, 5)))
        for p in (1.0, 2.0):
            U, est = restricted_norm_function(f, p, (1,))
            full = torus_power_mean(f, p).value
            worst = max(worst, abs(est.value - full) / full)
            if idx < 4:
                centers = _disc_points(rng, 25, 0.5)
                probe_ok &= log_submean_probe(U, centers, rng.uniform(0.05, 0.45, 25)).passed
    criterion(9, worst < 1e-7 and probe_ok,
              f"50 polynomials x p in (1, 2): max rel |mean U - ||f||_p^p| = {worst:.1e}; "
              f"sub-mean probe at 200 centers passed: {probe_ok}")


def test_criterion_10_growth_bound(criterion):
    rng = np.random.default_rng(1010)
    failures = 0
    for s in trial_seeds(1010, 500):
        n = int(rng.integers(1, 3))
        F = generate_random_function(s, n, int(rng.integers(0, 5)))
        p = float(rng.choice([0.5, 1.0, 2.0, 3.0]))
        failures += not growth_bound_check(F, p, _disc_points(rng, n, 0.9), DESK).holds
    worst = math.inf
    for p in (0.5, 1.0, 2.0, 4.0):
        for w in (0.3, 0.5j, -0.6 + 0.2j):
            F = extremal_function(p, w, "hardy_power", 1e-10)
            worst = min(worst, growth_bound_check(F, p, w).ratio)
    criterion(10, failures == 0 and worst > 1 - 1e-4,
              f"500 random pairs, failures={failures}; min ratio at truncated extremals = {worst:.8f}")


SEARCH_PROBLEMS = [
    Problem("burbea_hilbert", (1.0, 2.0)),
    Problem("main_product", (2.0, 4.0)),
    Problem("equal_function", (2.0,), m=3),
    Problem("carleman", (2.0,)),
    Problem("carleman_double", (1.0, 1.0)),
    Problem("isoperimetric", (1.0,)),
    Problem("logsub", (1.0, 1.0)),
    Problem("phi_main", (2.0, 2.0)),
]


@pytest.mark.slow
def test_criterion_11_search(criterion):
    worst_ball, worst_kernel = -math.inf, math.inf
    lines = []
    for prob in SEARCH_PROBLEMS:
        ball = max(maximize_ratio(SearchSpace(prob, "coefficient_ball", degree=2), seed=s).best_ratio
                   for s in range(10))
        kern = maximize_ratio(SearchSpace(prob, "kernel_family", rho=0.6), seed=0).best_ratio
        worst_ball, worst_kernel = max(worst_ball, ball), min(worst_kernel, kern)
        lines.append(f"{prob.inequality_id} {ball:.6f}/{kern:.6f}")
    criterion(11, worst_ball <= 1 + 1e-6 and worst_kernel >= 1 - 1e-4,
              f"max coefficient-ball ratio {worst_ball:.8f}, min kernel-family ratio {worst_kernel:.8f} "
              f"[{'; '.join(lines)}]")


DETERMINISM_RUNS = [
    ["sweep", "--inequality", "burbea_hilbert", "--m", "3", "--n", "2", "--q", "1", "--q", "2", "--q", "0.5",
     "--trials", "50", "--seed", "2"],
    ["sweep", "--inequality", "main_product", "--p", "0.5", "--p", "3", "--trials", "30", "--seed", "4"],
    ["sweep", "--inequality", "logsub", "--q", "2", "--trials", "10"],
    ["extremal", "--inequality", "carleman", "--degree", "2", "--trials", "2"],
    ["factor", "--p", "0.5", "--p", "4", "--trials", "5", "--degree", "6"],
    ["norms", "--n", "2", "--q", "1", "--q", "3", "--p", "1", "--trials", "5"],
    ["profile", "--inequality", "main_product", "--p", "1", "--p", "4", "--samples", "5"],
]


def test_criterion_12_determinism(criterion, tmp_path):
    same = 0
    for k, args in enumerate(DETERMINISM_RUNS):
        outs = []
        for rep, workers in enumerate(("1", "1", "3")):
            path = tmp_path / f"{k}-{rep}.json"
            assert cli.main([*args, "--workers", workers, "--out", str(path)]) == 0
            outs.append(path.read_bytes())
        same += outs[0] == outs[1] == outs[2]
    criterion(12, same == len(DETERMINISM_RUNS),
              f"{same}/{len(DETERMINISM_RUNS)} CLI configurations byte-identical over 3 runs (1, 1, 3 workers)")

"""Both sides of each sharp inequality, the gap, and a verdict.

Every gap function returns a :class:`GapReport`.  ``tolerance`` is the
violation threshold: a relative rounding allowance plus the propagated
quadrature error estimates and truncation allowances of the inputs.
``equality_tolerance`` is the (larger) threshold for declaring equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .norms import hq_norm_series, EPS_FLOOR
from .quadrature import (
    DEFAULT_CONFIG,
    Estimate,
    QuadratureConfig,
    adaptive_integral,
    integrate_polydisc,
    make_rule,
    next_pow2,
    torus_power_mean,
)
from .series import PolySeries, WeightVector, multiply, weight_ratios

__all__ = [
    "INEQUALITY_IDS",
    "CERTIFIED_IDS",
    "Verdict",
    "Tolerances",
    "GapReport",
    "InequalityError",
    "PhiProduct",
    "ModulusSum",
    "burbea_hilbert_gap",
    "main_product_gap",
    "equal_function_gap",
    "carleman_gap",
    "carleman_double_gap",
    "isoperimetric_check",
    "closed_curve",
    "logsub_gap",
    "phi_main_gap",
]

INEQUALITY_IDS = ("burbea_hilbert", "main_product", "equal_function", "carleman",
                  "carleman_double", "isoperimetric", "logsub", "phi_main")
CERTIFIED_IDS = INEQUALITY_IDS

MAX_PRODUCT_DEGREE = 4096


class InequalityError(ValueError):
    pass


class Verdict(str, Enum):
    HOLDS = "holds"
    EQUALITY = "equality"
    VIOLATED = "violated"


@dataclass(frozen=True)
class Tolerances:
    """Relative violation tolerance and relative equality tolerance (both scaled by rhs)."""

    tol: float = 1e-10
    equality_tol: float = 1e-6

    def as_dict(self) -> dict:
        return {"tol": self.tol, "equality_tol": self.equality_tol}


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class GapReport:
    inequality_id: str
    lhs: float
    rhs: float
    gap: float
    ratio: float
    tolerance: float
    equality_tolerance: float
    verdict: Verdict
    inputs: dict = field(default_factory=dict)
    certified: bool = True
    flags: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "kind": "gap",
            "inequality_id": self.inequality_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "ratio": self.ratio,
            "tolerance": self.tolerance,
            "equality_tolerance": self.equality_tolerance,
            "verdict": self.verdict.value,
            "certified": self.certified,
            "flags": list(self.flags),
            "inputs": self.inputs,
        }


def _report(ineq: str, lhs: float, rhs: float, propagated: float, tols: Tolerances, inputs: dict,
            certified: bool = True, flags: Sequence[str] = ()) -> GapReport:
    lhs, rhs = float(lhs), float(rhs)
    gap = rhs - lhs
    scale = max(abs(lhs), abs(rhs))
    tolerance = tols.tol * scale + propagated
    eq_tol = tols.equality_tol * abs(rhs) + tolerance
    if lhs == 0.0 and rhs == 0.0:
        ratio = 0.0
    else:
        ratio = lhs / rhs if rhs != 0 else math.inf
    if gap < -tolerance:
        verdict = Verdict.VIOLATED
    elif abs(gap) <= eq_tol:
        verdict = Verdict.EQUALITY
    else:
        verdict = Verdict.HOLDS
    if not certified:
        flags = tuple(flags) + ("uncertified-(†)",)
    return GapReport(ineq, lhs, rhs, gap, ratio, tolerance, eq_tol, verdict, inputs, certified, tuple(flags))


def _describe(f: PolySeries) -> dict:
    return {"dim": f.dim, "degree": list(f.max_degree), "tail_bound": f.tail_bound}


def _common_dim(functions: Sequence[PolySeries]) -> int:
    dims = {f.dim for f in functions}
    if len(dims) != 1:
        raise InequalityError(f"functions must share one dimension, got {sorted(dims)}")
    return dims.pop()


def _truncation_allowance(functions: Sequence[PolySeries], exponents: Sequence[float],
                          norms: Sequence[float]) -> float:
    """First-order relative change of both sides when each f_j moves by its tail bound (sup norm)."""
    rel = 0.0
    for f, p, nrm in zip(functions, exponents, norms):
        if f.tail_bound == 0.0:
            continue
        if nrm <= 0:
            return math.inf
        x = f.tail_bound / nrm
        rel += max(p * x, x ** min(p, 1.0))
    return 2.0 * rel


# a product of H_{q_j} functions lies in H_{sum q_j}, with norm at most the product of norms

def burbea_hilbert_gap(functions: Sequence[PolySeries], weights: Sequence, tols: Tolerances = DEFAULT_TOLERANCES,
                       max_degree: int = MAX_PRODUCT_DEGREE) -> GapReport:
    """lhs = ||prod f_j||_q with q = sum q_j; rhs = prod ||f_j||_{q_j} (coefficient norms)."""
    m = len(functions)
    if m < 2 or len(weights) != m:
        raise InequalityError("need m >= 2 functions and one weight vector per function")
    n = _common_dim(functions)
    qs = [WeightVector.of(q, n) for q in weights]
    q_total = qs[0]
    for q in qs[1:]:
        q_total = q_total + q
    degree = [sum(f.max_degree[j] for f in functions) for j in range(n)]
    if max(degree) > max_degree:
        raise InequalityError(f"product degree {degree} exceeds the cap {max_degree}")
    prod = functions[0]
    for f in functions[1:]:
        prod = multiply(prod, f)
    lhs = hq_norm_series(prod, q_total)
    norms = [hq_norm_series(f, q) for f, q in zip(functions, qs)]
    rhs = float(np.prod(norms))
    allowance = 0.0
    for f, q, nrm in zip(functions, qs, norms):
        if f.tail_bound:
            # ||e||_q <= tail * sqrt(max weight) over the next degrees
            w = max(float(np.max(weight_ratios(qj, 2 * d + 2))) for qj, d in zip(q, f.max_degree))
            allowance += f.tail_bound * math.sqrt(w) / max(nrm, EPS_FLOOR)
    inputs = {
        "m": m,
        "n": n,
        "weights": [list(q.entries) for q in qs],
        "q_total": list(q_total.entries),
        "functions": [_describe(f) for f in functions],
        "product_degree": degree,
        "truncation_allowance": 2.0 * allowance,
    }
    return _report("burbea_hilbert", lhs, rhs, 2.0 * allowance * rhs, tols, inputs)


# int prod |f_j|^{p_j} dA_{m-2} <= prod ||f_j||_{p_j}^{p_j}

def _even(p: float) -> bool:
    return float(p).is_integer() and int(p) % 2 == 0


def _product_integral(functions: Sequence[PolySeries], exponents: Sequence[float], q: float,
                      config: QuadratureConfig, integrand: Callable | None = None) -> tuple[Estimate, dict]:
    n = functions[0].dim
    if integrand is None:
        def integrand(*z):
            out = 1.0
            for f, p in zip(functions, exponents):
                out = out * np.abs(f(*z)) ** p
            return out
    if all(_even(p) for p in exponents):
        # prod |f_j|^{p_j} = |P|^2 with deg P = sum (p_j/2) D_j: a fixed rule is exact
        d = [int(sum(p / 2 * f.max_degree[j] for f, p in zip(functions, exponents))) for j in range(n)]
        N = tuple(next_pow2(2 * dj + 1) if dj > 0 else 1 for dj in d)
        R = tuple(dj // 2 + 1 for dj in d)
        rule = make_rule(q, n, N, R, config.offset)
        val = float(np.real(integrate_polydisc(rule, integrand, config.compensated)))
        est = Estimate(val, 64 * np.finfo(float).eps * abs(val), True, True, N, R if q != 1.0 else ())
        return est, rule.describe()
    D = max(max(f.max_degree) for f in functions)
    grid = [max(config.grid, next_pow2(max(f.max_degree[j] for f in functions) + 1))
            if any(f.max_degree[j] for f in functions) else 1 for j in range(n)]
    est = adaptive_integral(integrand, q, n, config, grid=grid, radial=config.radial)
    return est, {"kind": "adaptive", "q": q, "grid": list(est.grid), "radial": list(est.radial),
                 "max_degree": D}


def main_product_gap(functions: Sequence[PolySeries], exponents: Sequence[float],
                     config: QuadratureConfig = DEFAULT_CONFIG, tols: Tolerances = DEFAULT_TOLERANCES,
                     _id: str = "main_product") -> GapReport:
    """lhs = int_{U^n} prod |f_j|^{p_j} dA_{m-2}; rhs = prod ||f_j||_{p_j}^{p_j}."""
    m = len(functions)
    if m < 2 or len(exponents) != m:
        raise InequalityError("need m >= 2 functions and one exponent per function")
    if any(not p > 0 for p in exponents):
        raise InequalityError(f"exponents must be positive, got {exponents}")
    n = _common_dim(functions)
    lhs_est, rule = _product_integral(functions, exponents, float(m), config)
    means = [torus_power_mean(f, p, config) for f, p in zip(functions, exponents)]
    rhs = float(np.prod([e.value for e in means]))
    rel_rhs = sum(e.error / e.value for e in means if e.value > 0)
    propagated = lhs_est.error + rel_rhs * rhs
    norms = [e.value ** (1.0 / p) for e, p in zip(means, exponents)]
    trunc = _truncation_allowance(functions, exponents, norms)
    flags = []
    if not lhs_est.converged or not all(e.converged for e in means):
        flags.append("quadrature-not-converged")
    inputs = {
        "m": m,
        "n": n,
        "exponents": [float(p) for p in exponents],
        "functions": [_describe(f) for f in functions],
        "lhs_quadrature": {"rule": rule, "error": lhs_est.error, "converged": lhs_est.converged},
        "rhs_quadrature": [e.as_dict() for e in means],
        "truncation_allowance": trunc,
        "config": config.as_dict(),
    }
    return _report(_id, lhs_est.value, rhs, propagated + trunc * rhs, tols, inputs, flags=flags)


def equal_function_gap(f: PolySeries, p: float, m: int, config: QuadratureConfig = DEFAULT_CONFIG,
                       tols: Tolerances = DEFAULT_TOLERANCES) -> GapReport:
    """(m-1)/pi int_U |f|^{mp} (1-|z|^2)^{m-2} dA <= ||f||_p^{mp}."""
    if f.dim != 1:
        raise InequalityError("the equal-function inequality is stated on the disc (n = 1)")
    if int(m) != m or m < 2:
        raise InequalityError(f"m must be an integer >= 2, got {m}")
    return main_product_gap([f] * int(m), [p] * int(m), config, tols, _id="equal_function")


def _rescale(report: GapReport, ineq: str, lhs_factor: float, rhs_factor: float, tols: Tolerances,
             extra: dict) -> GapReport:
    lhs, rhs = report.lhs * lhs_factor, report.rhs * rhs_factor
    scale_tol = report.tolerance - tols.tol * max(abs(report.lhs), abs(report.rhs))
    inputs = dict(report.inputs)
    inputs.update(extra)
    inputs["normalized"] = {"lhs": report.lhs, "rhs": report.rhs, "ratio": report.ratio}
    return _report(ineq, lhs, rhs, max(scale_tol, 0.0) * max(lhs_factor, rhs_factor), tols, inputs,
                   report.certified, [fl for fl in report.flags if fl != "uncertified-(†)"])


def carleman_gap(f: PolySeries, p: float, config: QuadratureConfig = DEFAULT_CONFIG,
                 tols: Tolerances = DEFAULT_TOLERANCES) -> GapReport:
    """4 pi int_U |f|^{2p} dA <= (int_T |f|^p |dzeta|)^2, in area and arclength units."""
    base = equal_function_gap(f, p, 2, config, tols)
    # dA = pi dA_0 and |dzeta| = 2 pi dm_1
    four_pi_sq = 4.0 * math.pi ** 2
    return _rescale(base, "carleman", four_pi_sq, four_pi_sq, tols, {"p": float(p)})


def carleman_double_gap(f1: PolySeries, f2: PolySeries, config: QuadratureConfig = DEFAULT_CONFIG,
                        tols: Tolerances = DEFAULT_TOLERANCES) -> GapReport:
    """4 pi int_U |f1||f2| dA <= int_T |f1||dzeta| * int_T |f2||dzeta|."""
    if f1.dim != 1 or f2.dim != 1:
        raise InequalityError("carleman_double is stated on the disc (n = 1)")
    base = main_product_gap([f1, f2], [1.0, 1.0], config, tols)
    four_pi_sq = 4.0 * math.pi ** 2
    return _rescale(base, "carleman_double", four_pi_sq, four_pi_sq, tols, {})


def closed_curve(fn: Callable[[np.ndarray], np.ndarray], samples: int) -> np.ndarray:
    """Sample a parametrized curve t -> complex on [0, 2 pi], repeating the first point at the end."""
    t = 2.0 * np.pi * np.arange(samples) / samples
    pts = np.asarray(fn(t), dtype=complex)
    return np.append(pts, pts[0])


def isoperimetric_check(derivative: PolySeries | None = None, curve=None,
                        config: QuadratureConfig = DEFAULT_CONFIG,
                        tols: Tolerances = DEFAULT_TOLERANCES) -> GapReport:
    """4 pi Area(D) <= Length(dD)^2.

    Analytic route: ``derivative`` is the series of f' for a conformal map
    f of the disc onto D; Area = int_U |f'|^2 dA, Length = int_T |f'| |dzeta|.
    Sampled route: ``curve`` is a closed polygon (complex array or (M, 2)
    array) whose last point repeats the first; shoelace area and polygonal
    length.  Simplicity of the curve is not checked.
    """
    if (derivative is None) == (curve is None):
        raise InequalityError("give exactly one of derivative= or curve=")
    if derivative is not None:
        base = carleman_double_gap(derivative, derivative, config, tols)
        area = base.lhs / (4.0 * math.pi)
        length = math.sqrt(base.rhs)
        inputs = dict(base.inputs)
        inputs.update({"route": "analytic", "area": area, "length": length})
        return GapReport("isoperimetric", base.lhs, base.rhs, base.gap, base.ratio, base.tolerance,
                         base.equality_tolerance, base.verdict, inputs, base.certified, base.flags)
    pts = np.asarray(curve)
    if pts.ndim == 2 and pts.shape[1] == 2:
        pts = pts[:, 0] + 1j * pts[:, 1]
    pts = pts.astype(complex).reshape(-1)
    if pts.size < 4:
        raise InequalityError("a closed curve needs at least three distinct points")
    scale = float(np.max(np.abs(pts - pts[0])))
    if abs(pts[-1] - pts[0]) > 1e-12 * max(scale, 1.0):
        raise InequalityError("open curve: the last sample must repeat the first")
    x, y = pts.real, pts.imag
    area = 0.5 * abs(float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1])))
    length = float(np.sum(np.abs(np.diff(pts))))
    lhs, rhs = 4.0 * math.pi * area, length ** 2
    inputs = {"route": "sampled", "samples": int(pts.size - 1), "area": area, "length": length}
    return _report("isoperimetric", lhs, rhs, 0.0, tols, inputs)


# log-subharmonic data

@dataclass(frozen=True)
class ModulusSum:
    """U(z) = sum_k |g_k(z)|^{s_k}: log-subharmonic for polynomial g_k and s_k > 0."""

    terms: tuple[PolySeries, ...]
    powers: tuple[float, ...] = ()

    def __post_init__(self):
        terms = tuple(self.terms)
        powers = tuple(float(s) for s in self.powers) or (1.0,) * len(terms)
        if not terms or len(powers) != len(terms):
            raise InequalityError("ModulusSum needs one power per term and at least one term")
        if any(s <= 0 for s in powers):
            raise InequalityError("powers must be positive")
        if any(g.dim != 1 for g in terms):
            raise InequalityError("log-subharmonic data is one-variable")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "powers", powers)

    def __call__(self, z):
        out = 0.0
        for g, s in zip(self.terms, self.powers):
            out = out + np.abs(g(z)) ** s
        return out

    @property
    def max_degree(self) -> int:
        return max(g.max_degree[0] for g in self.terms)

    def boundary_mean(self, config: QuadratureConfig = DEFAULT_CONFIG) -> Estimate:
        if len(self.terms) == 1:
            return torus_power_mean(self.terms[0], self.powers[0], config)
        return adaptive_integral(lambda z: self(z), 1.0, 1, config,
                                 grid=max(config.grid, next_pow2(self.max_degree + 1)))

    def as_dict(self) -> dict:
        return {"terms": [_describe(g) for g in self.terms], "powers": list(self.powers)}


def logsub_gap(functions_U: Sequence[ModulusSum], mu_q: float | None = None,
               config: QuadratureConfig = DEFAULT_CONFIG, tols: Tolerances = DEFAULT_TOLERANCES) -> GapReport:
    """int_U prod U_j dA_{q-2} <= prod ||U_j||_1 with ||U||_1 the boundary mean.

    Only q = m (the product Phi with dA_{m-2}) is a certified instance.
    """
    m = len(functions_U)
    if m < 2:
        raise InequalityError("need m >= 2 functions")
    q = float(m if mu_q is None else mu_q)
    if q < 1:
        raise InequalityError("mu_q must be >= 1")
    Us = list(functions_U)
    all_single = all(len(U.terms) == 1 for U in Us)
    if all_single:
        fs = [U.terms[0] for U in Us]
        ps = [U.powers[0] for U in Us]
        lhs_est, rule = _product_integral(fs, ps, q, config)
    else:
        def integrand(*z):
            out = 1.0
            for U in Us:
                out = out * U(z[0])
            return out
        D = max(U.max_degree for U in Us)
        lhs_est = adaptive_integral(integrand, q, 1, config, grid=max(config.grid, next_pow2(D + 1)))
        rule = {"kind": "adaptive", "q": q, "grid": list(lhs_est.grid), "radial": list(lhs_est.radial)}
    means = [U.boundary_mean(config) for U in Us]
    rhs = float(np.prod([e.value for e in means]))
    propagated = lhs_est.error + rhs * sum(e.error / e.value for e in means if e.value > 0)
    certified = q == float(m)
    flags = [] if lhs_est.converged and all(e.converged for e in means) else ["quadrature-not-converged"]
    inputs = {"m": m, "mu_q": q, "U": [U.as_dict() for U in Us], "lhs_quadrature": rule,
              "rhs_quadrature": [e.as_dict() for e in means]}
    return _report("logsub", lhs_est.value, rhs, propagated, tols, inputs, certified, flags)


# general Phi

class PhiProduct:
    """Phi(x_1, ..., x_m) = prod x_j, the certified instance."""

    certified = True
    name = "product"

    def __init__(self, arity: int):
        if arity < 2:
            raise InequalityError("PhiProduct needs arity m >= 2")
        self.arity = arity

    def __call__(self, *xs):
        out = 1.0
        for x in xs:
            out = out * x
        return out


def _probe_phi(phi: Callable, m: int, seed: int = 0, trials: int = 64) -> None:
    """Spot-check the contract: nondecreasing in each variable and zero when an argument is zero."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        x = rng.uniform(0.05, 5.0, size=m)
        base = float(phi(*x))
        if not np.isfinite(base) or base < 0:
            raise InequalityError(f"Phi is not finite and nonnegative at {x.tolist()}")
        for j in range(m):
            y = x.copy()
            y[j] *= 1.0 + rng.uniform(0.01, 1.0)
            if float(phi(*y)) < base:
                raise InequalityError(f"Phi decreases in argument {j} at {x.tolist()}")
            y[j] = 0.0
            if float(phi(*y)) != 0.0:
                raise InequalityError(f"Phi does not vanish when argument {j} is zero")


def phi_main_gap(functions: Sequence[PolySeries], exponents: Sequence[float], phi: Callable | None = None,
                 mu_q: float | None = None, config: QuadratureConfig = DEFAULT_CONFIG,
                 tols: Tolerances = DEFAULT_TOLERANCES) -> GapReport:
    """int Phi(|f_1|^{p_1}, ...) dnu_n <= Phi(||f_1||_{p_1}^{p_1}, ...) with nu_n = dA_{q-2}^n.

    The caller vouches for the hypothesis on (Phi, mu); only the product Phi
    with q = m is certified, any other pair is labelled uncertified.
    """
    m = len(functions)
    if m < 2 or len(exponents) != m:
        raise InequalityError("need m >= 2 functions and one exponent per function")
    phi = PhiProduct(m) if phi is None else phi
    _probe_phi(phi, m)
    q = float(m if mu_q is None else mu_q)
    n = _common_dim(functions)
    certified = isinstance(phi, PhiProduct) and q == float(m)

    if isinstance(phi, PhiProduct):
        lhs_est, rule = _product_integral(functions, exponents, q, config)
    else:
        def integrand(*z):
            return phi(*(np.abs(f(*z)) ** p for f, p in zip(functions, exponents)))
        grid = [max(config.grid, next_pow2(max(f.max_degree[j] for f in functions) + 1)) for j in range(n)]
        lhs_est = adaptive_integral(integrand, q, n, config, grid=grid)
        rule = {"kind": "adaptive", "q": q, "grid": list(lhs_est.grid), "radial": list(lhs_est.radial)}
    means = [torus_power_mean(f, p, config) for f, p in zip(functions, exponents)]
    rhs = float(phi(*(e.value for e in means)))
    # first-order sensitivity of Phi to the boundary means
    sens = 0.0
    for j, e in enumerate(means):
        if e.error and e.value > 0:
            bumped = [x.value for x in means]
            bumped[j] = e.value + e.error
            sens += abs(float(phi(*bumped)) - rhs)
    flags = [] if lhs_est.converged and all(e.converged for e in means) else ["quadrature-not-converged"]
    inputs = {"m": m, "n": n, "phi": getattr(phi, "name", getattr(phi, "__name__", "custom")),
              "mu_q": q, "exponents": [float(p) for p in exponents],
              "functions": [_describe(f) for f in functions], "lhs_quadrature": rule,
              "rhs_quadrature": [e.as_dict() for e in means]}
    return _report("phi_main", lhs_est.value, rhs, lhs_est.error + sens, tols, inputs, certified, flags)

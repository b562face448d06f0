"""Derivative-free maximization of lhs/rhs over small function families.

A :class:`Problem` fixes the inequality and its exponents; a
:class:`SearchSpace` decodes real parameter vectors into the tuple of
functions the inequality expects.  The objective is always the ratio from
the corresponding gap function, so all tolerance bookkeeping is shared
with single verifications.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from . import inequalities as ineq
from .inequalities import GapReport, InequalityError, ModulusSum, Tolerances, DEFAULT_TOLERANCES
from .quadrature import QuadratureConfig, QuadratureError
from .series import PolySeries, SeriesError, _binomial_coefficients, kernel_series

__all__ = [
    "SearchError",
    "Problem",
    "SearchSpace",
    "SearchResult",
    "ProfilePoint",
    "SEARCH_CONFIG",
    "evaluate",
    "maximize_ratio",
    "ratio_profile",
    "nearest_kernel_distance",
]

NORM_CAP = 10.0
DEFAULT_RESTARTS = 5

# looser than the verification default: one search makes thousands of calls
SEARCH_CONFIG = QuadratureConfig(grid=32, radial=16, max_points=1 << 16, rtol=1e-9, max_axis=1 << 12)


class SearchError(RuntimeError):
    pass


@dataclass(frozen=True)
class Problem:
    """An inequality instance on the disc (n = 1) with fixed exponents.

    ``exponents`` are the p_j (weights q_j for burbea_hilbert); for carleman
    and equal_function a single p, with ``m`` copies for equal_function.
    """

    inequality_id: str
    exponents: tuple[float, ...] = (2.0, 2.0)
    m: int = 2

    def __post_init__(self):
        if self.inequality_id not in ineq.INEQUALITY_IDS:
            raise SearchError(f"unknown inequality {self.inequality_id!r}")
        object.__setattr__(self, "exponents", tuple(float(x) for x in self.exponents))
        if self.inequality_id in ("carleman", "equal_function") and len(self.exponents) != 1:
            raise SearchError(f"{self.inequality_id} takes one exponent p")

    @property
    def arity(self) -> int:
        """Number of free functions."""
        if self.inequality_id in ("carleman", "equal_function", "isoperimetric"):
            return 1
        if self.inequality_id == "carleman_double":
            return 2
        return len(self.exponents)

    def kernel_exponents(self) -> tuple[float, ...]:
        """a_j with extremal f_j = K_w^{a_j} (for logsub: the base of U_j = |K_w|^2)."""
        i = self.inequality_id
        if i == "burbea_hilbert":
            return self.exponents
        if i in ("carleman_double", "isoperimetric"):
            return (2.0,) * self.arity
        if i == "logsub":
            return (1.0,) * self.arity
        return tuple(2.0 / p for p in self.exponents)

    def as_dict(self) -> dict:
        return {"inequality_id": self.inequality_id, "exponents": list(self.exponents), "m": self.m}


def evaluate(problem: Problem, functions: Sequence[PolySeries], config: QuadratureConfig = SEARCH_CONFIG,
             tols: Tolerances = DEFAULT_TOLERANCES) -> GapReport:
    i, ps = problem.inequality_id, problem.exponents
    if i == "burbea_hilbert":
        return ineq.burbea_hilbert_gap(functions, ps, tols)
    if i == "main_product":
        return ineq.main_product_gap(functions, ps, config, tols)
    if i == "equal_function":
        return ineq.equal_function_gap(functions[0], ps[0], problem.m, config, tols)
    if i == "carleman":
        return ineq.carleman_gap(functions[0], ps[0], config, tols)
    if i == "carleman_double":
        return ineq.carleman_double_gap(functions[0], functions[1], config, tols)
    if i == "isoperimetric":
        return ineq.isoperimetric_check(derivative=functions[0], config=config, tols=tols)
    if i == "logsub":
        return ineq.logsub_gap([ModulusSum((g,), (2.0,)) for g in functions], None, config, tols)
    return ineq.phi_main_gap(functions, ps, None, None, config, tols)


@dataclass(frozen=True)
class SearchSpace:
    """``coefficient_ball``: degree-D coefficients of each function, 2-norm capped.
    ``kernel_family``: one point w with |w| <= rho, decoded to the extremal tuple at w."""

    problem: Problem
    family: str = "coefficient_ball"
    degree: int = 3
    rho: float = 0.6
    kernel_tol: float = 1e-10
    norm_cap: float = NORM_CAP

    def __post_init__(self):
        if self.family not in ("coefficient_ball", "kernel_family"):
            raise SearchError(f"unknown family {self.family!r}")
        if self.family == "kernel_family" and not 0 < self.rho < 1:
            raise SearchError("kernel_family needs 0 < rho < 1")
        if self.degree < 0:
            raise SearchError("degree must be >= 0")

    @property
    def dimension(self) -> int:
        if self.family == "kernel_family":
            return 2
        return 2 * (self.degree + 1) * self.problem.arity

    @property
    def bounds(self) -> np.ndarray:
        b = self.rho if self.family == "kernel_family" else self.norm_cap
        return np.tile([-b, b], (self.dimension, 1))

    def decode(self, x) -> tuple[PolySeries, ...] | None:
        """Function tuple for parameters x, or None when x is rejected."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,) or not np.all(np.isfinite(x)):
            return None
        if self.family == "kernel_family":
            w = complex(x[0], x[1])
            if abs(w) > self.rho:
                w *= self.rho / abs(w)
            return tuple(kernel_series(a, w, self.kernel_tol) for a in self.problem.kernel_exponents())
        out = []
        for c in x.reshape(self.problem.arity, 2, self.degree + 1):
            coeffs = c[0] + 1j * c[1]
            nrm = float(np.linalg.norm(coeffs))
            if nrm < 1e-12:
                return None
            if nrm > self.norm_cap:
                coeffs = coeffs * (self.norm_cap / nrm)
            out.append(PolySeries(coeffs))
        return tuple(out)

    def initial_point(self, rng: np.random.Generator) -> np.ndarray:
        if self.family == "kernel_family":
            r = self.rho * math.sqrt(rng.uniform())
            t = rng.uniform(0.0, 2 * math.pi)
            return np.array([r * math.cos(t), r * math.sin(t)])
        return rng.standard_normal(self.dimension) / math.sqrt(self.dimension)

    def as_dict(self) -> dict:
        return {"problem": self.problem.as_dict(), "family": self.family, "degree": self.degree,
                "rho": self.rho, "kernel_tol": self.kernel_tol, "norm_cap": self.norm_cap,
                "dimension": self.dimension}


@dataclass(frozen=True)
class SearchResult:
    best_ratio: float
    best_parameters: tuple[float, ...]
    evaluations: int
    rejections: int
    converged: bool
    nearest_kernel_distance: float
    best_report: GapReport | None
    restart_ratios: tuple[float, ...] = ()
    space: dict = field(default_factory=dict)
    seed: int = 0

    def as_dict(self) -> dict:
        return {
            "kind": "search",
            "space": self.space,
            "seed": self.seed,
            "best_ratio": self.best_ratio,
            "best_parameters": list(self.best_parameters),
            "evaluations": self.evaluations,
            "rejections": self.rejections,
            "converged": self.converged,
            "nearest_kernel_distance": self.nearest_kernel_distance,
            "restart_ratios": list(self.restart_ratios),
            "best_report": None if self.best_report is None else self.best_report.as_dict(),
        }


def _truncated_kernel(a: float, w: complex, degree: int) -> np.ndarray:
    return _binomial_coefficients(a, degree) * np.conj(w) ** np.arange(degree + 1)


def _scaled_distance(g: np.ndarray, k: np.ndarray) -> float:
    kk = float(np.vdot(k, k).real)
    c = np.vdot(k, g) / kk if kk > 0 else 0.0
    return float(np.linalg.norm(g - c * k)) / max(float(np.linalg.norm(g)), 1e-300)


def nearest_kernel_distance(functions: Sequence[PolySeries], exponents: Sequence[float],
                            w_max: float = 0.99) -> float:
    """Largest (over the tuple) relative coefficient-space distance to c K_w^{a_j}, c and w optimal.

    Kernels are truncated at each function's own degree; the complex scale c
    is the least-squares optimum, w is optimized by Nelder-Mead from a small
    fixed grid of starts.
    """
    worst = 0.0
    for f, a in zip(functions, exponents):
        g = f.coeffs.reshape(-1)
        D = g.size - 1
        if D == 0:
            continue

        def dist(x):
            w = complex(x[0], x[1])
            if abs(w) > w_max:
                w *= w_max / abs(w)
            return _scaled_distance(g, _truncated_kernel(a, w, D))

        # a natural start: w from the ratio of the first two coefficients
        starts = [(0.0, 0.0), (0.5, 0.0), (-0.5, 0.0), (0.0, 0.5), (0.0, -0.5)]
        if g[0] != 0:
            w0 = np.conj(g[1] / (a * g[0]))
            if abs(w0) < w_max:
                starts.insert(0, (w0.real, w0.imag))
        best = min(minimize(dist, np.array(s), method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-14, "maxfev": 400}).fun for s in starts)
        worst = max(worst, float(best))
    return worst


def _restart(space: SearchSpace, seq: np.random.SeedSequence, budget: int, config: QuadratureConfig,
             tols: Tolerances) -> dict:
    rng = np.random.default_rng(seq)
    x0 = space.initial_point(rng)
    state = {"evals": 0, "rejections": 0, "best": -math.inf, "x": x0, "report": None}
    lo, hi = space.bounds[:, 0], space.bounds[:, 1]

    def objective(x):
        state["evals"] += 1
        fs = space.decode(np.clip(x, lo, hi))
        if fs is None:
            state["rejections"] += 1
            return 0.0
        try:
            rep = evaluate(space.problem, fs, config, tols)
        except (InequalityError, SeriesError, QuadratureError):
            state["rejections"] += 1
            return 0.0
        if rep.ratio > state["best"]:
            state.update(best=rep.ratio, x=np.clip(x, lo, hi).copy(), report=rep)
        return -rep.ratio

    res = minimize(objective, x0, method="Nelder-Mead",
                   options={"maxfev": budget, "xatol": 1e-9, "fatol": 1e-13, "adaptive": True})
    state["converged"] = bool(res.success)
    return state


def maximize_ratio(space: SearchSpace, budget: int | None = None, seed: int = 0,
                   restarts: int = DEFAULT_RESTARTS, config: QuadratureConfig = SEARCH_CONFIG,
                   tols: Tolerances = DEFAULT_TOLERANCES, workers: int = 1) -> SearchResult:
    """Nelder-Mead on -ratio from ``restarts`` seeded starts, budget split evenly.

    Restarts are independent and may run on ``workers`` threads; results
    are merged by restart index so the outcome does not depend on it.
    """
    budget = 50 * space.dimension if budget is None else int(budget)
    if budget < 50 * space.dimension:
        raise SearchError(f"budget {budget} below 50 * dimension = {50 * space.dimension}")
    per = budget // restarts
    seqs = np.random.SeedSequence(seed).spawn(restarts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            states = list(pool.map(lambda s: _restart(space, s, per, config, tols), seqs))
    else:
        states = [_restart(space, s, per, config, tols) for s in seqs]
    evals = sum(s["evals"] for s in states)
    rejections = sum(s["rejections"] for s in states)
    if rejections > 0.5 * evals:
        raise SearchError(f"decoder rejected {rejections} of {evals} evaluations: degenerate space")
    # first restart wins ties
    best = max(range(restarts), key=lambda i: (states[i]["best"], -i))
    st = states[best]
    fs = space.decode(st["x"])
    dist = nearest_kernel_distance(fs, space.problem.kernel_exponents()) if fs else math.inf
    return SearchResult(
        best_ratio=float(st["best"]),
        best_parameters=tuple(float(v) for v in st["x"]),
        evaluations=evals,
        rejections=rejections,
        converged=bool(st["converged"]),
        nearest_kernel_distance=dist,
        best_report=st["report"],
        restart_ratios=tuple(float(s["best"]) for s in states),
        space=space.as_dict(),
        seed=int(seed),
    )


@dataclass(frozen=True)
class ProfilePoint:
    t: float
    ratio: float
    status: str

    def as_row(self) -> tuple[float, float, str]:
        return (self.t, self.ratio, self.status)


def ratio_profile(problem: Problem, path: Callable[[float], Sequence[PolySeries]], samples: int,
                  t_range: tuple[float, float] = (0.0, 1.0), config: QuadratureConfig = SEARCH_CONFIG,
                  tols: Tolerances = DEFAULT_TOLERANCES) -> list[ProfilePoint]:
    """Ratio along t -> path(t) at ``samples`` equally spaced t (endpoints included).

    A sample whose functions are rejected is recorded with ratio NaN and
    the error message as status.
    """
    if samples < 1:
        raise SearchError("samples must be >= 1")
    ts = np.linspace(t_range[0], t_range[1], samples) if samples > 1 else np.array([t_range[0]])
    out = []
    for t in ts:
        try:
            fs = tuple(path(float(t)))
            if any(f.is_zero() for f in fs):
                raise InequalityError("zero function on the path")
            rep = evaluate(problem, fs, config, tols)
            out.append(ProfilePoint(float(t), rep.ratio, rep.verdict.value))
        except (InequalityError, SeriesError, QuadratureError) as exc:
            out.append(ProfilePoint(float(t), math.nan, f"rejected: {exc}"))
    return out


def kernel_path(problem: Problem, direction: complex = 1.0, tol: float = 1e-10) -> Callable[[float], tuple]:
    """t -> extremal tuple at w = t * direction."""
    def path(t):
        return tuple(kernel_series(a, t * direction, tol) for a in problem.kernel_exponents())
    return path

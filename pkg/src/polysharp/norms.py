"""Generalized Hardy norms, restricted-norm functions and the pointwise growth bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .quadrature import (
    DEFAULT_CONFIG,
    DiscRule,
    Estimate,
    QuadratureConfig,
    TorusRule,
    circle_power_means,
    integrate_polydisc,
    make_rule,
    next_pow2,
    torus_power_mean,
)
from .series import PolySeries, SeriesError, WeightVector, weight_ratios

__all__ = [
    "EPS_FLOOR",
    "NormError",
    "NormReport",
    "hq_norm_series",
    "hq_norm_integral",
    "exact_disc_rule",
    "norm_report",
    "RestrictedNorm",
    "restricted_norm_function",
    "SubmeanProbe",
    "log_submean_probe",
    "GrowthCheck",
    "growth_bound_check",
]

EPS_FLOOR = 1e-300


class NormError(ArithmeticError):
    pass


def _weight_tensor(shape: tuple[int, ...], q: WeightVector) -> np.ndarray:
    W = np.ones(shape)
    for j, (s, qj) in enumerate(zip(shape, q)):
        axis_shape = [1] * len(shape)
        axis_shape[j] = s
        W = W * weight_ratios(qj, s - 1).reshape(axis_shape)
    return W


def hq_norm_series(f: PolySeries, q: WeightVector | float | Sequence[float]) -> float:
    """||f||_q = (sum_alpha alpha!/(q)_alpha |a_alpha|^2)^(1/2), lexicographic order."""
    q = WeightVector.of(q, f.dim)
    W = _weight_tensor(f.coeffs.shape, q)
    if not np.all(np.isfinite(W)):
        alpha = tuple(int(i[0]) for i in np.nonzero(~np.isfinite(W)))
        raise NormError(f"alpha!/(q)_alpha overflows at alpha={alpha} for q={q.entries}")
    a = np.abs(f.coeffs)
    # scale out the largest modulus so tiny or huge coefficients do not under/overflow when squared
    s = float(np.max(a))
    if s == 0.0:
        return 0.0
    return s * math.sqrt(float(np.sum(W * (a / s) ** 2)))


def exact_disc_rule(f: PolySeries, q: float) -> TorusRule | DiscRule:
    """Smallest convenient rule integrating |f|^2 d A_{q-2} exactly.

    Angular: N_j > 2 D_j kills aliasing; radial: the angular mean of |f|^2 is a
    polynomial of degree D_j in t = r^2, exact once 2R - 1 >= D_j.
    """
    D = f.max_degree
    N = tuple(next_pow2(2 * d + 1) if d > 0 else 1 for d in D)
    R = tuple(max(1, d // 2 + 1) for d in D)
    return make_rule(q, f.dim, N, R)


def hq_norm_integral(f: PolySeries, q: float, rule: TorusRule | DiscRule | None = None,
                     compensated: bool = False) -> float:
    """(int |f|^2 dA_{q-2})^(1/2) with the q = 1 case integrated over T^n."""
    q = float(q)
    if q < 1.0:
        raise NormError(f"integral representation only holds for q >= 1, got q={q}")
    if rule is None:
        rule = exact_disc_rule(f, q)
    if isinstance(rule, DiscRule) and any(abs(qj - q) > 0 for qj in rule.q):
        raise NormError(f"rule weight {rule.q} does not match q={q}")
    if isinstance(rule, TorusRule) and q != 1.0:
        raise NormError("a torus rule only represents q = 1")
    val = integrate_polydisc(rule, lambda *z: np.abs(f(*z)) ** 2, compensated)
    return math.sqrt(max(float(np.real(val)), 0.0))


@dataclass(frozen=True)
class NormReport:
    series_value: float
    integral_value: float | None
    relative_discrepancy: float | None
    q: tuple[float, ...]
    rule: dict | None = None

    def as_dict(self) -> dict:
        return {
            "kind": "norm",
            "q": list(self.q),
            "series_value": self.series_value,
            "integral_value": self.integral_value,
            "relative_discrepancy": self.relative_discrepancy,
            "rule": self.rule,
        }


def norm_report(f: PolySeries, q: WeightVector | float | Sequence[float],
                rule: TorusRule | DiscRule | None = None) -> NormReport:
    """Coefficient norm, plus the integral norm when q is scalar and >= 1."""
    q = WeightVector.of(q, f.dim)
    series = hq_norm_series(f, q)
    qs = q.entries[0]
    if not q.is_scalar or qs < 1.0:
        return NormReport(series, None, None, q.entries)
    if rule is None:
        rule = exact_disc_rule(f, qs)
    integral = hq_norm_integral(f, qs, rule)
    return NormReport(series, integral, abs(series - integral) / max(series, EPS_FLOOR),
                      q.entries, rule.describe())


class RestrictedNorm:
    """U(z'') = ||f(., z'')||_p^p over the free variables, z'' on the kept axes.

    Evaluation is on demand: each call restricts f at the requested points
    and integrates over the free variables, one restriction at a time.
    """

    def __init__(self, f: PolySeries, p: float, kept_axes: Sequence[int],
                 config: QuadratureConfig = DEFAULT_CONFIG):
        n = f.dim
        kept = tuple(int(j) for j in kept_axes)
        if not 1 <= len(kept) <= n - 1:
            raise NormError(f"need 1 <= k <= n - 1 kept axes, got k={len(kept)} for n={n}")
        if list(kept) != sorted(set(kept)) or kept[0] < 0 or kept[-1] >= n:
            raise NormError(f"kept axes must be strictly increasing indices in [0, {n}), got {kept}")
        if not p > 0:
            raise NormError(f"exponent p must be positive, got {p}")
        self.f, self.p, self.kept, self.config = f, float(p), kept, config
        self.free = tuple(j for j in range(n) if j not in kept)
        # coefficient tensor with kept axes first
        self._coeffs = np.transpose(f.coeffs, kept + self.free)

    def restrict(self, point: Sequence[complex]) -> PolySeries:
        """The polynomial in the free variables obtained by fixing z'' = point."""
        return PolySeries(self._restricted_rows(np.asarray(point, dtype=complex)[None, :])[0])

    def _restricted_rows(self, points: np.ndarray) -> np.ndarray:
        acc = None
        for j in range(len(self.kept)):
            v = points[:, j, None] ** np.arange(self._coeffs.shape[j])
            if acc is None:
                acc = np.tensordot(v, self._coeffs, axes=([1], [0]))
            else:
                acc = np.einsum("mb,mb...->m...", v, acc)
        return acc

    def values(self, points) -> np.ndarray:
        """U at an array of points of shape (M, k) (or (M,) when k = 1)."""
        points = np.asarray(points, dtype=complex)
        if points.ndim == 1:
            points = points[:, None] if len(self.kept) == 1 else points[None, :]
        rows = self._restricted_rows(points)
        if len(self.free) == 1:
            if self.p % 2 == 0:
                # even p: a single grid with N > (p/2) deg is exact
                N = next_pow2(max(2.0, self.p / 2.0) * (rows.shape[1] - 1) + 1)
                return circle_power_means(rows, self.p, self.config.rtol, N, N)[0]
            return circle_power_means(rows, self.p, self.config.rtol, self.config.grid,
                                      self.config.max_axis)[0]
        return np.array([torus_power_mean(PolySeries(r), self.p, self.config).value for r in rows])

    def __call__(self, *z) -> float:
        return float(self.values(np.asarray(z, dtype=complex)[None, :])[0])

    def pl1_norm(self) -> Estimate:
        """Torus mean of U over the kept axes, doubling the grid until stable."""
        k = len(self.kept)
        deg = [self._coeffs.shape[j] - 1 for j in range(k)]
        N = max(self.config.grid, next_pow2(max(deg) + 1))

        def mean(N):
            nodes = np.exp(2j * np.pi * np.arange(N) / N)
            pts = np.stack([g.reshape(-1) for g in np.meshgrid(*([nodes] * k), indexing="ij")], axis=-1)
            return float(self.values(pts).mean())

        prev, err = mean(N), math.inf
        while N ** k * 2 ** k <= self.config.max_axis:
            N *= 2
            cur = mean(N)
            err = abs(cur - prev)
            prev = cur
            if err <= self.config.rtol * max(cur, EPS_FLOOR):
                return Estimate(cur, err, True, False, (N,) * k)
        return Estimate(prev, err, False, False, (N,) * k)


def restricted_norm_function(f: PolySeries, p: float, kept_axes: Sequence[int],
                             config: QuadratureConfig = DEFAULT_CONFIG) -> tuple[RestrictedNorm, Estimate]:
    """U together with its PL_1 norm (the torus mean over the kept axes)."""
    U = RestrictedNorm(f, p, kept_axes, config)
    return U, U.pl1_norm()


@dataclass(frozen=True)
class SubmeanProbe:
    centers: int
    points_per_circle: int
    max_excess: float
    passed: bool

    def as_dict(self) -> dict:
        return {"kind": "submean_probe", "centers": self.centers, "points_per_circle": self.points_per_circle,
                "max_excess": self.max_excess, "passed": self.passed}


def log_submean_probe(U: RestrictedNorm, centers, radii, points: int = 64, slack: float = 1e-6) -> SubmeanProbe:
    """Check log U(c) <= mean of log U on the circle |z - c| = rho, per axis, for every center.

    For k > 1 the circle is traced in the complex line through c along
    the direction (1, ..., 1).
    """
    centers = np.asarray(centers, dtype=complex)
    if centers.ndim == 1:
        centers = centers[:, None]
    radii = np.broadcast_to(np.asarray(radii, dtype=float), (centers.shape[0],))
    theta = np.exp(2j * np.pi * np.arange(points) / points)
    worst = -math.inf
    for c, rho in zip(centers, radii):
        if np.any(np.abs(c) + rho >= 1.0):
            raise NormError(f"test circle at {c} with radius {rho} leaves the polydisc")
        ring = c[None, :] + rho * theta[:, None]
        vals = U.values(np.vstack([c[None, :], ring]))
        excess = math.log(vals[0]) - float(np.mean(np.log(vals[1:])))
        worst = max(worst, excess)
    return SubmeanProbe(int(centers.shape[0]), points, worst, worst <= slack)


@dataclass(frozen=True)
class GrowthCheck:
    lhs: float
    rhs: float
    holds: bool
    ratio: float
    tolerance: float
    p: float
    point: tuple[complex, ...] = field(default=())

    def as_dict(self) -> dict:
        return {"kind": "growth_bound", "p": self.p, "lhs": self.lhs, "rhs": self.rhs,
                "ratio": self.ratio, "tolerance": self.tolerance, "holds": self.holds,
                "point": [[z.real, z.imag] for z in self.point]}


def growth_bound_check(F: PolySeries, p: float, z: Sequence[complex] | complex,
                       config: QuadratureConfig = DEFAULT_CONFIG, rtol: float = 1e-10) -> GrowthCheck:
    """|F(z)|^p <= ||F||_p^p / prod_j (1 - |z_j|^2).

    The right side uses the p-th power of the norm; the bound is homogeneous
    of degree p in F only in that form, and it is attained at
    F = lambda K_z^{2/p}.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.size != F.dim:
        raise SeriesError(f"point has {z.size} coordinates, series has {F.dim}")
    if np.any(np.abs(z) >= 1.0):
        raise NormError("growth bound needs an interior point")
    lhs = abs(F(*z)) ** p
    est = torus_power_mean(F, p, config)
    denom = float(np.prod(1.0 - np.abs(z) ** 2))
    rhs = est.value / denom
    tol = rtol * max(rhs, lhs) + est.error / denom
    return GrowthCheck(lhs, rhs, lhs <= rhs + tol, lhs / rhs if rhs > 0 else 0.0, tol, float(p),
                       tuple(complex(v) for v in z))

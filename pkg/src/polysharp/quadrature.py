"""Quadrature on the torus T^n and on the polydisc U^n.

Two rule families:

* :class:`TorusRule` -- the uniform tensor grid of N-th roots of unity
  (optionally rotated), integrating against the Haar measure m_n.
* :class:`DiscRule` -- per axis an R-point Gauss-Jacobi rule in t = r^2
  for the weight (q - 1)(1 - t)^(q - 2) times a uniform N-point angular
  rule; the polydisc rule is the n-fold tensor product.  This integrates
  against the normalized measure dA_{q-2} = ((q-1)/pi)(1-|z|^2)^(q-2) dA.

Integrands are callables receiving the n coordinate arrays of a sparse
tensor grid (``np.meshgrid(..., indexing="ij", sparse=True)`` layout) and
returning values broadcastable to the full grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import roots_jacobi

from .series import PolySeries

__all__ = [
    "QuadratureError",
    "QuadratureConfig",
    "Estimate",
    "TorusRule",
    "DiscRule",
    "make_rule",
    "integrate_torus",
    "integrate_polydisc",
    "integrate",
    "adaptive_integral",
    "torus_power_mean",
    "hardy_norm",
    "mp_at_radius",
    "beta_moment",
    "next_pow2",
    "circle_power_means",
]


class QuadratureError(ArithmeticError):
    """Non-finite integrand value at a node, or an invalid rule request."""


def next_pow2(k: float) -> int:
    return 1 << max(0, math.ceil(math.log2(max(k, 1))))


@dataclass(frozen=True)
class QuadratureConfig:
    """Resolution and convergence policy shared by every quadrature call.

    grid, radial: starting angular points per axis and radial points per axis.
    max_points: cap on the total number of tensor-grid nodes.
    max_axis: cap on points along one adaptively refined circle (and on the
        number of outer nodes in iterated torus integrals).
    rtol: relative change between successive doublings that counts as converged.
    """

    grid: int = 32
    radial: int = 16
    max_points: int = 1 << 22
    rtol: float = 1e-10
    max_axis: int = 1 << 15
    offset: float = 0.0
    compensated: bool = False

    def as_dict(self) -> dict:
        return {
            "grid": self.grid,
            "radial": self.radial,
            "max_points": self.max_points,
            "rtol": self.rtol,
            "max_axis": self.max_axis,
            "offset": self.offset,
            "compensated": self.compensated,
        }


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class Estimate:
    """A quadrature value with its a posteriori error estimate.

    ``error`` is |I_last - I_previous| for adaptive runs and a rounding-level
    bound for rules that are exact on the integrand.
    """

    value: float
    error: float
    converged: bool
    exact: bool = False
    grid: tuple[int, ...] = ()
    radial: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "error": self.error,
            "converged": self.converged,
            "exact": self.exact,
            "grid": list(self.grid),
            "radial": list(self.radial),
        }


@dataclass(frozen=True)
class TorusRule:
    """Uniform tensor rule for the Haar measure on T^n."""

    dim: int
    points_per_axis: tuple[int, ...] | int
    offsets: tuple[float, ...] | float = 0.0

    def __post_init__(self):
        N = np.broadcast_to(np.asarray(self.points_per_axis, dtype=int), (self.dim,))
        off = np.broadcast_to(np.asarray(self.offsets, dtype=float), (self.dim,))
        if self.dim < 1 or np.any(N < 1):
            raise QuadratureError(f"invalid torus rule: dim={self.dim}, N={N}")
        object.__setattr__(self, "points_per_axis", tuple(int(x) for x in N))
        object.__setattr__(self, "offsets", tuple(float(x) for x in off))

    @cached_property
    def axes(self) -> list[np.ndarray]:
        return [np.exp(1j * (2.0 * np.pi * np.arange(N) / N + off))
                for N, off in zip(self.points_per_axis, self.offsets)]

    @cached_property
    def axis_weights(self) -> list[np.ndarray]:
        return [np.full(N, 1.0 / N) for N in self.points_per_axis]

    @property
    def size(self) -> int:
        return int(np.prod(self.points_per_axis))

    def describe(self) -> dict:
        return {"kind": "torus", "dim": self.dim, "grid": list(self.points_per_axis),
                "offsets": list(self.offsets)}


@dataclass(frozen=True)
class DiscRule:
    """Tensor rule for the product measure dA_{q_1-2} x ... x dA_{q_n-2}, q_j > 1."""

    dim: int
    q: tuple[float, ...] | float
    radial: tuple[int, ...] | int
    angular: tuple[int, ...] | int
    offsets: tuple[float, ...] | float = 0.0

    def __post_init__(self):
        q = np.broadcast_to(np.asarray(self.q, dtype=float), (self.dim,))
        R = np.broadcast_to(np.asarray(self.radial, dtype=int), (self.dim,))
        N = np.broadcast_to(np.asarray(self.angular, dtype=int), (self.dim,))
        off = np.broadcast_to(np.asarray(self.offsets, dtype=float), (self.dim,))
        if np.any(q <= 1.0):
            raise QuadratureError(f"DiscRule needs q > 1 on every axis (q = 1 is the torus), got {q}")
        if np.any(R < 1) or np.any(N < 1):
            raise QuadratureError("radial and angular point counts must be positive")
        object.__setattr__(self, "q", tuple(float(x) for x in q))
        object.__setattr__(self, "radial", tuple(int(x) for x in R))
        object.__setattr__(self, "angular", tuple(int(x) for x in N))
        object.__setattr__(self, "offsets", tuple(float(x) for x in off))

    @staticmethod
    def radial_rule(q: float, R: int) -> tuple[np.ndarray, np.ndarray]:
        """Nodes r_i and weights for int_0^1 g(r) (q-1)(1-r^2)^(q-2) 2r dr.

        Gauss-Jacobi in t = r^2 with weight (1-t)^(q-2); exact for
        polynomials in t of degree <= 2R - 1.  Weights are normalized to sum
        to one, which is the total mass of the measure.
        """
        x, w = roots_jacobi(R, q - 2.0, 0.0)
        t = (1.0 + x) / 2.0
        return np.sqrt(t), w / np.sum(w)

    @cached_property
    def _axis_data(self) -> list[tuple[np.ndarray, np.ndarray]]:
        out = []
        for q, R, N, off in zip(self.q, self.radial, self.angular, self.offsets):
            r, wr = self.radial_rule(q, R)
            zeta = np.exp(1j * (2.0 * np.pi * np.arange(N) / N + off))
            out.append(((r[:, None] * zeta[None, :]).reshape(-1), np.repeat(wr / N, N)))
        return out

    @property
    def axes(self) -> list[np.ndarray]:
        return [pts for pts, _ in self._axis_data]

    @property
    def axis_weights(self) -> list[np.ndarray]:
        return [w for _, w in self._axis_data]

    @property
    def size(self) -> int:
        return int(np.prod([R * N for R, N in zip(self.radial, self.angular)]))

    def describe(self) -> dict:
        return {"kind": "disc", "dim": self.dim, "q": list(self.q), "radial": list(self.radial),
                "grid": list(self.angular), "offsets": list(self.offsets)}


def make_rule(q: float, n: int, grid: int | Sequence[int], radial: int | Sequence[int],
              offset: float = 0.0) -> TorusRule | DiscRule:
    """Rule for dA_{q-2} on U^n; q = 1 is routed to the Haar measure on T^n."""
    if q < 1.0:
        raise QuadratureError(f"no integral representation for q < 1 (got q={q})")
    if q == 1.0:
        return TorusRule(n, grid, offset)
    return DiscRule(n, q, radial, grid, offset)


def _weighted_sum(values: np.ndarray, weights: list[np.ndarray], compensated: bool):
    w = weights[0]
    for wj in weights[1:]:
        w = np.multiply.outer(w, wj)
    terms = np.broadcast_to(values, w.shape) * w
    if not compensated:
        return terms.sum()
    flat = terms.reshape(-1)
    if np.iscomplexobj(flat):
        return complex(math.fsum(flat.real), math.fsum(flat.imag))
    return math.fsum(flat)


def _evaluate(rule, integrand: Callable) -> np.ndarray:
    mesh = np.meshgrid(*rule.axes, indexing="ij", sparse=True)
    values = np.asarray(integrand(*mesh))
    full_shape = tuple(len(a) for a in rule.axes)
    values = np.broadcast_to(values, full_shape)
    bad = ~np.isfinite(values)
    if np.any(bad):
        idx = tuple(int(i[0]) for i in np.nonzero(bad))
        node = tuple(complex(a[i]) for a, i in zip(rule.axes, idx))
        raise QuadratureError(f"non-finite integrand value at node {node}")
    return values


def _finish(total):
    if np.iscomplexobj(total) and np.imag(total) == 0:
        return float(np.real(total))
    return complex(total) if np.iscomplexobj(total) else float(total)


def integrate_torus(rule: TorusRule, integrand: Callable, compensated: bool = False):
    """Weighted sum of ``integrand`` over the torus grid, axis-major order."""
    if not isinstance(rule, TorusRule):
        raise QuadratureError("integrate_torus needs a TorusRule")
    return _finish(_weighted_sum(_evaluate(rule, integrand), rule.axis_weights, compensated))


def integrate_polydisc(rule: DiscRule | TorusRule, integrand: Callable, compensated: bool = False):
    """Integral against dA_{q-2} on U^n; a TorusRule stands for the q = 1 convention."""
    return _finish(_weighted_sum(_evaluate(rule, integrand), rule.axis_weights, compensated))


integrate = integrate_polydisc


def beta_moment(k: int, q: float) -> float:
    """int |z|^(2k) dA_{q-2}(z) = (q - 1) B(k + 1, q - 1); equal to 1 at q = 1."""
    if q == 1.0:
        return 1.0
    return float((q - 1.0) * beta_fn(k + 1, q - 1.0))


def adaptive_integral(integrand: Callable, q: float, n: int, config: QuadratureConfig = DEFAULT_CONFIG,
                      grid: Sequence[int] | int | None = None,
                      radial: Sequence[int] | int | None = None) -> Estimate:
    """Integrate against dA_{q-2} (torus when q = 1), doubling N and R until stable.

    Axes whose starting grid is 1 stay at 1 (the integrand does not depend
    on them).  Stops when successive values differ by less than
    ``config.rtol`` relative, or when the next rule would exceed
    ``config.max_points``; in that case ``converged`` is False.
    """
    N = np.broadcast_to(np.asarray(config.grid if grid is None else grid, dtype=int), (n,)).copy()
    R = np.broadcast_to(np.asarray(config.radial if radial is None else radial, dtype=int), (n,)).copy()
    active = N > 1

    def size(N, R):
        return int(np.prod(N if q == 1.0 else N * R))

    def run(N, R):
        rule = make_rule(q, n, tuple(N), tuple(R), config.offset)
        return integrate_polydisc(rule, integrand, config.compensated)

    torus = q == 1.0
    if torus and not np.any(active):
        return Estimate(_real(run(N, R)), 0.0, True, True, tuple(int(x) for x in N))

    def estimate(value, err, converged):
        return Estimate(_real(value), float(err), converged, False, tuple(int(x) for x in N),
                        () if torus else tuple(int(x) for x in R))

    prev, err = run(N, R), math.inf
    while True:
        N2 = np.where(active, 2 * N, N)
        R2 = R if torus else 2 * R
        if size(N2, R2) > config.max_points:
            return estimate(prev, err, False)
        cur = run(N2, R2)
        N, R = N2, R2
        err = abs(cur - prev)
        if err <= config.rtol * max(abs(cur), 1e-300):
            return estimate(cur, err, True)
        prev = cur


def _real(x):
    return float(np.real(x)) if np.isrealobj(x) or np.imag(x) == 0 else complex(x)


def _even_integer(p: float) -> bool:
    return p > 0 and float(p).is_integer() and int(p) % 2 == 0


def circle_power_means(rows: np.ndarray, p: float, rtol: float, n_start: int, n_max: int,
                       chunk_points: int = 1 << 20) -> tuple[np.ndarray, np.ndarray, int]:
    """Per-row mean of |g(zeta)|^p over T for one-variable polynomials g (coefficient rows).

    Rows are refined independently by doubling N until the relative change
    is below ``rtol`` or N reaches ``n_max``.
    """
    M, width = rows.shape
    N = max(n_start, next_pow2(width))

    def means(block: np.ndarray, N: int) -> np.ndarray:
        out = np.empty(block.shape[0])
        step = max(1, chunk_points // N)
        for i in range(0, block.shape[0], step):
            part = block[i:i + step]
            padded = np.zeros((part.shape[0], N), dtype=complex)
            padded[:, :width] = part
            vals = np.abs(np.fft.ifft(padded, axis=1) * N) ** p
            out[i:i + step] = vals.mean(axis=1)
        return out

    vals = means(rows, N)
    err = np.full(M, math.inf)
    todo = np.ones(M, dtype=bool)
    while np.any(todo) and 2 * N <= n_max:
        N *= 2
        idx = np.nonzero(todo)[0]
        new = means(rows[idx], N)
        e = np.abs(new - vals[idx])
        vals[idx] = new
        err[idx] = e
        todo[idx] = e > rtol * np.maximum(new, 1e-300)
    return vals, err, N


def torus_power_mean(f: PolySeries, p: float, config: QuadratureConfig = DEFAULT_CONFIG) -> Estimate:
    """int_{T^n} |f(zeta)|^p dm_n(zeta) for a polynomial series f.

    Even integer p: |f|^p is a trigonometric polynomial, so a grid with
    N_j > max(2, p/2) D_j per axis is exact.  Otherwise the integral is
    iterated: an adaptive one-variable rule along the last variable inside
    a uniform grid over the others, doubled until two successive values
    agree to ``config.rtol``.
    """
    if not p > 0:
        raise QuadratureError(f"exponent p must be positive, got {p}")
    f = f.trimmed()
    D = np.asarray(f.max_degree)
    if _even_integer(p):
        N = np.array([next_pow2(max(2.0, p / 2.0) * d + 1) if d > 0 else 1 for d in D])
        vals = np.abs(f.on_torus(N, config.offset)) ** p
        total = float(_weighted_sum(vals, [np.full(k, 1.0 / k) for k in N], config.compensated))
        err = 64 * np.finfo(float).eps * total
        return Estimate(total, float(err), True, True, tuple(int(x) for x in N))
    # variables the polynomial does not depend on integrate out trivially
    coeffs = f.coeffs.reshape(tuple(s for s in f.coeffs.shape if s > 1) or (1,))
    if config.offset:
        for j in range(coeffs.ndim):
            shape = [1] * coeffs.ndim
            shape[j] = coeffs.shape[j]
            coeffs = coeffs * np.exp(1j * config.offset * np.arange(coeffs.shape[j])).reshape(shape)
    grid = tuple(1 if d == 0 else 0 for d in D)
    if coeffs.size == 1:
        return Estimate(abs(complex(coeffs.reshape(-1)[0])) ** p, 0.0, True, True, grid)
    n_inner_max = config.max_axis
    if coeffs.ndim == 1:
        # a single circle is cheap: allow the full point budget
        vals, err, N = circle_power_means(coeffs[None, :], p, config.rtol, config.grid,
                                          max(n_inner_max, config.max_points))
        return Estimate(float(vals[0]), float(err[0]), bool(err[0] <= config.rtol * vals[0]), False, (N,))
    outer_shape = coeffs.shape[:-1]
    N_out = np.array([max(config.grid, next_pow2(s)) for s in outer_shape])

    def level(N_out):
        # restricted coefficient rows g_zeta'(z_n) for every outer node zeta'
        folded = np.zeros(tuple(int(k) for k in N_out) + coeffs.shape[-1:], dtype=complex)
        idx = np.ix_(*(np.arange(s) % k for s, k in zip(outer_shape, N_out)), np.arange(coeffs.shape[-1]))
        np.add.at(folded, idx, coeffs)
        rows = np.fft.ifftn(folded, axes=tuple(range(len(N_out)))) * float(np.prod(N_out))
        rows = rows.reshape(-1, coeffs.shape[-1])
        vals, err, N_in = circle_power_means(rows, p, config.rtol, config.grid, n_inner_max)
        return float(vals.mean()), float(err.mean()), N_in

    prev, inner_err, N_in = level(N_out)
    err = math.inf
    while True:
        N2 = 2 * N_out
        if np.prod(N2) > config.max_axis:
            return Estimate(prev, err + inner_err, False, False, tuple(int(x) for x in N_out) + (N_in,))
        cur, inner_err, N_in = level(N2)
        N_out = N2
        err = abs(cur - prev)
        if err <= config.rtol * max(cur, 1e-300):
            return Estimate(cur, err + inner_err, inner_err <= config.rtol * cur, False,
                            tuple(int(x) for x in N_out) + (N_in,))
        prev = cur


def hardy_norm(f: PolySeries, p: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """H^p norm (int_{T^n} |f|^p dm_n)^(1/p) of a polynomial series.

    For polynomials the boundary function is f itself and M_p(f, r) is
    nondecreasing in r, so the supremum over r is the boundary value.
    """
    return torus_power_mean(f, p, config).value ** (1.0 / p)


def mp_at_radius(f: PolySeries, p: float, r: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integral mean M_p(f, r) = (int_{T^n} |f(r zeta)|^p dm_n)^(1/p)."""
    if not p > 0:
        raise QuadratureError(f"exponent p must be positive, got {p}")
    if not 0.0 <= r <= 1.0:
        raise QuadratureError(f"radius must lie in [0, 1], got {r}")
    if r == 0.0:
        return abs(complex(f.coeffs.reshape(-1)[0]))
    return hardy_norm(f.dilate(r), p, config)

"""One-variable Riesz factorization f = B h, outer functions and zero-free powers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .quadrature import DEFAULT_CONFIG, QuadratureConfig, torus_power_mean
from .series import PolySeries, SeriesError

__all__ = [
    "BOUNDARY_BAND",
    "FactorizationError",
    "RootSet",
    "polynomial_roots",
    "BlaschkeProduct",
    "blaschke_eval",
    "BoundaryModulus",
    "OuterFunction",
    "outer_function",
    "RieszFactorization",
    "riesz_factorize",
    "FractionalPower",
    "fractional_power",
    "boundary_power_mean",
]

BOUNDARY_BAND = 1e-9
RESIDUAL_FACTOR = 1e-10


class FactorizationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicity, their residuals |f(a)| and inside/boundary/outside labels."""

    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    labels: tuple[str, ...]
    delta: float

    def of_kind(self, label: str) -> list[complex]:
        return [a for a, lab in zip(self.roots, self.labels) if lab == label]

    @property
    def inside(self) -> list[complex]:
        return self.of_kind("inside")

    @property
    def outside(self) -> list[complex]:
        return self.of_kind("outside")

    @property
    def boundary(self) -> list[complex]:
        return self.of_kind("boundary")

    def as_dict(self) -> dict:
        return {
            "roots": [[a.real, a.imag] for a in self.roots],
            "residuals": list(self.residuals),
            "labels": list(self.labels),
        }


def _as_univariate(f: PolySeries) -> np.ndarray:
    if f.dim != 1:
        raise FactorizationError(f"expected a one-variable series, got dim={f.dim}")
    c = np.asarray(f.coeffs)
    if not np.any(c):
        raise FactorizationError("the zero polynomial has no factorization")
    return c[: int(np.nonzero(c)[0].max()) + 1]


def polynomial_roots(f: PolySeries, delta: float = BOUNDARY_BAND, polish: int = 3) -> RootSet:
    """All roots of a one-variable polynomial via companion-matrix eigenvalues.

    Each root gets a few Newton steps and must satisfy
    |f(a)| < 1e-10 * ||coeffs||_1.  Roots with ||a| - 1| <= delta are labelled
    ``boundary``.
    """
    c = _as_univariate(f)
    scale = float(np.sum(np.abs(c)))
    low = int(np.nonzero(c)[0].min())
    roots = [0j] * low
    if len(c) - 1 > low:
        core = c[low:]
        found = np.roots(core[::-1])
        dcore = core[1:] * np.arange(1, len(core))
        for a in found:
            for _ in range(polish):
                fa = np.polyval(core[::-1], a)
                da = np.polyval(dcore[::-1], a)
                if da == 0 or fa == 0:
                    break
                step = fa / da
                cand = a - step
                if abs(np.polyval(core[::-1], cand)) >= abs(fa):
                    break
                a = cand
            roots.append(complex(a))
    poly = c[::-1]
    residuals = [float(abs(np.polyval(poly, a))) for a in roots]
    bad = [(a, r) for a, r in zip(roots, residuals) if not r < RESIDUAL_FACTOR * scale]
    if bad:
        raise FactorizationError(f"root residual certification failed: {bad[:3]}")
    order = sorted(range(len(roots)), key=lambda i: (abs(roots[i]), np.angle(roots[i])))
    roots = [roots[i] for i in order]
    residuals = [residuals[i] for i in order]
    labels = ["boundary" if abs(abs(a) - 1.0) <= delta else "inside" if abs(a) < 1.0 else "outside"
              for a in roots]
    return RootSet(tuple(roots), tuple(residuals), tuple(labels), delta)


@dataclass(frozen=True)
class BlaschkeProduct:
    """B(z) = z^origin_order * prod_a (|a|/a) (a - z) / (1 - conj(a) z)."""

    zeros: tuple[complex, ...] = ()
    origin_order: int = 0
    delta: float = BOUNDARY_BAND

    def __post_init__(self):
        zeros = tuple(complex(a) for a in self.zeros)
        if any(a == 0 for a in zeros):
            raise FactorizationError("zeros at the origin belong in origin_order")
        if any(abs(a) >= 1.0 - self.delta for a in zeros):
            raise FactorizationError(f"Blaschke zeros must satisfy |a| < 1 - {self.delta:g}")
        if self.origin_order < 0:
            raise FactorizationError("origin_order must be non-negative")
        object.__setattr__(self, "zeros", zeros)

    @classmethod
    def from_zeros(cls, zeros: Sequence[complex], delta: float = BOUNDARY_BAND) -> "BlaschkeProduct":
        zeros = [complex(a) for a in zeros]
        return cls(tuple(a for a in zeros if a != 0), sum(1 for a in zeros if a == 0), delta)

    @property
    def degree(self) -> int:
        return len(self.zeros) + self.origin_order

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = z ** self.origin_order if self.origin_order else np.ones_like(z)
        for a in self.zeros:
            out = out * (abs(a) / a) * (a - z) / (1.0 - np.conj(a) * z)
        return complex(out) if out.ndim == 0 else out

    def as_dict(self) -> dict:
        return {"zeros": [[a.real, a.imag] for a in self.zeros], "origin_order": self.origin_order}


def blaschke_eval(B: BlaschkeProduct, z):
    return B(z)


@dataclass(frozen=True)
class BoundaryModulus:
    """Positive samples U(zeta_k) at zeta_k = exp(2 pi i k / N)."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float).reshape(-1)
        if s.size == 0:
            raise FactorizationError("boundary modulus needs at least one sample")
        if not np.all(np.isfinite(s)) or np.any(s <= 0):
            raise FactorizationError("boundary modulus samples must be finite and strictly positive")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def size(self) -> int:
        return self.samples.size

    @classmethod
    def from_function(cls, U: Callable, N: int) -> "BoundaryModulus":
        zeta = np.exp(2j * np.pi * np.arange(N) / N)
        return cls(np.asarray(U(zeta), dtype=float))

    @classmethod
    def load(cls, path: str | Path) -> "BoundaryModulus":
        """Two whitespace-separated columns: angle fraction k/N in [0, 1), value > 0.

        ``#`` starts a comment.  Rows must be the uniform grid in order.
        """
        rows = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FactorizationError(f"{path}:{lineno}: expected two columns")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise FactorizationError(f"{path}:{lineno}: {exc}") from exc
        if not rows:
            raise FactorizationError(f"{path}: no samples")
        angles = np.array([r[0] for r in rows])
        N = len(rows)
        if np.max(np.abs(angles - np.arange(N) / N)) > 1e-12:
            raise FactorizationError(f"{path}: angle fractions must be k/N for k = 0..N-1 in order")
        return cls(np.array([r[1] for r in rows]))

    def dump(self, path: str | Path) -> None:
        N = self.size
        lines = ["# angle_fraction value"]
        lines += [f"{k / N!r} {v!r}" for k, v in enumerate(self.samples.tolist())]
        Path(path).write_text("\n".join(lines) + "\n")


class OuterFunction:
    """f(z) = exp( int_T (zeta + z)/(zeta - z) log U(zeta) dm_1(zeta) ), trapezoid rule on the samples."""

    def __init__(self, U: BoundaryModulus, delta_eval: float | None = None):
        self.U = U
        N = U.size
        self.zeta = np.exp(2j * np.pi * np.arange(N) / N)
        self.log_u = np.log(U.samples)
        self.delta_eval = 1.0 / N if delta_eval is None else float(delta_eval)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1.0 - self.delta_eval):
            raise FactorizationError(
                f"outer function evaluated too close to the circle (|z| >= 1 - {self.delta_eval:g})")
        flat = z.reshape(-1)
        out = np.empty(flat.shape, dtype=complex)
        step = max(1, (1 << 22) // self.zeta.size)
        for i in range(0, flat.size, step):
            zz = flat[i:i + step, None]
            herglotz = (self.zeta[None, :] + zz) / (self.zeta[None, :] - zz)
            out[i:i + step] = np.exp(np.mean(herglotz * self.log_u[None, :], axis=1))
        out = out.reshape(z.shape)
        return complex(out) if out.ndim == 0 else out

    def boundary_deviation(self) -> float:
        """max_k | |f(r zeta_k)| - U(zeta_k) | / U(zeta_k) at r = 1 - 10/N."""
        r = 1.0 - 10.0 / self.zeta.size
        vals = np.abs(self(r * self.zeta))
        return float(np.max(np.abs(vals - self.U.samples) / self.U.samples))


def outer_function(U: BoundaryModulus, z=None):
    """The outer function of U; evaluated at ``z`` when given."""
    F = OuterFunction(U)
    return F if z is None else F(z)


@dataclass
class RieszFactorization:
    """f = B h with B the finite Blaschke product of the inside zeros."""

    f: PolySeries
    p: float
    roots: RootSet
    B: BlaschkeProduct
    h_series: PolySeries
    norm_f: float
    norm_h: float
    min_abs_h: float
    errors: tuple[float, float] = (0.0, 0.0)

    def h(self, z):
        return self.h_series(z) if np.ndim(z) == 0 else self.h_series(np.asarray(z, dtype=complex))

    @property
    def norm_check(self) -> float:
        return self.norm_h

    @property
    def relative_norm_gap(self) -> float:
        return abs(self.norm_h - self.norm_f) / max(self.norm_f, 1e-300)

    def as_dict(self) -> dict:
        return {
            "kind": "factorization",
            "p": self.p,
            "roots": self.roots.as_dict(),
            "blaschke": self.B.as_dict(),
            "norm_f": self.norm_f,
            "norm_h": self.norm_h,
            "relative_norm_gap": self.relative_norm_gap,
            "min_abs_h": self.min_abs_h,
            "quadrature_errors": list(self.errors),
        }


def _min_modulus_grid(g: PolySeries, r_max: float = 0.999, radii: int = 64, angles: int = 1024) -> float:
    r = np.linspace(0.0, r_max, radii)
    zeta = np.exp(2j * np.pi * np.arange(angles) / angles)
    return float(np.min(np.abs(g((r[:, None] * zeta[None, :]).reshape(-1)))))


def riesz_factorize(f: PolySeries, p: float, config: QuadratureConfig = DEFAULT_CONFIG,
                    delta: float = BOUNDARY_BAND) -> RieszFactorization:
    """Split a one-variable polynomial into its Blaschke product and zero-free factor.

    With f = c z^m prod (z - a) prod (z - b), |a| < 1 < |b|, the zero-free
    factor is the polynomial h = c prod (z - b) prod (-a/|a|)(1 - conj(a) z),
    so |h| = |f| on the circle and the H^p norms coincide.
    """
    c = _as_univariate(f)
    roots = polynomial_roots(PolySeries(c), delta)
    if roots.boundary:
        raise FactorizationError(f"roots within {delta:g} of the unit circle: {roots.boundary}")
    inside = roots.inside
    B = BlaschkeProduct.from_zeros(inside, delta)
    lead = complex(c[-1])
    h = PolySeries.from_roots(roots.outside, lead)
    for a in B.zeros:
        h = h * PolySeries([1.0, -np.conj(a)]) * (-a / abs(a))
    ef = torus_power_mean(f, p, config)
    eh = torus_power_mean(h, p, config)
    return RieszFactorization(
        f=f, p=float(p), roots=roots, B=B, h_series=h,
        norm_f=ef.value ** (1.0 / p), norm_h=eh.value ** (1.0 / p),
        min_abs_h=_min_modulus_grid(h), errors=(ef.error, eh.error),
    )


class FractionalPower:
    """z -> exp(beta log h(z)) for a zero-free h, branch fixed by radial continuation from 0.

    The phase of h is tracked along the segment [0, z] with an increasing
    number of steps until every step changes the argument by less than pi/4.
    """

    def __init__(self, h: Callable, beta: float, steps: int = 64, max_steps: int = 1 << 14,
                 zero_tol: float = 1e-14):
        if not beta > 0:
            raise FactorizationError(f"beta must be positive, got {beta}")
        self.h, self.beta = h, float(beta)
        self.steps, self.max_steps, self.zero_tol = steps, max_steps, zero_tol
        h0 = complex(np.asarray(h(np.zeros(1, dtype=complex)))[0])
        if h0 == 0:
            raise FactorizationError("h vanishes at the origin")
        self.h0 = h0

    def log(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        K = self.steps
        while True:
            t = np.linspace(0.0, 1.0, K + 1)
            path = t[None, :] * flat[:, None]
            vals = np.asarray(self.h(path.reshape(-1))).reshape(path.shape)
            mod = np.abs(vals)
            if np.any(mod <= self.zero_tol * abs(self.h0)):
                bad = flat[np.nonzero(np.any(mod <= self.zero_tol * abs(self.h0), axis=1))[0][0]]
                raise FactorizationError(f"zero crossing while tracking the phase towards z={bad}")
            incr = np.angle(vals[:, 1:] / vals[:, :-1])
            if np.all(np.abs(incr) < np.pi / 4):
                break
            if 2 * K > self.max_steps:
                raise FactorizationError("phase tracking did not resolve; h is (nearly) zero on a path")
            K *= 2
        phase = np.angle(self.h0) + np.sum(incr, axis=1)
        out = (np.log(mod[:, -1]) + 1j * phase).reshape(z.shape)
        return complex(out) if out.ndim == 0 else out

    def __call__(self, z):
        return np.exp(self.beta * self.log(z))


def fractional_power(h: Callable | PolySeries, beta: float, **kwargs) -> FractionalPower:
    if isinstance(h, PolySeries):
        if h.dim != 1:
            raise SeriesError("fractional_power works on one-variable functions")
        series = h
        h = lambda z: series(np.asarray(z, dtype=complex))  # noqa: E731
    return FractionalPower(h, beta, **kwargs)


def boundary_power_mean(g: Callable, p: float, config: QuadratureConfig = DEFAULT_CONFIG,
                        n_start: int = 64) -> tuple[float, float]:
    """int_T |g|^p dm_1 for a callable continuous up to the circle; returns (value, error)."""
    N = n_start
    zeta = np.exp(2j * np.pi * np.arange(N) / N)
    prev = float(np.mean(np.abs(g(zeta)) ** p))
    err = math.inf
    while 2 * N <= config.max_axis:
        N *= 2
        zeta = np.exp(2j * np.pi * np.arange(N) / N)
        cur = float(np.mean(np.abs(g(zeta)) ** p))
        err = abs(cur - prev)
        prev = cur
        if err <= config.rtol * cur:
            break
    return prev, err

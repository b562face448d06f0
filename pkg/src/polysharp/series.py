"""Truncated multivariate power series on the unit polydisc.

A :class:`PolySeries` stores the Taylor coefficients a_alpha of an analytic
function as a dense complex tensor of shape ``(D_1 + 1, ..., D_n + 1)``
together with a bound on the sup-norm (over the closed polydisc) of the
part of the expansion that was discarded when it was truncated.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "MultiIndex",
    "WeightVector",
    "PolySeries",
    "SeriesError",
    "pochhammer",
    "pochhammer_multi",
    "weight_ratios",
    "multiply",
    "kernel_series",
    "kernel_eval",
    "extremal_function",
    "load_series",
    "dump_series",
    "MAX_KERNEL_DEGREE",
]

# hard per-axis degree cap for automatically sized kernel expansions
MAX_KERNEL_DEGREE = 4096


class SeriesError(ValueError):
    """Raised for malformed series, dimension mismatches and unreachable tolerances."""


MultiIndex = tuple[int, ...]


def _check_multi_index(alpha: Sequence[int]) -> MultiIndex:
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise SeriesError(f"multi-index entries must be non-negative: {alpha}")
    return alpha


@dataclass(frozen=True)
class WeightVector:
    """Strictly positive exponent vector q = (q_1, ..., q_n)."""

    entries: tuple[float, ...]

    def __post_init__(self):
        entries = tuple(float(q) for q in self.entries)
        if not entries:
            raise SeriesError("weight vector must have at least one entry")
        if any(not (q > 0.0) or not math.isfinite(q) for q in entries):
            raise SeriesError(f"weight entries must be finite and > 0: {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, q: float | Sequence[float] | "WeightVector", n: int | None = None) -> "WeightVector":
        """Build from a scalar (replicated ``n`` times) or a sequence."""
        if isinstance(q, WeightVector):
            if n is not None and q.dim != n:
                raise SeriesError(f"weight dimension {q.dim} does not match n={n}")
            return q
        if np.isscalar(q):
            return cls((float(q),) * (1 if n is None else n))
        q = tuple(q)
        if n is not None and len(q) != n:
            raise SeriesError(f"weight dimension {len(q)} does not match n={n}")
        return cls(q)

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def is_scalar(self) -> bool:
        return len(set(self.entries)) == 1

    def __add__(self, other: "WeightVector") -> "WeightVector":
        if other.dim != self.dim:
            raise SeriesError("cannot add weight vectors of different dimension")
        return WeightVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __iter__(self):
        return iter(self.entries)


def pochhammer(q: float, beta: int) -> float:
    """Shifted factorial (q)_beta = q (q + 1) ... (q + beta - 1), with (q)_0 = 1.

    Overflow yields ``inf``; callers check finiteness.
    """
    if beta < 0:
        raise SeriesError(f"beta must be non-negative, got {beta}")
    out = 1.0
    with np.errstate(over="ignore"):
        for i in range(beta):
            out *= q + i
    return out


def pochhammer_multi(q: WeightVector | Sequence[float], alpha: Sequence[int]) -> float:
    """(q)_alpha = prod_j (q_j)_{alpha_j}."""
    q = tuple(q)
    alpha = _check_multi_index(alpha)
    if len(q) != len(alpha):
        raise SeriesError("weight and multi-index dimensions differ")
    out = 1.0
    for qj, aj in zip(q, alpha):
        out *= pochhammer(qj, aj)
    return out


def weight_ratios(q: float, degree: int) -> np.ndarray:
    """Array of k!/(q)_k for k = 0..degree, computed as a running product."""
    k = np.arange(degree, dtype=float)
    # overflow to inf is left for callers to detect
    with np.errstate(over="ignore", divide="ignore"):
        return np.concatenate(([1.0], np.cumprod((k + 1.0) / (q + k))))


def _binomial_coefficients(q: float, degree: int) -> np.ndarray:
    """(q)_k / k! for k = 0..degree."""
    k = np.arange(degree, dtype=float)
    return np.concatenate(([1.0], np.cumprod((q + k) / (k + 1.0))))


class PolySeries:
    """Immutable truncated Taylor expansion sum_alpha a_alpha z^alpha.

    Parameters
    ----------
    coeffs:
        Complex array of shape ``(D_1 + 1, ..., D_n + 1)``; entry ``alpha``
        is a_alpha.
    tail_bound:
        Upper bound for the sup-norm on the closed polydisc of the terms
        dropped by truncation (0 for genuine polynomials).
    """

    __slots__ = ("_coeffs", "_tail")

    def __init__(self, coeffs, tail_bound: float = 0.0):
        arr = np.array(coeffs, dtype=complex)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if arr.size == 0:
            raise SeriesError("coefficient array must be non-empty")
        if not np.all(np.isfinite(arr)):
            raise SeriesError("coefficients must be finite")
        tail_bound = float(tail_bound)
        if not (tail_bound >= 0.0):
            raise SeriesError(f"tail bound must be non-negative, got {tail_bound}")
        arr.setflags(write=False)
        self._coeffs = arr
        self._tail = tail_bound

    # construction helpers

    @classmethod
    def constant(cls, value: complex, n: int = 1) -> "PolySeries":
        return cls(np.full((1,) * n, value, dtype=complex))

    @classmethod
    def zero(cls, n: int = 1) -> "PolySeries":
        return cls.constant(0.0, n)

    @classmethod
    def monomial(cls, alpha: Sequence[int], value: complex = 1.0) -> "PolySeries":
        alpha = _check_multi_index(alpha)
        arr = np.zeros(tuple(a + 1 for a in alpha), dtype=complex)
        arr[alpha] = value
        return cls(arr)

    @classmethod
    def from_dict(cls, coeffs: dict, n: int | None = None, degree: Sequence[int] | None = None,
                  tail_bound: float = 0.0) -> "PolySeries":
        """Build from a mapping ``alpha -> a_alpha``; missing indices are zero."""
        keys = [_check_multi_index(a) for a in coeffs]
        if n is None:
            if keys:
                n = len(keys[0])
            elif degree is not None:
                n = len(degree)
            else:
                raise SeriesError("cannot infer dimension of an empty coefficient map")
        if any(len(a) != n for a in keys):
            raise SeriesError("all multi-indices must have length n")
        if degree is None:
            degree = [max((a[j] for a in keys), default=0) for j in range(n)]
        degree = tuple(int(d) for d in degree)
        if len(degree) != n:
            raise SeriesError("degree cap must have length n")
        arr = np.zeros(tuple(d + 1 for d in degree), dtype=complex)
        for alpha, value in zip(keys, coeffs.values()):
            if any(a > d for a, d in zip(alpha, degree)):
                raise SeriesError(f"multi-index {alpha} exceeds degree cap {degree}")
            arr[alpha] = value
        return cls(arr, tail_bound)

    @classmethod
    def from_roots(cls, roots: Sequence[complex], leading: complex = 1.0) -> "PolySeries":
        """One-variable polynomial ``leading * prod (z - r)``."""
        c = np.poly(np.asarray(roots, dtype=complex)) if len(roots) else np.ones(1)
        return cls(leading * np.asarray(c, dtype=complex)[::-1])

    # basic attributes

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def dim(self) -> int:
        return self._coeffs.ndim

    @property
    def max_degree(self) -> tuple[int, ...]:
        return tuple(s - 1 for s in self._coeffs.shape)

    @property
    def tail_bound(self) -> float:
        return self._tail

    def coefficient(self, alpha: Sequence[int]) -> complex:
        alpha = _check_multi_index(alpha)
        if len(alpha) != self.dim:
            raise SeriesError("multi-index dimension mismatch")
        if any(a > d for a, d in zip(alpha, self.max_degree)):
            return 0j
        return complex(self._coeffs[alpha])

    def items(self) -> Iterator[tuple[MultiIndex, complex]]:
        """Nonzero coefficients in lexicographic order of alpha."""
        for alpha in itertools.product(*(range(s) for s in self._coeffs.shape)):
            c = self._coeffs[alpha]
            if c != 0:
                yield alpha, complex(c)

    def coef_l1(self) -> float:
        """Coefficient 1-norm, a bound for sup |f| on the closed polydisc."""
        return float(np.sum(np.abs(self._coeffs)))

    def is_zero(self) -> bool:
        return not np.any(self._coeffs) and self._tail == 0.0

    def effective_degree(self) -> tuple[int, ...]:
        """Largest exponent actually carrying a nonzero coefficient, per axis."""
        nz = np.nonzero(self._coeffs)
        if len(nz[0]) == 0:
            return (0,) * self.dim
        return tuple(int(ix.max()) for ix in nz)

    def trimmed(self) -> "PolySeries":
        """Drop trailing zero slabs so that ``max_degree == effective_degree``."""
        deg = self.effective_degree()
        if deg == self.max_degree:
            return self
        return PolySeries(self._coeffs[tuple(slice(0, d + 1) for d in deg)], self._tail)

    def padded(self, degree: Sequence[int]) -> "PolySeries":
        """Same series with a larger degree cap (extra coefficients zero)."""
        degree = tuple(degree)
        if len(degree) != self.dim or any(d < e for d, e in zip(degree, self.max_degree)):
            raise SeriesError(f"cannot pad degree {self.max_degree} to {degree}")
        arr = np.zeros(tuple(d + 1 for d in degree), dtype=complex)
        arr[tuple(slice(0, s) for s in self._coeffs.shape)] = self._coeffs
        return PolySeries(arr, self._tail)

    def truncate(self, degree: Sequence[int]) -> "PolySeries":
        """Keep alpha with alpha_j <= degree_j; dropped mass is added to the tail."""
        degree = tuple(int(d) for d in degree)
        if len(degree) != self.dim:
            raise SeriesError("degree cap dimension mismatch")
        keep = tuple(slice(0, min(d, e) + 1) for d, e in zip(degree, self.max_degree))
        kept = self._coeffs[keep]
        dropped = self.coef_l1() - float(np.sum(np.abs(kept)))
        return PolySeries(kept, self._tail + max(dropped, 0.0))

    def dilate(self, r: float | Sequence[float]) -> "PolySeries":
        """The series of z -> f(r_1 z_1, ..., r_n z_n)."""
        r = np.broadcast_to(np.asarray(r, dtype=float), (self.dim,))
        arr = self._coeffs
        for j, rj in enumerate(r):
            shape = [1] * self.dim
            shape[j] = arr.shape[j]
            arr = arr * (rj ** np.arange(arr.shape[j])).reshape(shape)
        return PolySeries(arr, self._tail)

    def conj_reflect(self) -> "PolySeries":
        """Coefficients conjugated: the series of z -> conj(f(conj z))."""
        return PolySeries(np.conj(self._coeffs), self._tail)

    # arithmetic

    def _coerce(self, other) -> "PolySeries":
        if isinstance(other, PolySeries):
            if other.dim != self.dim:
                raise SeriesError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        return PolySeries.constant(complex(other), self.dim)

    def __add__(self, other) -> "PolySeries":
        other = self._coerce(other)
        deg = tuple(max(a, b) for a, b in zip(self.max_degree, other.max_degree))
        a, b = self.padded(deg), other.padded(deg)
        return PolySeries(a.coeffs + b.coeffs, self._tail + other._tail)

    __radd__ = __add__

    def __neg__(self) -> "PolySeries":
        return PolySeries(-self._coeffs, self._tail)

    def __sub__(self, other) -> "PolySeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PolySeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PolySeries":
        if isinstance(other, PolySeries):
            return multiply(self, other)
        c = complex(other)
        return PolySeries(self._coeffs * c, self._tail * abs(c))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PolySeries":
        if int(k) != k or k < 0:
            raise SeriesError("only non-negative integer powers are supported")
        out = PolySeries.constant(1.0, self.dim)
        base = self
        k = int(k)
        while k:
            if k & 1:
                out = multiply(out, base)
            k >>= 1
            if k:
                base = multiply(base, base)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolySeries) or other.dim != self.dim:
            return NotImplemented
        deg = tuple(max(a, b) for a, b in zip(self.max_degree, other.max_degree))
        return (np.array_equal(self.padded(deg).coeffs, other.padded(deg).coeffs)
                and self._tail == other._tail)

    __hash__ = None

    def __repr__(self) -> str:
        return f"PolySeries(dim={self.dim}, max_degree={self.max_degree}, tail_bound={self._tail:.3g})"

    # evaluation

    def __call__(self, *z):
        """Evaluate at a point, or at broadcastable arrays of coordinates.

        ``f(z1, ..., zn)`` with scalar coordinates returns a complex number.
        Array coordinates are broadcast against each other; when they form a
        sparse tensor grid (``np.meshgrid(..., sparse=True, indexing="ij")``)
        the evaluation is done by per-axis contraction.
        """
        if len(z) == 1 and self.dim > 1 and np.ndim(z[0]) > 0:
            z = tuple(np.asarray(z[0]).T) if np.ndim(z[0]) > 1 else tuple(z[0])
        if len(z) != self.dim:
            raise SeriesError(f"expected {self.dim} coordinates, got {len(z)}")
        if all(np.ndim(zj) == 0 for zj in z):
            return complex(_horner(self._coeffs, [complex(zj) for zj in z]))
        arrays = [np.asarray(zj, dtype=complex) for zj in z]
        if _is_sparse_grid(arrays):
            axes = [a.reshape(-1) for a in arrays]
            return self.on_grid(axes)
        shape = np.broadcast_shapes(*(a.shape for a in arrays))
        flat = [np.broadcast_to(a, shape).reshape(-1) for a in arrays]
        return self.at_points(np.stack(flat, axis=-1)).reshape(shape)

    def at_points(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at scattered points given as an ``(M, n)`` array."""
        points = np.asarray(points, dtype=complex)
        if points.ndim != 2 or points.shape[1] != self.dim:
            raise SeriesError(f"points must have shape (M, {self.dim})")
        acc = None
        for j in range(self.dim):
            v = points[:, j, None] ** np.arange(self._coeffs.shape[j])
            if acc is None:
                acc = np.tensordot(v, self._coeffs, axes=([1], [0]))
            else:
                acc = np.einsum("mb,mb...->m...", v, acc)
        return acc

    def on_grid(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Values on the tensor grid ``axes[0] x ... x axes[n-1]``."""
        if len(axes) != self.dim:
            raise SeriesError(f"expected {self.dim} axes, got {len(axes)}")
        out = self._coeffs
        for ax in axes:
            ax = np.asarray(ax, dtype=complex).reshape(-1)
            v = ax[:, None] ** np.arange(out.shape[0])
            # contract the leading axis; the new axis is appended last
            out = np.tensordot(out, v, axes=([0], [1]))
        return out

    def on_torus(self, n_points: Sequence[int] | int, offsets: Sequence[float] | float = 0.0) -> np.ndarray:
        """Values at zeta_k = exp(i(2 pi k / N + offset)) on each axis, by FFT."""
        n_points = np.broadcast_to(np.asarray(n_points, dtype=int), (self.dim,))
        offsets = np.broadcast_to(np.asarray(offsets, dtype=float), (self.dim,))
        arr = self._coeffs
        for j, off in enumerate(offsets):
            if off != 0.0:
                shape = [1] * self.dim
                shape[j] = arr.shape[j]
                arr = arr * np.exp(1j * off * np.arange(arr.shape[j])).reshape(shape)
        folded = np.zeros(tuple(int(N) for N in n_points), dtype=complex)
        # alias exponents modulo N: zeta^alpha depends on alpha mod N only
        idx = np.ix_(*(np.arange(s) % N for s, N in zip(arr.shape, n_points)))
        np.add.at(folded, idx, arr)
        return np.fft.ifftn(folded) * float(np.prod(n_points))


def _is_sparse_grid(arrays: list[np.ndarray]) -> bool:
    n = len(arrays)
    if n < 2:
        return arrays[0].ndim == 1
    for j, a in enumerate(arrays):
        if a.ndim != n:
            return False
        if any(s != 1 for k, s in enumerate(a.shape) if k != j):
            return False
    return True


def _horner(coeffs: np.ndarray, z: list[complex]) -> complex:
    # innermost axis first; fixed order keeps evaluation bit-reproducible
    if coeffs.ndim == 1:
        acc = 0j
        for c in coeffs[::-1]:
            acc = acc * z[0] + c
        return acc
    acc = 0j
    for k in range(coeffs.shape[0] - 1, -1, -1):
        acc = acc * z[0] + _horner(coeffs[k], z[1:])
    return acc


def multiply(f: PolySeries, g: PolySeries, max_degree: Sequence[int] | None = None) -> PolySeries:
    """Cauchy product of two series, optionally truncated to ``max_degree``.

    The tail bound of the result is
    ``tail(f) S(g) + tail(g) S(f) + tail(f) tail(g)`` plus the 1-norm of any
    coefficients removed by the degree cap, with S the coefficient 1-norm.
    """
    if f.dim != g.dim:
        raise SeriesError(f"dimension mismatch: {f.dim} vs {g.dim}")
    a, b = f.coeffs, g.coeffs
    if a.size > b.size:
        a, b = b, a
    out_shape = tuple(sa + sb - 1 for sa, sb in zip(a.shape, b.shape))
    out = np.zeros(out_shape, dtype=complex)
    if f.dim == 1:
        out[:] = np.convolve(a, b)
    else:
        for alpha in itertools.product(*(range(s) for s in a.shape)):
            c = a[alpha]
            if c != 0:
                out[tuple(slice(i, i + s) for i, s in zip(alpha, b.shape))] += c * b
    tail = f.tail_bound * g.coef_l1() + g.tail_bound * f.coef_l1() + f.tail_bound * g.tail_bound
    prod = PolySeries(out, tail)
    if max_degree is not None:
        prod = prod.truncate(max_degree)
    return prod


def _kernel_axis(q: float, w: complex, tol: float, hard_cap: int) -> tuple[np.ndarray, float]:
    """Coefficients (q)_k/k! conj(w)^k up to the smallest degree whose tail is below tol."""
    rho = abs(w)
    if rho == 0.0:
        return np.ones(1, dtype=complex), 0.0
    # magnitudes c_k = (q)_k/k! rho^k via the ratio recurrence; stop at the first
    # degree D with rigorous tail c_{D+1} / (1 - s) < tol, s = sup_{k>D} c_{k+1}/c_k
    c = [1.0]
    for D in range(hard_cap + 1):
        c_next = c[-1] * rho * (D + q) / (D + 1)
        s = rho * max(1.0, (D + 1 + q) / (D + 2))
        if s < 1.0:
            tail = c_next / (1.0 - s)
            if tail < tol:
                k = np.arange(D + 1)
                coeffs = _binomial_coefficients(q, D) * np.conj(w) ** k
                return coeffs.astype(complex), tail
        c.append(c_next)
    raise SeriesError(f"kernel tail tolerance {tol:g} unreachable below degree {hard_cap} (|w|={rho})")


def kernel_series(q: WeightVector | float | Sequence[float], w: Sequence[complex] | complex,
                  tol: float = 1e-12, hard_cap: int = MAX_KERNEL_DEGREE) -> PolySeries:
    """Truncated expansion of z -> K_q(z, w) = prod_j (1 - z_j conj(w_j))^(-q_j).

    The coefficient of z^alpha is (q)_alpha / alpha! conj(w)^alpha.  Degrees
    grow per axis until the sup-norm tail bound on the closed polydisc is
    below ``tol``.
    """
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    n = w.size
    q = WeightVector.of(q, n)
    if np.any(np.abs(w) >= 1.0):
        raise SeriesError(f"kernel point must lie inside the polydisc, got |w| = {np.abs(w)}")
    if not tol > 0:
        raise SeriesError("tol must be positive")
    target = tol / n
    while True:
        axes = [_kernel_axis(qj, wj, target, hard_cap) for qj, wj in zip(q, w)]
        sums = [float(np.sum(np.abs(c))) for c, _ in axes]
        tails = [t for _, t in axes]
        # sup |K - T| <= prod(S_j + e_j) - prod(S_j) for T = prod of truncations
        bound = tails[0] if n == 1 else float(np.prod([s + e for s, e in zip(sums, tails)]) - np.prod(sums))
        if bound <= tol:
            break
        target /= 2.0
    arr = axes[0][0]
    for c, _ in axes[1:]:
        arr = np.multiply.outer(arr, c)
    return PolySeries(arr, max(bound, 0.0))


def kernel_eval(q: WeightVector | float | Sequence[float], z, w) -> complex:
    """Closed form prod_j (1 - z_j conj(w_j))^(-q_j), principal branch."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if z.shape != w.shape:
        raise SeriesError("z and w must have the same dimension")
    q = np.asarray(WeightVector.of(q, z.size).entries)
    if np.any(np.abs(z) >= 1) or np.any(np.abs(w) >= 1):
        raise SeriesError("kernel arguments must lie in the open polydisc")
    return complex(np.prod((1.0 - z * np.conj(w)) ** (-q)))


def extremal_function(exponent, w, variant: str = "hilbert", tol: float = 1e-12,
                      hard_cap: int = MAX_KERNEL_DEGREE) -> PolySeries:
    """Truncated extremal function.

    ``variant="hilbert"``: K_q(., w) for a weight vector (or scalar) ``exponent``.
    ``variant="hardy_power"``: K_w^{2/p} = prod (1 - z_j conj(w_j))^(-2/p) for p = ``exponent``.
    """
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if variant == "hilbert":
        return kernel_series(WeightVector.of(exponent, w.size), w, tol, hard_cap)
    if variant == "hardy_power":
        p = float(exponent)
        if not p > 0:
            raise SeriesError(f"exponent p must be positive, got {p}")
        return kernel_series(WeightVector.of(2.0 / p, w.size), w, tol, hard_cap)
    raise SeriesError(f"unknown extremal variant {variant!r}")


# coefficient files

def series_to_dict(f: PolySeries) -> dict:
    return {
        "dim": f.dim,
        "degree": list(f.max_degree),
        "tail_bound": f.tail_bound,
        "coeffs": [{"alpha": list(alpha), "re": c.real, "im": c.imag} for alpha, c in f.items()],
    }


def series_from_dict(doc: dict) -> PolySeries:
    try:
        n = int(doc["dim"])
        degree = [int(d) for d in doc["degree"]]
        records = doc["coeffs"]
        coeffs = {}
        for rec in records:
            alpha = tuple(int(a) for a in rec["alpha"])
            if alpha in coeffs:
                raise SeriesError(f"duplicate multi-index {alpha}")
            coeffs[alpha] = complex(float(rec["re"]), float(rec.get("im", 0.0)))
        tail = float(doc.get("tail_bound", 0.0))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SeriesError):
            raise
        raise SeriesError(f"malformed coefficient document: {exc}") from exc
    if n < 1 or len(degree) != n:
        raise SeriesError("'degree' must list one cap per variable")
    return PolySeries.from_dict(coeffs, n=n, degree=degree, tail_bound=tail)


def dump_series(f: PolySeries, path: str | Path | None = None) -> str:
    """Serialize to the JSON coefficient format (floats in shortest round-trip form)."""
    text = json.dumps(series_to_dict(f), indent=1)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def load_series(source: str | Path) -> PolySeries:
    """Read a coefficient file (path) or coefficient document (JSON text)."""
    text = str(source)
    if not text.lstrip().startswith("{"):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise SeriesError(f"cannot read coefficient file {source}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SeriesError(f"coefficient file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SeriesError("coefficient document must be a JSON object")
    return series_from_dict(doc)

"""Seeded random polynomials for sweeps and tests."""

from __future__ import annotations

import numpy as np

from .series import PolySeries, SeriesError, MAX_KERNEL_DEGREE

LAWS = ("uniform_disc", "gaussian")


def _draw(rng: np.random.Generator, shape: tuple[int, ...], law: str) -> np.ndarray:
    if law == "gaussian":
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    # uniform on the closed unit disc: sqrt radius for area uniformity
    r = np.sqrt(rng.uniform(0.0, 1.0, shape))
    return r * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, shape))


def generate_random_function(seed, n: int = 1, degree: int | tuple[int, ...] = 3,
                             coefficient_law: str = "uniform_disc") -> PolySeries:
    """Polynomial in n variables with i.i.d. coefficients up to ``degree`` per axis.

    ``seed`` is anything numpy's ``default_rng`` accepts (an int, a
    SeedSequence, ...).  An all-zero draw is resampled.
    """
    if coefficient_law not in LAWS:
        raise SeriesError(f"unknown coefficient law {coefficient_law!r}, expected one of {LAWS}")
    if n < 1:
        raise SeriesError("n must be >= 1")
    deg = (degree,) * n if np.isscalar(degree) else tuple(degree)
    if len(deg) != n or any(d < 0 or d > MAX_KERNEL_DEGREE for d in deg):
        raise SeriesError(f"degree {degree} outside [0, {MAX_KERNEL_DEGREE}] or wrong length")
    rng = np.random.default_rng(seed)
    shape = tuple(int(d) + 1 for d in deg)
    while True:
        c = _draw(rng, shape, coefficient_law)
        if np.any(c != 0):
            return PolySeries(c)


def trial_seeds(seed: int, trials: int) -> list[np.random.SeedSequence]:
    """Independent per-trial seed sequences; trial i is reproducible on its own."""
    return np.random.SeedSequence(seed).spawn(trials)


def random_polynomial_with_zeros(seed, degree: int, inside: int, lead_scale: float = 1.0) -> PolySeries:
    """One-variable polynomial of the given degree with ``inside`` zeros planted in |z| < 0.95.

    The remaining zeros lie in 1.05 < |z| < 3.
    """
    if not 0 <= inside <= degree:
        raise SeriesError("need 0 <= inside <= degree")
    rng = np.random.default_rng(seed)
    rin = np.sqrt(rng.uniform(0.0, 0.95 ** 2, inside))
    rout = rng.uniform(1.05, 3.0, degree - inside)
    ang = np.exp(2j * np.pi * rng.uniform(0.0, 1.0, degree))
    roots = np.concatenate([rin, rout]) * ang
    lead = lead_scale * np.exp(2j * np.pi * rng.uniform())
    return PolySeries.from_roots(list(roots), lead)

"""Numerical verification of sharp norm inequalities for analytic functions on the polydisc."""

__version__ = "0.1.0"

from .series import (
    PolySeries,
    SeriesError,
    WeightVector,
    dump_series,
    extremal_function,
    kernel_eval,
    kernel_series,
    load_series,
    multiply,
    pochhammer,
)
from .quadrature import QuadratureConfig, hardy_norm, mp_at_radius, torus_power_mean
from .norms import growth_bound_check, hq_norm_integral, hq_norm_series, restricted_norm_function
from .factorization import BoundaryModulus, blaschke_eval, outer_function, polynomial_roots, riesz_factorize
from .inequalities import (
    INEQUALITY_IDS,
    GapReport,
    ModulusSum,
    PhiProduct,
    Tolerances,
    Verdict,
    burbea_hilbert_gap,
    carleman_double_gap,
    carleman_gap,
    equal_function_gap,
    isoperimetric_check,
    logsub_gap,
    main_product_gap,
    phi_main_gap,
)
from .generate import generate_random_function
from .search import Problem, SearchSpace, maximize_ratio, ratio_profile

__all__ = [
    "PolySeries",
    "SeriesError",
    "WeightVector",
    "dump_series",
    "extremal_function",
    "kernel_eval",
    "kernel_series",
    "load_series",
    "multiply",
    "pochhammer",
    "INEQUALITY_IDS",
    "GapReport",
    "ModulusSum",
    "PhiProduct",
    "Tolerances",
    "Verdict",
    "burbea_hilbert_gap",
    "carleman_double_gap",
    "carleman_gap",
    "equal_function_gap",
    "isoperimetric_check",
    "logsub_gap",
    "main_product_gap",
    "phi_main_gap",
    "QuadratureConfig",
    "hardy_norm",
    "mp_at_radius",
    "torus_power_mean",
    "growth_bound_check",
    "hq_norm_integral",
    "hq_norm_series",
    "restricted_norm_function",
    "BoundaryModulus",
    "blaschke_eval",
    "outer_function",
    "polynomial_roots",
    "riesz_factorize",
    "generate_random_function",
    "Problem",
    "SearchSpace",
    "maximize_ratio",
    "ratio_profile",
]

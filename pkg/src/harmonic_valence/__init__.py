"""Exact zero counts for the harmonic polynomials p + conj(q) built from
S(z) = i z^n and T(z) = i (z+1)^(n-1) (z-(n-1)), with p = S + T, q = S - T.

Three independent counters are provided: the closed form in
:mod:`~harmonic_valence.valence`, per-ray bracketing in
:mod:`~harmonic_valence.rays`, and planar Newton search with an
argument-principle check in :mod:`~harmonic_valence.planar`.
"""

from .construction import (
    ComplexPoly,
    ConstructionParams,
    DegenerateZero,
    HarmonicMap,
    Zero,
    build_perturbed,
    build_standard,
    evaluate,
    jacobian,
    standard_degenerate_zeros,
)
from .planar import SearchRegion, cross_validate, default_region, find_zeros, winding_number
from .rays import count_ray, ray_zero_locations, total_from_rays
from .valence import (
    asymptotic_slope,
    k_max,
    kmax_margin,
    predict_count,
    solve_cos_fixed_point,
)

__version__ = "0.1.0"

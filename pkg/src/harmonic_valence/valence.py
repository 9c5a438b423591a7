"""Closed-form zero count for the standard construction.

The count is ``n^2 - 2n + 2 + 4 * kmax(n)`` where ``kmax(n)`` is the largest
``1 <= k <= n/2`` whose margin

    (n - 2) cot((2k - 1) pi / (2n - 4)) - n cot(pi k / n)

is strictly positive, and 0 when there is none.  Asymptotically
``kmax(n) / n -> 1/4 - X / (2 pi)`` with ``X = cos X``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "KmaxResult",
    "ValenceReport",
    "kmax_margin",
    "kmax_margins",
    "sine_form_margin",
    "k_max",
    "baseline_count",
    "predict_count",
    "solve_cos_fixed_point",
    "cos_fixed_point_bisection",
    "asymptotic_slope",
    "gamma_leading_term",
]

# margins closer to zero than this are re-evaluated in extended precision
RECHECK_BAND = 1e-9


def _check_n(n: int) -> None:
    if n < 4:
        raise ValueError(f"the zero-count formula requires n >= 4 (got n={n})")


def _cot(x):
    return 1.0 / np.tan(x)


def kmax_margin(n: int, k: int) -> float:
    """Value at ``k`` of the quantity whose sign decides two extra zeros on ray ``k``."""
    _check_n(n)
    if not 1 <= k <= n // 2:
        raise ValueError(f"k must lie in [1, {n // 2}] (got k={k})")
    return float(
        (n - 2) * _cot((2 * k - 1) * math.pi / (2 * n - 4)) - n * _cot(math.pi * k / n)
    )


def kmax_margins(n: int) -> np.ndarray:
    """All margins for ``k = 1 .. n // 2`` (entry ``k - 1`` holds ``k``)."""
    _check_n(n)
    k = np.arange(1, n // 2 + 1)
    return (n - 2) * _cot((2 * k - 1) * np.pi / (2 * n - 4)) - n * _cot(np.pi * k / n)


def sine_form_margin(n: int, k: int, dps: Optional[int] = None) -> float:
    """Sine form of the margin, equal in sign (the cot difference times a positive factor).

    ``(n-1) sin((n - 4k) pi / (2n^2 - 4n)) - sin((k - 1/2) pi / (n-2) + pi k / n)``.
    With ``dps`` set, the value is computed with mpmath at that many digits.
    """
    if dps is None:
        return (n - 1) * math.sin((n - 4 * k) * math.pi / (2 * n * n - 4 * n)) - math.sin(
            (k - 0.5) * math.pi / (n - 2) + math.pi * k / n
        )
    import mpmath

    with mpmath.workdps(dps):
        pi = mpmath.pi
        val = (n - 1) * mpmath.sin((n - 4 * k) * pi / (2 * n * n - 4 * n)) - mpmath.sin(
            (k - mpmath.mpf(1) / 2) * pi / (n - 2) + pi * k / n
        )
        return float(val)


def _certified_signs(n: int, margins: np.ndarray) -> np.ndarray:
    """Signs of the margins, re-derived at 60 digits inside the recheck band."""
    signs = np.sign(margins).astype(int)
    near = np.flatnonzero(np.abs(margins) < RECHECK_BAND)
    if near.size:
        import mpmath

        with mpmath.workdps(60):
            pi = mpmath.pi
            for i in near:
                k = int(i) + 1
                exact = (n - 2) * mpmath.cot((2 * k - 1) * pi / (2 * n - 4)) - n * mpmath.cot(pi * k / n)
                signs[i] = int(mpmath.sign(exact))
    return signs


@dataclass(frozen=True)
class KmaxResult:
    n: int
    k_max: int
    margins: np.ndarray = field(repr=False)
    # k values whose margin is exactly zero (counted as not positive)
    ties: tuple = ()


@dataclass
class ValenceReport:
    n: int
    k_max: int
    predicted: int
    baseline: int
    verified: Optional[int] = None
    agree: bool = False
    ties: tuple = ()

    @property
    def extra(self) -> int:
        return self.predicted - self.baseline


def k_max(n: int) -> KmaxResult:
    """Largest ``k`` in ``[1, n/2]`` with a strictly positive margin (0 if none)."""
    margins = kmax_margins(n)
    signs = _certified_signs(n, margins)
    positive = np.flatnonzero(signs > 0)
    ties = tuple(int(i) + 1 for i in np.flatnonzero(signs == 0))
    return KmaxResult(n, int(positive[-1]) + 1 if positive.size else 0, margins, ties)


def baseline_count(n: int) -> int:
    """``n + 2 * sum_{k=1}^{n-1} (k - 1)``, i.e. ``n^2 - 2n + 2``."""
    _check_n(n)
    return n + 2 * sum(k - 1 for k in range(1, n))


def predict_count(n: int) -> ValenceReport:
    res = k_max(n)
    base = baseline_count(n)
    return ValenceReport(n, res.k_max, base + 4 * res.k_max, base, ties=res.ties)


def solve_cos_fixed_point(tol: float = 1e-14) -> float:
    """Root of ``X - cos X`` by Newton from 0.75, bisection on [0, 1] as fallback."""
    x = 0.75
    for _ in range(100):
        step = (x - math.cos(x)) / (1.0 + math.sin(x))
        x -= step
        if abs(step) < 1e-16 or abs(x - math.cos(x)) < tol:
            break
    else:
        raise AssertionError("Newton iteration for X = cos X did not converge")
    if not (0.0 < x < 1.0 and abs(x - math.cos(x)) < tol):
        x = cos_fixed_point_bisection()
    return x


def cos_fixed_point_bisection(lo: float = 0.0, hi: float = 1.0) -> float:
    """Bisection for ``X = cos X`` down to adjacent doubles."""
    g = lambda x: x - math.cos(x)  # noqa: E731
    if g(lo) >= 0 or g(hi) <= 0:
        raise ValueError("bracket does not straddle the fixed point")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo if abs(g(lo)) <= abs(g(hi)) else hi


def asymptotic_slope() -> float:
    """``1/4 - X / (2 pi)``, the limit of ``kmax(n) / n``."""
    return 0.25 - solve_cos_fixed_point() / (2 * math.pi)


def gamma_leading_term(gamma: float) -> float:
    """Leading term ``pi/2 - 2 pi gamma - sin(2 pi gamma)`` of the margin in ``gamma = k/n``."""
    if not 0.0 < gamma < 0.25:
        raise ValueError(f"gamma must lie in (0, 1/4) (got {gamma})")
    return math.pi / 2 - 2 * math.pi * gamma - math.sin(2 * math.pi * gamma)

"""Construction-agnostic planar zero finder for harmonic maps ``p + conj(q)``.

Zeros are found by damped Newton iteration on ``(Re f, Im f)`` from every node
of a square grid, merged, and classified by the sign of the Jacobian
determinant ``|p'|^2 - |q'|^2``.  For ``deg p > deg q`` the signed count of
zeros equals ``deg p``, which is checked against the winding number of ``f``
around the search square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .construction import (
    DegenerateZero,
    HarmonicMap,
    Zero,
    build_standard,
    determinant_scale,
    evaluate,
    jacobian,
    standard_degenerate_zeros,
)
from .rays import ray_zero_locations, total_from_rays
from .valence import ValenceReport, predict_count

__all__ = [
    "SearchRegion",
    "BoundaryZeroError",
    "CompletenessError",
    "DegenerateUnexplainedError",
    "MismatchError",
    "default_region",
    "winding_number",
    "local_index",
    "find_zeros",
    "match_zero_sets",
    "cross_validate",
]

NEWTON_MAX_ITER = 60
NEWTON_TOL = 1e-11
MAX_HALVINGS = 8
MERGE_RADIUS = 1e-7
DEGENERATE_DET = 1e-9
STEP_TOL = 1e-10
# a zero whose next two Newton steps exceed LINEAR_FLOOR * (1 + |z|) and
# shrink by less than LINEAR_RATIO per step is treated as degenerate
LINEAR_FLOOR = 1e-13
LINEAR_RATIO = 0.25


class BoundaryZeroError(ValueError):
    """``f`` (nearly) vanishes on the region boundary; adjust the region."""


class CompletenessError(RuntimeError):
    def __init__(self, deficit: int, found: int):
        self.deficit, self.found = deficit, found
        super().__init__(
            f"signed index sum misses deg p by {deficit} ({found} zeros found); "
            "try a denser start grid"
        )


class DegenerateUnexplainedError(RuntimeError):
    pass


class MismatchError(RuntimeError):
    def __init__(self, only_planar, only_rays, detail: str = ""):
        self.only_planar, self.only_rays = only_planar, only_rays
        super().__init__(
            detail
            or f"zero sets differ: {len(only_planar)} planar-only, {len(only_rays)} ray-only"
        )


@dataclass(frozen=True)
class SearchRegion:
    center: complex
    half_width: float
    grid_density: float = 8.0

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if not self.grid_density > 0:
            raise ValueError("grid_density must be positive")

    def grid(self) -> np.ndarray:
        m = int(math.ceil(2 * self.half_width * self.grid_density)) + 1
        t = np.linspace(-self.half_width, self.half_width, m)
        x, y = np.meshgrid(t, t)
        return (self.center + x + 1j * y).ravel()

    def polar_grid(self, center=None, r_min=1e-3, r_max=None, rings=96, spokes=128) -> np.ndarray:
        """Log-polar starts: geometric radii resolve clusters near ``center``."""
        c = self.center if center is None else center
        r = np.geomspace(r_min, r_max or self.half_width, rings)
        t = (np.arange(spokes) + 0.5) * (2 * math.pi / spokes)
        return (c + r[:, None] * np.exp(1j * t)[None, :]).ravel()

    def corners(self) -> np.ndarray:
        h = self.half_width
        return self.center + np.array([-h - 1j * h, h - 1j * h, h + 1j * h, -h + 1j * h])


def default_region(n: int, grid_density: float = 8.0) -> SearchRegion:
    return SearchRegion(0j, 1.5 * (n - 1), grid_density)


def _scale(f: HarmonicMap, z) -> np.ndarray:
    return (1.0 + np.abs(z)) ** f.degree


def winding_number(
    f: HarmonicMap,
    region: SearchRegion,
    samples_per_side: int | None = None,
    tol: float = 1e-9,
    max_step: float = math.pi / 2,
) -> int:
    """Winding number of ``f`` along the positively oriented boundary of ``region``.

    Sampling is refined wherever consecutive argument increments reach
    ``max_step``.
    """
    if samples_per_side is None:
        samples_per_side = 64 + 16 * max(f.degree, 1)
    c = region.corners()
    s = np.linspace(0.0, 4.0, 4 * samples_per_side + 1)
    pts = _boundary_point(c, s)
    vals = evaluate(f, pts)
    for _ in range(60):
        if not np.all(vals):
            raise BoundaryZeroError("f vanishes exactly at a boundary sample")
        steps = np.angle(vals[1:] / vals[:-1])
        coarse = np.abs(steps) >= max_step
        if not coarse.any():
            break
        new_s = 0.5 * (s[:-1][coarse] + s[1:][coarse])
        new_vals = evaluate(f, _boundary_point(c, new_s))
        order = np.argsort(np.concatenate([s, new_s]), kind="stable")
        s = np.concatenate([s, new_s])[order]
        vals = np.concatenate([vals, new_vals])[order]
    else:
        raise BoundaryZeroError("argument refinement did not settle; f may vanish on the boundary")
    radius = abs(region.center) + math.sqrt(2) * region.half_width
    floor = tol * (1.0 + radius) ** f.degree
    if np.min(np.abs(vals)) <= floor:
        raise BoundaryZeroError(
            f"min |f| on the boundary is {np.min(np.abs(vals)):.3e} <= {floor:.3e}"
        )
    total = np.sum(np.angle(vals[1:] / vals[:-1])) / (2 * math.pi)
    w = int(round(total))
    if abs(total - w) > 1e-6:
        raise BoundaryZeroError(f"non-integral winding {total!r}")
    return w


def _boundary_point(corners: np.ndarray, s: np.ndarray) -> np.ndarray:
    side = np.minimum(np.floor(s).astype(int), 3)
    t = s - side
    a = corners[side]
    b = corners[(side + 1) % 4]
    return a + t * (b - a)


def local_index(f: HarmonicMap, z: complex, radius: float = 1e-4, tol: float = 1e-14) -> int:
    """Index of an isolated zero from the winding along a small square around it."""
    return winding_number(f, SearchRegion(z, radius), tol=tol)


def _newton_step(f: HarmonicMap, z, fz):
    J, det = jacobian(f, z)
    u, v = fz.real, fz.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        dx = -(J[..., 1, 1] * u - J[..., 0, 1] * v) / det
        dy = -(J[..., 0, 0] * v - J[..., 1, 0] * u) / det
    dz = dx + 1j * dy
    return np.where(np.isfinite(dz), dz, 0.0)


def _newton(f: HarmonicMap, z0: np.ndarray, max_iter: int):
    """Damped Newton from every start; returns final points and a converged mask.

    A point counts as converged when ``|f|`` is below the scaled tolerance and
    the full Newton step from it is negligible, so slow drift toward a
    degenerate zero is not mistaken for convergence.
    """
    z = z0.copy()
    fz = evaluate(f, z)
    res = np.abs(fz)
    last_step = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        za, fa, ra = z[idx], fz[idx], res[idx]
        dz = _newton_step(f, za, fa)
        last_step[idx] = np.abs(dz)
        lam = np.ones(idx.size)
        trial = za + dz
        ft = evaluate(f, trial)
        rt = np.abs(ft)
        # halve the step until |f| decreases
        for _ in range(MAX_HALVINGS):
            worse = ~(rt < ra)
            if not worse.any():
                break
            lam[worse] *= 0.5
            trial[worse] = za[worse] + lam[worse] * dz[worse]
            ft[worse] = evaluate(f, trial[worse])
            rt[worse] = np.abs(ft[worse])
        moved = rt < ra
        z[idx] = np.where(moved, trial, za)
        fz[idx] = np.where(moved, ft, fa)
        res[idx] = np.where(moved, rt, ra)
        stuck = ~moved | ~np.isfinite(z[idx])
        active[idx[stuck]] = False
    final = np.abs(_newton_step(f, z, fz))
    converged = (res < NEWTON_TOL * _scale(f, z)) & (final <= STEP_TOL * (1.0 + np.abs(z)))
    return z, converged & np.isfinite(z)


def _converges_linearly(f: HarmonicMap, z: np.ndarray) -> np.ndarray:
    """Mask of points where further Newton steps shrink only geometrically.

    Near a zero of multiplicity ``m`` each step cuts the distance by roughly
    ``(m - 1) / m``; at a simple zero the next step is at the rounding floor.
    """
    fz = evaluate(f, z)
    s1 = _newton_step(f, z, fz)
    z1 = z + s1
    s2 = _newton_step(f, z1, evaluate(f, z1))
    a1, a2 = np.abs(s1), np.abs(s2)
    floor = LINEAR_FLOOR * (1.0 + np.abs(z))
    return (a1 > floor) & (a2 > LINEAR_RATIO * a1) & (a2 < a1)


def _merge(points: np.ndarray) -> np.ndarray:
    """Merge points closer than ``MERGE_RADIUS * (1 + |z|)``, in (Re, Im) order."""
    pts = points[np.lexsort((points.imag, points.real))]
    reps = []
    while pts.size:
        w = pts[0]
        reps.append(w)
        pts = pts[np.abs(pts - w) > MERGE_RADIUS * (1.0 + abs(w))]
    return np.array(reps, dtype=complex)


def find_zeros(
    f: HarmonicMap,
    region: SearchRegion,
    degenerate: Sequence[DegenerateZero] = (),
    capture_radius: float = 1e-3,
    check_winding: bool = True,
) -> list[Zero]:
    """All zeros of ``f`` inside ``region``, sorted by (Re, Im).

    Newton starts are the square grid of ``region`` plus log-polar sets around
    its centre and around each annotated degenerate zero.

    ``degenerate`` lists analytically known degenerate zeros; Newton starts
    that drift to within ``capture_radius`` of one are attributed to it, and
    its ``winding`` enters the completeness check in place of a Jacobian sign.
    """
    if check_winding:
        w = winding_number(f, region)
        if w != f.degree:
            raise CompletenessError(f.degree - w, 0)

    starts = [region.grid(), region.polar_grid()]
    for d in degenerate:
        starts.append(region.polar_grid(d.location, r_min=2 * capture_radius, r_max=1.0))
    z, ok = _newton(f, np.concatenate(starts), NEWTON_MAX_ITER)
    z = z[ok]
    h = region.half_width
    inside = (np.abs((z - region.center).real) <= h) & (np.abs((z - region.center).imag) <= h)
    z = z[inside]
    for d in degenerate:
        z = z[np.abs(z - d.location) > capture_radius]
    z = _merge(z)

    _, det = jacobian(f, z)
    degen = np.abs(det) <= DEGENERATE_DET * determinant_scale(f, z)
    degen |= _converges_linearly(f, z)
    if np.any(degen):
        raise DegenerateUnexplainedError(
            f"degenerate zero(s) without an analytic annotation: {z[degen]}"
        )
    resid = np.abs(evaluate(f, z))
    zeros = [
        Zero(complex(w), int(np.sign(d)), float(r)) for w, d, r in zip(z, det, resid)
    ]
    for d in degenerate:
        r = float(abs(evaluate(f, d.location)))
        if r >= NEWTON_TOL * _scale(f, d.location):
            raise DegenerateUnexplainedError(f"annotated point {d.location} is not a zero (|f|={r})")
        zeros.append(Zero(complex(d.location), 0, r, d.multiplicity))

    signed = sum(q.index for q in zeros) + sum(d.winding for d in degenerate)
    if signed != f.degree:
        raise CompletenessError(f.degree - signed, len(zeros))
    return sorted(zeros, key=lambda q: (q.location.real, q.location.imag))


def match_zero_sets(a: Sequence[complex], b: Sequence[complex], tol: float = 1e-6):
    """Greedy nearest matching; returns the unmatched points of ``a`` and of ``b``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size == 0 or b.size == 0:
        return list(a), list(b)
    dist = np.abs(a[:, None] - b[None, :])
    used_b = np.zeros(b.size, dtype=bool)
    only_a = []
    for i in np.argsort(dist.min(axis=1)):
        cand = np.where(used_b, np.inf, dist[i])
        j = int(np.argmin(cand))
        if cand[j] <= tol:
            used_b[j] = True
        else:
            only_a.append(complex(a[i]))
    return only_a, [complex(w) for w in b[~used_b]]


def cross_validate(n: int, region: SearchRegion | None = None) -> ValenceReport:
    """Compare the formula, the per-ray count and the planar Newton count for ``n``."""
    report = predict_count(n)
    f = build_standard(n)
    planar = find_zeros(f, region or default_region(n), standard_degenerate_zeros(n))
    rays = ray_zero_locations(n)
    only_planar, only_rays = match_zero_sets(
        [q.location for q in planar], [q.location for q in rays]
    )
    if only_planar or only_rays:
        raise MismatchError(only_planar, only_rays)
    planar_total = sum(q.multiplicity for q in planar)
    ray_total = total_from_rays(n)
    if planar_total != ray_total:
        raise MismatchError([], [], f"planar total {planar_total} != ray total {ray_total}")
    report.verified = planar_total
    report.agree = planar_total == ray_total == report.predicted
    return report

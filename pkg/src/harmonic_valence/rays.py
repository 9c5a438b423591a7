"""Per-ray zero counting for the standard construction.

The zero set of Re S is the union of the 2n rays ``arg z = pi k / n``.  On ray
``k`` (``1 <= k <= n-1``) the zeros of Im T are in bijection, through the angle
``theta = arg(r e^{i pi k/n} + 1)``, with the zeros on ``(0, pi k / n)`` of

    A(theta) = tan((n-1) theta) + (n-1) / tan(theta) - n cot(pi k / n).

Poles of A and its critical points are known in closed form, so every root is
bracketed without search: one root between consecutive poles, none before the
first pole, and zero, one or two in the last segment.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .construction import Zero, build_standard, determinant_scale, evaluate, jacobian

__all__ = [
    "StructuralViolation",
    "RayProfile",
    "angle_function",
    "angle_function_derivative",
    "pole_angles",
    "pole_count",
    "critical_points",
    "critical_count",
    "boundary_value",
    "theta_to_r",
    "count_ray",
    "special_ray_counts",
    "total_from_rays",
    "ray_zero_locations",
    "min_interior_critical_value",
    "critical_sine_margin",
    "sine_margin_threshold",
    "cot_identity_residual",
    "worker_count",
]

BISECT_TOL = 1e-13
POLE_OFFSET = 1e-10
MAX_OFFSET_DOUBLINGS = 20
DENSE_SAMPLES = 10_000


class StructuralViolation(RuntimeError):
    """The sign pattern of A on a segment contradicts the expected bracket structure."""

    def __init__(self, n: int, k: int, segment, detail: str = ""):
        self.n, self.k, self.segment = n, k, segment
        super().__init__(f"structural violation at n={n}, k={k}, segment={segment}: {detail}")


def worker_count() -> int:
    """Worker cap from ``HV_THREADS`` (default 1)."""
    raw = os.environ.get("HV_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"HV_THREADS must be a positive integer (got {raw!r})") from None
    if value < 1:
        raise ValueError(f"HV_THREADS must be a positive integer (got {raw!r})")
    return value


def _check_k(n: int, k: int) -> None:
    if n < 4:
        raise ValueError(f"n must be >= 4 (got {n})")
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, {n - 1}] (got k={k})")


def _A(theta, n, k):
    return np.tan((n - 1) * theta) + (n - 1) / np.tan(theta) - n / math.tan(math.pi * k / n)


def angle_function(theta, n: int, k: int):
    """A(theta) on ray ``k``; ``theta`` must lie in ``(0, pi k / n)``."""
    _check_k(n, k)
    t = np.asarray(theta, dtype=float)
    alpha = math.pi * k / n
    if np.any(t <= 0) or np.any(t >= alpha):
        raise ValueError(f"theta must lie in (0, {alpha!r})")
    out = _A(t, n, k)
    return float(out) if out.ndim == 0 else out


def angle_function_derivative(theta, n: int, k: int):
    """A'(theta) = (n-1) (1 / cos^2((n-1) theta) - 1 / sin^2(theta))."""
    t = np.asarray(theta, dtype=float)
    out = (n - 1) * (1.0 / np.cos((n - 1) * t) ** 2 - 1.0 / np.sin(t) ** 2)
    return float(out) if out.ndim == 0 else out


def pole_count(n: int, k: int) -> int:
    """Number of poles of A on ``(0, pi k / n)``."""
    _check_k(n, k)
    return k if 2 * k < n else k - 1


def pole_angles(n: int, k: int) -> np.ndarray:
    """Poles ``(j - 1/2) pi / (n - 1)`` of A on ray ``k``, ``j = 1 .. pole_count``."""
    j = np.arange(1, pole_count(n, k) + 1)
    return (j - 0.5) * math.pi / (n - 1)


def critical_count(n: int, k: int) -> int:
    """Number of critical angles of the form ``(j - 1/2) pi / (n - 2)`` below ``pi k / n``."""
    _check_k(n, k)
    if 4 * k < n:
        return k
    if 4 * k < 3 * n:
        return k - 1
    return k - 2


def critical_points(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Zeros of A' on ``(0, pi k / n)``, as two families.

    ``cos((n-1) theta) = +-sin(theta)`` gives ``(j - 1/2) pi / n`` for ``j <= k``
    and ``(j - 1/2) pi / (n - 2)`` for ``j <= critical_count(n, k)``.
    """
    first = (np.arange(1, k + 1) - 0.5) * math.pi / n
    second = (np.arange(1, critical_count(n, k) + 1) - 0.5) * math.pi / (n - 2)
    return first, second


def boundary_value(n: int, k: int) -> float:
    """A at the ray angle, ``-2 / sin(2 pi k / n)``; ``math.inf`` when ``k = n/2``."""
    _check_k(n, k)
    if 2 * k == n:
        return math.inf
    return -2.0 / math.sin(2 * math.pi * k / n)


def theta_to_r(theta, n: int, k: int):
    """Radius on ray ``k`` at which ``arg(r e^{i pi k/n} + 1) = theta``."""
    alpha = math.pi * k / n
    t = np.asarray(theta, dtype=float)
    if np.any(t <= 0) or np.any(t >= alpha):
        raise ValueError(f"theta must lie in (0, {alpha!r})")
    out = np.sin(t) / np.sin(alpha - t)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RayProfile:
    n: int
    k: int
    alpha: float
    poles: np.ndarray = field(repr=False)
    critical_angles: tuple = field(repr=False)
    boundary_value: float
    roots_theta: np.ndarray = field(repr=False)
    roots_r: np.ndarray = field(repr=False)
    # roots per segment: (0, first pole), each inter-pole gap, (last pole, alpha)
    segment_roots: tuple = ()

    @property
    def N_k(self) -> int:
        return len(self.roots_theta)


def _offset_endpoint(n, k, pole, length, side, want_sign, segment):
    """Point near ``pole`` inside the segment where A has the asymptotic sign."""
    delta = POLE_OFFSET * length
    for _ in range(MAX_OFFSET_DOUBLINGS + 1):
        x = pole + side * delta
        if np.sign(_A(x, n, k)) == want_sign:
            return x
        delta *= 2
    raise StructuralViolation(n, k, segment, "no sign near pole after offset doubling")


def _bisect(n, k, lo, hi, lo_sign):
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    lo_sign = np.asarray(lo_sign, dtype=float)
    for _ in range(200):
        if np.max(hi - lo) <= BISECT_TOL:
            break
        mid = 0.5 * (lo + hi)
        s = np.sign(_A(mid, n, k))
        lo = np.where(s == lo_sign, mid, lo)
        hi = np.where(s == -lo_sign, mid, hi)
        lo = np.where(s == 0, mid, lo)
        hi = np.where(s == 0, mid, hi)
    root = 0.5 * (lo + hi)
    # one Newton polish, kept only if it stays in the final bracket
    d = angle_function_derivative(root, n, k)
    d = np.atleast_1d(d)
    step = np.where(np.abs(d) > 1, _A(root, n, k) / np.where(d == 0, 1, d), 0.0)
    polished = root - step
    keep = (polished >= lo) & (polished <= hi)
    return np.where(keep, polished, root)


def _sign_changes(n, k, a, b, samples, extra=()):
    x = np.linspace(a, b, samples)
    if extra:
        x = np.sort(np.concatenate([x, [e for e in extra if a < e < b]]))
    s = np.sign(_A(x, n, k))
    return int(np.count_nonzero(s[1:] != s[:-1]))


def count_ray(n: int, k: int, dense_check: bool = True) -> RayProfile:
    """Locate every zero of A on ``(0, pi k / n)`` by bracketed bisection.

    Raises :class:`StructuralViolation` if any critical value that should be
    positive is not, or if an endpoint sign disagrees with the pole asymptotics.
    """
    _check_k(n, k)
    alpha = math.pi * k / n
    poles = pole_angles(n, k)
    fam1, fam2 = critical_points(n, k)
    bval = boundary_value(n, k)
    edges = np.concatenate([[0.0], poles, [alpha]])

    # the only critical value allowed to be non-positive
    special = (k - 0.5) * math.pi / (n - 2) if 4 * k < n else None
    crit = np.concatenate([fam1, fam2])
    for c in crit:
        if special is not None and c == special:
            continue
        if not _A(c, n, k) > 0:
            seg = int(np.searchsorted(edges, c)) - 1
            raise StructuralViolation(n, k, seg, f"critical value at theta={c!r} is not positive")

    lo, hi, lo_sign = [], [], []
    counts = [0]
    for j in range(len(poles) - 1):
        length = poles[j + 1] - poles[j]
        a = _offset_endpoint(n, k, poles[j], length, +1, -1.0, j + 1)
        b = _offset_endpoint(n, k, poles[j + 1], length, -1, 1.0, j + 1)
        lo.append(a)
        hi.append(b)
        lo_sign.append(-1.0)
        counts.append(1)

    right = len(poles)
    last = poles[-1]
    length = alpha - last
    a = _offset_endpoint(n, k, last, length, +1, -1.0, right)
    if 2 * k >= n:
        if math.isinf(bval):
            b = _offset_endpoint(n, k, alpha, length, -1, 1.0, right)
        else:
            b = alpha
            if not bval > 0:
                raise StructuralViolation(n, k, right, "boundary value not positive")
        lo.append(a)
        hi.append(b)
        lo_sign.append(-1.0)
        expected_right = 1
    elif special is None:
        expected_right = 0
    else:
        peak = _A(special, n, k)
        if peak > 0:
            lo += [a, special]
            hi += [special, alpha]
            lo_sign += [-1.0, 1.0]
            expected_right = 2
        elif peak < 0:
            expected_right = 0
        else:
            raise StructuralViolation(n, k, right, "double root at the critical angle")
    counts.append(expected_right)

    if dense_check:
        hi_edge = alpha if not math.isinf(bval) else alpha - POLE_OFFSET * length
        found = _sign_changes(n, k, a, hi_edge, DENSE_SAMPLES, (special,) if special else ())
        if found != expected_right:
            raise StructuralViolation(
                n, k, right, f"dense sampling found {found} sign changes, expected {expected_right}"
            )

    roots = _bisect(n, k, lo, hi, lo_sign) if lo else np.empty(0)
    roots = np.sort(roots)
    if roots.size and (roots[0] <= 0 or roots[-1] >= alpha or np.any(np.diff(roots) <= 0)):
        raise StructuralViolation(n, k, None, "roots not strictly inside and increasing")
    return RayProfile(
        n=n,
        k=k,
        alpha=alpha,
        poles=poles,
        critical_angles=(fam1, fam2),
        boundary_value=bval,
        roots_theta=roots,
        roots_r=np.sin(roots) / np.sin(alpha - roots),
        segment_roots=tuple(counts),
    )


def special_ray_counts(n: int) -> tuple[int, int]:
    """Zero counts on the positive (k = 0) and negative (k = n) real rays.

    On the positive axis ``Im T(r) = (r+1)^(n-1) (r-(n-1))`` vanishes only at
    ``r = n - 1``; on the negative axis ``(1-r)^(n-1) (-r-n+1)`` has the root
    ``r = 1`` of multiplicity ``n - 1``.
    """
    if n < 4:
        raise ValueError(f"n must be >= 4 (got {n})")
    return 1, n - 1


def _ray_profiles(n: int, workers: int | None = None) -> list[RayProfile]:
    workers = worker_count() if workers is None else workers
    ks = range(1, n)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda k: count_ray(n, k), ks))
    return [count_ray(n, k) for k in ks]


def total_from_rays(n: int, workers: int | None = None) -> int:
    """``N_0 + N_n + 2 * sum(N_k)``, the zero count with multiplicity."""
    n0, nn = special_ray_counts(n)
    return n0 + nn + 2 * sum(p.N_k for p in _ray_profiles(n, workers))


def ray_zero_locations(n: int, workers: int | None = None) -> list[Zero]:
    """Every zero of the standard construction, sorted by (Re, Im).

    z = -1 appears once, with index 0 and multiplicity ``n - 1``.
    """
    f = build_standard(n)
    pts = [complex(n - 1)]
    for prof in _ray_profiles(n, workers):
        z = prof.roots_r * np.exp(1j * prof.alpha)
        pts.extend(z)
        pts.extend(np.conj(z))
    z = np.array(pts, dtype=complex)
    resid = np.abs(evaluate(f, z))
    scale = (1.0 + np.abs(z)) ** n
    bad = resid >= 1e-8 * scale
    if np.any(bad):
        raise StructuralViolation(n, None, "residual", f"zero(s) {z[bad]} fail the residual check")
    _, det = jacobian(f, z)
    index = np.where(np.abs(det) <= 1e-9 * determinant_scale(f, z), 0, np.sign(det)).astype(int)
    zeros = [Zero(complex(w), int(i), float(r)) for w, i, r in zip(z, index, resid)]
    zeros.append(Zero(-1.0 + 0j, 0, float(abs(evaluate(f, -1.0 + 0j))), n - 1))
    return sorted(zeros, key=lambda q: (q.location.real, q.location.imag))


def min_interior_critical_value(n: int, k: int) -> float:
    """Smallest of the critical values ``A((j - 1/2) pi / (n-2))`` that must be positive.

    Taken at ``j = min(critical_count, k - 1)``, where the decreasing sequence
    in ``j`` is smallest.
    """
    _check_k(n, k)
    if k < 2:
        raise ValueError("k must be >= 2")
    j = min(critical_count(n, k), k - 1)
    return angle_function((j - 0.5) * math.pi / (n - 2), n, k)


def critical_sine_margin(n: int, k: int) -> float:
    """Sine form of :func:`min_interior_critical_value`, equal in sign.

    ``(n-1) sin((c n - 4k) pi / (2n^2 - 4n)) - sin((k - c/2) pi / (n-2) + pi k / n)``
    with ``c = 3`` for ``k < 3n/4`` and ``c = 5`` otherwise.
    """
    _check_k(n, k)
    c = 3 if 4 * k < 3 * n else 5
    return (n - 1) * math.sin((c * n - 4 * k) * math.pi / (2 * n * n - 4 * n)) - math.sin(
        (k - c / 2) * math.pi / (n - 2) + math.pi * k / n
    )


def sine_margin_threshold(n: int) -> float:
    """``n (2n - 1) / (4 (n - 1))``: the ``k`` at which the second sine term vanishes."""
    return n * (2 * n - 1) / (4 * (n - 1))


def cot_identity_residual(theta1: float, theta2: float, n: int) -> float:
    """Left minus right side of

    ``(n-2) cot t1 - n cot t2 = ((n-1) sin(t2 - t1) - sin(t1 + t2)) / (sin t1 sin t2)``.
    """
    for t in (theta1, theta2):
        if not 0.0 < t < math.pi:
            raise ValueError(f"angles must lie in (0, pi) (got {t})")
    left = (n - 2) / math.tan(theta1) - n / math.tan(theta2)
    right = ((n - 1) * math.sin(theta2 - theta1) - math.sin(theta1 + theta2)) / (
        math.sin(theta1) * math.sin(theta2)
    )
    return left - right

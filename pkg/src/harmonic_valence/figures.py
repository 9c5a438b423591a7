"""Line-segment data for pictures of the zero sets of Re S and Im T."""

from __future__ import annotations

import math

import numpy as np
from skimage.measure import find_contours

from .construction import HarmonicMap

__all__ = ["ray_segments", "im_t_grid", "im_t_contour_segments"]


def ray_segments(n: int, window: float) -> np.ndarray:
    """The 2n rays ``arg z = pi k / n`` clipped to the square ``[-window, window]^2``.

    Returns rows ``(k, x1, y1, x2, y2)`` for ``k = -n+1 .. n``; every ray starts
    at the origin.
    """
    rows = []
    for k in range(-n + 1, n + 1):
        t = math.pi * k / n
        c, s = math.cos(t), math.sin(t)
        reach = window / max(abs(c), abs(s))
        rows.append((k, 0.0, 0.0, reach * c, reach * s))
    return np.array(rows, dtype=float)


def im_t_grid(f: HarmonicMap, window: float, resolution: int):
    """Sample Im T on a ``resolution x resolution`` grid; returns ``(axis, values)``."""
    axis = np.linspace(-window, window, resolution)
    x, y = np.meshgrid(axis, axis)
    return axis, f.im_T(x + 1j * y)


def im_t_contour_segments(f: HarmonicMap, window: float, resolution: int) -> np.ndarray:
    """Segments ``(x1, y1, x2, y2)`` of the level set Im T = 0 by marching squares."""
    if resolution < 16:
        raise ValueError(f"resolution must be >= 16 (got {resolution})")
    axis, values = im_t_grid(f, window, resolution)
    h = axis[1] - axis[0]
    segs = []
    for path in find_contours(values, 0.0):
        # find_contours returns (row, col) = (y index, x index)
        xy = np.column_stack([axis[0] + path[:, 1] * h, axis[0] + path[:, 0] * h])
        segs.append(np.hstack([xy[:-1], xy[1:]]))
    if not segs:
        return np.empty((0, 4))
    return np.vstack(segs)

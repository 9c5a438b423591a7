# %% [markdown]
# # Pictures of Re S = 0 and Im T = 0
#
# The zeros of `p + conj(q) = 2 Re S + 2i Im T` are where the rays of
# `Re S = 0` cross the curves of `Im T = 0`.  The same data is written by
# `harmonic-valence plot-data`.

# %%
import cmath

import numpy as np

from harmonic_valence.construction import ConstructionParams, build_perturbed, build_standard
from harmonic_valence.figures import im_t_contour_segments, ray_segments
from harmonic_valence.planar import default_region, find_zeros
from harmonic_valence.rays import ray_zero_locations

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None


def draw(f, n, zeros, window, title):
    rays = ray_segments(n, window)
    curve = im_t_contour_segments(f, window, 600)
    print(f"{title}: {len(rays)} rays, {len(curve)} contour segments, {len(zeros)} zeros")
    if plt is None:
        return
    fig, ax = plt.subplots(figsize=(6, 6))
    for _, x1, y1, x2, y2 in rays:
        ax.plot([x1, x2], [y1, y2], color="red", lw=0.6)
    ax.plot(curve[:, [0, 2]].T, curve[:, [1, 3]].T, color="black", lw=0.6)
    z = np.array([q.location for q in zeros])
    ax.plot(z.real, z.imag, ".", color="tab:blue")
    ax.set_xlim(-window, window)
    ax.set_ylim(-window, window)
    ax.set_aspect("equal")
    ax.set_title(title)
    plt.show()


# %%
n = 12
draw(build_standard(n), n, ray_zero_locations(n), n + 1.0, "standard, n = 12")

# %%
g = build_perturbed(ConstructionParams(n, cmath.exp(0.1j)))
draw(g, n, find_zeros(g, default_region(n)), n + 1.0, "a = exp(i/10), n = 12")

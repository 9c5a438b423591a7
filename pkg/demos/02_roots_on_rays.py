# %% [markdown]
# # Roots of Im T on the rays of Re S = 0
#
# `Re S` vanishes on the 2n rays `arg z = pi k / n`.  On ray k the zeros of
# `Im T` are the roots of an angle function `A(theta)` on `(0, pi k / n)`,
# bracketed by its poles.  Counting them ray by ray gives the total.

# %%
import math

import numpy as np

from harmonic_valence.rays import (
    angle_function,
    count_ray,
    pole_angles,
    special_ray_counts,
    total_from_rays,
)
from harmonic_valence.valence import predict_count

# %%
n = 12
for k in range(1, n):
    prof = count_ray(n, k)
    print(f"k={k:2d}  poles={len(prof.poles):2d}  N_k={prof.N_k:2d}  per segment={prof.segment_roots}")

# %% [markdown]
# Ray k=1 carries two roots beyond the baseline `k - 1 = 0`; every other ray
# carries `k - 1`.  The real axis contributes 1 (k=0) and n-1 (k=n, the point -1).

# %%
counts = [count_ray(n, k).N_k for k in range(1, n)]
n0, nn = special_ray_counts(n)
print(n0 + nn + 2 * sum(counts), total_from_rays(n), predict_count(n).predicted)

# %% [markdown]
# A sampled picture of `A` on ray 1, clipped near the pole.

# %%
k = 1
alpha = math.pi * k / n
theta = np.linspace(1e-3, alpha - 1e-3, 2000)
values = angle_function(theta, n, k)
print("pole at", pole_angles(n, k))
print("roots at", count_ray(n, k).roots_theta)
try:
    import matplotlib.pyplot as plt

    plt.plot(theta, np.clip(values, -50, 50))
    plt.axhline(0, color="k", lw=0.5)
    plt.xlabel("theta")
    plt.ylabel("A(theta)")
    plt.show()
except ImportError:
    pass

# %% [markdown]
# Parallel sweep (set `HV_THREADS` to change the worker count).

# %%
for n in (20, 40, 60):
    print(n, total_from_rays(n), predict_count(n).predicted)

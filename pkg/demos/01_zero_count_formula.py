# %% [markdown]
# # Zero counts from the closed form
#
# The harmonic polynomial `p + conj(q)` built from `S = i z^n` and
# `T = i (z+1)^(n-1) (z-(n-1))` has `n^2 - 2n + 2 + 4 kmax(n)` zeros, where
# `kmax(n)` is the last `k <= n/2` whose cotangent margin is positive.

# %%
import numpy as np

from harmonic_valence.valence import (
    asymptotic_slope,
    k_max,
    kmax_margins,
    predict_count,
    solve_cos_fixed_point,
)

# %% [markdown]
# The margins for n = 30: positive for the first few k, then negative for good.

# %%
n = 30
m = kmax_margins(n)
for k, v in enumerate(m, start=1):
    print(f"k={k:2d}  margin={v:+.6f}")
print("kmax =", k_max(n).k_max)

# %% [markdown]
# Counts for small n, next to the baseline `n^2 - 2n + 2`.

# %%
for n in range(4, 36):
    rep = predict_count(n)
    print(f"n={n:2d}  kmax={rep.k_max}  baseline={rep.baseline:5d}  count={rep.predicted:5d}")

# %% [markdown]
# `kmax(n)/n` tends to `1/4 - X/(2 pi)` where `X = cos X`.

# %%
X = solve_cos_fixed_point()
s = asymptotic_slope()
print(f"X = {X:.14f}, slope = {s:.5f}")
ns = np.array([100, 500, 1000, 5000, 20000])
km = np.array([k_max(int(n)).k_max for n in ns])
print(np.column_stack([ns, km, km - s * ns]))

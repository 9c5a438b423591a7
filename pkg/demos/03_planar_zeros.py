# %% [markdown]
# # Planar Newton search and the perturbed construction
#
# An independent check: multi-start Newton over a square, merged, with each
# zero classified by the sign of the Jacobian.  The signed count must equal
# `deg p`, matching the winding number around the square.

# %%
import cmath

from harmonic_valence.construction import (
    ConstructionParams,
    build_perturbed,
    build_standard,
    standard_degenerate_zeros,
)
from harmonic_valence.planar import cross_validate, default_region, find_zeros, winding_number

# %% [markdown]
# Standard construction, n = 12.  The point -1 is a degenerate zero of
# multiplicity 11; it is supplied from the construction, not searched for.

# %%
n = 12
f = build_standard(n)
region = default_region(n)
print("winding:", winding_number(f, region))
zeros = find_zeros(f, region, standard_degenerate_zeros(n))
print(len(zeros), "locations,", sum(q.multiplicity for q in zeros), "with multiplicity")
print(cross_validate(n))

# %% [markdown]
# Moving the centre of the `(z + a)^(n-1)` factor to `a = exp(i/10)` splits the
# degenerate point: every zero becomes simple.

# %%
g = build_perturbed(ConstructionParams(n, cmath.exp(0.1j)))
pz = find_zeros(g, region)
plus = sum(q.index > 0 for q in pz)
minus = sum(q.index < 0 for q in pz)
print(f"{len(pz)} zeros: {plus} sense-preserving, {minus} sense-reversing")

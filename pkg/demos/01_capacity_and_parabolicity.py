"""
Capacity of annuli and parabolicity of model manifolds
======================================================

A model manifold is fixed by its dimension and warping function ``h``.
Everything below is a one-dimensional integral of powers of ``h``.
"""

import math

from modelcap import capacity_bounds, classify_parabolicity, cusp, euclidean, hyperbolic

# %%
# The exact capacity of the condenser (B_1, B_2) in
# R^3 for p = 2 is 8 pi.  The two upper bounds bracket it from above.
R3 = euclidean(3)
b = capacity_bounds(R3, 2, 1.0, 2.0)
print("R^3, p=2, (1, 2):", b.as_row())
print("8 pi =", 8 * math.pi)

# %%
# Letting the outer radius grow shows the capacity settling at a positive
# limit on R^3 (non-parabolic) but draining to zero on the cusp.
for M in (R3, cusp(2)):
    caps = [capacity_bounds(M, 2, 1.0, r2).exact_model for r2 in (2.0, 10.0, 100.0, 1000.0)]
    print(f"{M.name:>12}:", ", ".join(f"{c:.6g}" for c in caps))

# %%
# The parabolicity verdict comes from the analytic tail of a_p, not from
# a truncated integral, so it is exact.
for M, p in [(euclidean(2), 2), (R3, 2), (R3, 3), (euclidean(4), 4), (cusp(2), 2), (hyperbolic(2), 2)]:
    v = classify_parabolicity(M, p)
    print(f"{M.name:>12} p={p}: {v.verdict:14s} certificate={v.certificate}")

# On R^3 the certificate is sup f = 1/(4 pi); the limit capacity above is its reciprocal.
print("1/(4 pi) =", 1 / (4 * math.pi))

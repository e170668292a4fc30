"""
Monotonicity constant of the p-power map
========================================

The estimate of C(p) in <|x|^{p-2}x - |y|^{p-2}y, x-y> >= 2 C(p) Psi(x, y)
is the smallest ratio over seeded random and degenerate pairs.
"""

from modelcap.inequalities import estimate_Cp_record, tmax_check

# %%
# Antipodal pairs pin C(p) = 2^{1-p} for p >= 2; for p < 2 nearly parallel
# pairs push it down to (p-1) 2^{1-p}.
for p in (1.2, 1.5, 2.0, 3.0, 4.0):
    rec = estimate_Cp_record(p, 2, 100_000, seed=1)
    print(f"p={p:3.1f}  estimate={rec.estimated_Cp:.6f}  2^(1-p) min(1, p-1)={2 ** (1 - p) * min(1, p - 1):.6f}")

# %%
# The profile 2t/(A+t)^{3/2} peaks at t = 2A.
for A in (1.0, 4.0, 100.0):
    print(A, tmax_check(A))

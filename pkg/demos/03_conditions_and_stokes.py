"""
Decay conditions and the divergence-theorem harness
===================================================

For a radial field X, the integral of div X over a ball is the flux
through its boundary.  The harness evaluates this along an exhaustion and
checks a decay condition on |X|.
"""

from modelcap import cusp, euclidean
from modelcap.stokes import bump_field, bump_profile, make_unit_mass_field, p_flux_field, theorem_harness

R3 = euclidean(3)

# %%
# A field whose divergence is a bump of unit mass: the ball integrals stay
# at 1 forever, so the vanishing conclusion fails, and condition A is
# correspondingly violated (its ratio sits at 1).
rep = theorem_harness(R3, 2, make_unit_mass_field(R3), "A", [2, 4, 8, 16, 32, 64])
print(rep.condition_report.text())
for row in rep.rows():
    print(row)
print("conclusion:", rep.conclusion, rep.value)

# %%
# A field whose divergence has total mass zero: the condition holds and
# the ball integrals vanish beyond the support.
X = bump_field(R3, [(bump_profile(0.5, 1.0), 1.0), (bump_profile(1.5, 2.5), -1.0)])
rep = theorem_harness(R3, 2, X, "V", [4, 8, 16, 32, 64, 128])
print(rep.condition_report.text())
print("conclusion:", rep.conclusion)

# %%
# The p-flux field of the Evans potential is divergence free with unit
# flux; on the cusp the level-set condition E sees a constant ratio.
M = cusp(2)
rep = theorem_harness(M, 2, p_flux_field(M, 2), "E", [2, 4, 8, 16])
print(rep.condition_report.text())
print("conclusion:", rep.conclusion)

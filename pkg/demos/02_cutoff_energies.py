"""
Optimal and linear-in-volume cutoffs on the cusp
================================================

Two cutoffs that equal 1 on B_r and vanish outside B_2r: phi, built from
the Evans potential, and xi, affine in the volume function.  phi has the
least energy among radial cutoffs; xi only has a cheap upper bound.
"""

import numpy as np

from modelcap import cusp
from modelcap.cutoffs import custom_energy, energy_sweep, phi_energy, random_cutoff

M = cusp(2)

# %%
# On the cusp both energies decay exponentially, at different rates.
rows = energy_sweep(M, 2, [5, 8, 11, 14, 17, 20])
print(f"{'r':>4} {'E(phi)':>12} {'xi bound':>12} {'ratio':>10}")
for row in rows:
    print(f"{row['r']:4.0f} {row['phi_energy']:12.4e} {row['xi_bound']:12.4e} {row['ratio']:10.3e}")

# %%
# Rescaled by e^{2r} and r^2 e^r the two columns flatten out.
rs = np.array([row["r"] for row in rows])
print("E(phi) e^{2r}   :", np.round([row["phi_energy"] for row in rows] * np.exp(2 * rs), 4))
print("xi bound r^2 e^r:", np.round([row["xi_bound"] for row in rows] * rs ** 2 * np.exp(rs), 4))

# %%
# No random radial cutoff beats phi.
rng = np.random.default_rng(0)
floor = phi_energy(M, 3, 1.0, 2.0)
worst = min(custom_energy(M, 3, random_cutoff(1.0, 2.0, rng)) / floor for _ in range(500))
print(f"smallest energy ratio over 500 random cutoffs (p=3): {worst:.4f}")

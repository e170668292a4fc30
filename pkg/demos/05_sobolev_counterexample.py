"""
A model with Euclidean volume growth and no Sobolev inequality
==============================================================

On R^m the product r^{(m-q)/(q-1)} int_r^inf a_q is constant.  The model
below alternates between linear and slow t^beta blocks: its volume still
grows like r^3 but the product climbs without bound.
"""

import math

from modelcap import euclidean
from modelcap.sobolev import (
    CounterexampleSpec,
    build_counterexample,
    euclidean_sobolev_params,
    h_threshold,
    lower_area_check,
    sobolev_bound_constant,
    verify_counterexample,
)

# %%
params = euclidean_sobolev_params(3, 2.0)
res = lower_area_check(params, euclidean(3), [1, 10, 100])
print("R^3 products:", res.products, "bound:", sobolev_bound_constant(params), "1/(4 pi):", 1 / (4 * math.pi))

# %%
spec = CounterexampleSpec(m=3, q=1.5, beta=0.5, H=4.0, gamma=1.0)
print("H must exceed", h_threshold(3, 1.0))
M = build_counterexample(spec)
rep = verify_counterexample(M, spec)
print("volume >= r^3 on 200 radii:", rep.volume_ok, " min ratio", min(rep.volume_ratios))
print("a_q tail:", rep.tail, " converges:", rep.tail_converges)
for row in rep.rows()[::50]:
    print(row)
print("growth factor by r=1000:", rep.growth_factor, " all checks:", rep.all_passed)

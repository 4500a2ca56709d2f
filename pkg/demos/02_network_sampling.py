"""
Sampling the clustered network
==============================

One snapshot of the Matern cluster network seen from the reference cluster,
and a check of the serving-distance sampler against its density.
"""

import numpy as np

from uavmeta import SimControls, baseline_params
from uavmeta.geometry import sample_realization, sample_serving_distance, serving_distance_cdf
from uavmeta.simulate import tagged_realization

p = baseline_params()
c = SimControls(seed=7)
rng = np.random.default_rng(7)

real = sample_realization(p, c, rng)
print(f"serving distance {real.serving_distance:.1f} m, {real.n_interferers} interfering clusters")
print(f"closest interferer to the reference UAV: {real.ref_distance.min():.1f} m")

# the serving distance lives on [h, sqrt(r_c^2 + h^2)]
r = sample_serving_distance(p.r_c, p.h, rng, size=100_000)
edges = np.linspace(p.h, np.hypot(p.r_c, p.h), 6)
emp = np.histogram(r, bins=edges)[0] / r.size
exact = np.diff(serving_distance_cdf(edges, p.r_c, p.h))
for lo, hi, e, x in zip(edges[:-1], edges[1:], emp, exact):
    print(f"[{lo:6.1f}, {hi:6.1f})  sampled {e:.4f}  exact {x:.4f}")

# LoS tags are drawn from their own stream, so realization i is the same in every engine
t = tagged_realization(p, c, 0)
print(f"\nrealization 0: {t.e_los.mean():.1%} of interferers in LoS with their own UAV, "
      f"{t.j_los.mean():.1%} with the reference UAV, serving LoS = {t.serving_los}")

"""
Channel model and fractional power control
==========================================

How the LoS probability depends on the horizontal distance, and how the
power budget caps the compensation factor at each altitude.
"""

import numpy as np

from uavmeta import baseline_params
from uavmeta.channel import los_probability, transmit_power
from uavmeta.model import linear_to_db

p = baseline_params()

# LoS probability for a UAV at 100 m, seen from increasing horizontal distance
r = np.array([0.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 5000.0])
for ri, pl in zip(r, los_probability(r, p.h, p.a_env, p.b_env)):
    print(f"r = {ri:6.0f} m   P_los = {pl:.4f}")

# the compensation factor is capped so that a cluster-edge user stays within p_u
print()
for h in (25, 50, 100, 200):
    q = baseline_params(h=h)
    print(f"h = {h:3d} m   eps_l_max = {q.eps_max('l'):.4f}   eps_n_max = {q.eps_max('n'):.4f}")

# transmit power (dBW) of a user at distance R, with eps at its maximum
print()
R = np.linspace(p.h, np.hypot(p.r_c, p.h), 5)
for Ri, tl, tn in zip(R, transmit_power("l", R, p), transmit_power("n", R, p)):
    print(f"R = {Ri:6.1f} m   LoS {linear_to_db(tl):6.2f} dBW   NLoS {linear_to_db(tn):6.2f} dBW")

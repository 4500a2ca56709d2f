"""
Moments and the beta approximation
==================================

First and second moments of the conditional success probability, and the
meta distribution they imply, against the semi-analytic simulation.
"""

import numpy as np

from uavmeta import SimControls, baseline_params, beta_approximation, moment_set
from uavmeta.simulate import empirical_meta, run_semi_analytic

p = baseline_params()
c = SimControls(seed=5, n_realizations=1000)
gammas = np.array([0.1, 0.5, 0.9])

for theta_db in (-10, 0, 10, 20, 30):
    theta = 10 ** (theta_db / 10)
    ms = moment_set(theta, p, c)
    sim = run_semi_analytic(p, c, theta)
    beta = beta_approximation(ms.M1, ms.M2, gammas)
    emp = empirical_meta(sim, gammas)
    print(f"theta = {theta_db:4d} dB  M1 {ms.M1:.4f} (sim {sim.values.mean():.4f})  "
          f"var {ms.variance:.4f} (sim {sim.values.var():.4f})")
    print("    meta beta " + " ".join(f"{b:.3f}" for b in beta)
          + "   sim " + " ".join(f"{e:.3f}" for e in emp))

# a high mean with a large variance means many users are either almost
# always or almost never covered

"""Air-to-ground LoS model, Nakagami-m power gains and fractional power control."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

LOS = "l"
NLOS = "n"


class LinkTag(NamedTuple):
    """LoS state of an interferer's own link (``e``) and of its link to the reference UAV (``j``)."""

    e: str
    j: str


def los_probability(r_horiz, h, a_env, b_env):
    """Probability of a LoS link at horizontal distance ``r_horiz`` from a UAV at altitude ``h``."""
    elevation = np.degrees(np.arctan2(h, np.asarray(r_horiz, dtype=float)))
    out = 1.0 / (1.0 + a_env * np.exp(-b_env * (elevation - a_env)))
    return float(out) if np.ndim(out) == 0 else out


def los_probability_3d(d, params):
    """LoS probability for a link of 3D length ``d`` to a UAV at ``params.h``."""
    d = np.asarray(d, dtype=float)
    x = np.sqrt(np.maximum(d * d - params.h ** 2, 0.0))
    return los_probability(x, params.h, params.a_env, params.b_env)


@dataclass(frozen=True)
class TaggedRealization:
    """A realization with frozen LoS labels.

    ``e_los[i]``/``j_los[i]`` are True when interferer i is in LoS with its own
    / the reference UAV. ``serving_los`` is None when the serving state is
    averaged inside the success probability, else the frozen serving state.
    """

    realization: object
    e_los: np.ndarray
    j_los: np.ndarray
    serving_los: bool | None = None

    @property
    def tags(self):
        return [LinkTag(LOS if e else NLOS, LOS if j else NLOS)
                for e, j in zip(self.e_los, self.j_los)]


def sample_tags(real, params, rng, serving_state="per_fading"):
    """Independently thin interferers by the LoS probability of each of their two links.

    With ``serving_state="per_realization"`` the serving link's LoS state is
    also drawn here and frozen; otherwise it is left to the success probability.
    """
    p_e = los_probability_3d(real.own_distance, params)
    p_j = los_probability_3d(real.ref_distance, params)
    n = real.n_interferers
    e_los = rng.random(n) < p_e
    j_los = rng.random(n) < p_j
    serving = None
    if serving_state == "per_realization":
        serving = bool(rng.random() < los_probability_3d(real.serving_distance, params))
    return TaggedRealization(real, e_los, j_los, serving)


def sample_power_gain(m, rng, size=None):
    """Nakagami-m power gain: Gamma(m, 1/m), unit mean."""
    m = np.asarray(m, dtype=float)
    return rng.gamma(m, 1.0 / m, size=size)


def _branch_arrays(state, params):
    if isinstance(state, str):
        alpha, eps, rho, eta, _ = params.branch(state)
        return alpha, eps, rho, eta
    los = np.asarray(state, dtype=bool)
    return (np.where(los, params.alpha_l, params.alpha_n),
            np.where(los, params.eps_l, params.eps_n),
            np.where(los, params.rho_l, params.rho_n),
            np.where(los, params.eta_l, params.eta_n))


def transmit_power(state, R_u, params):
    """rho_x * R_u**(alpha_x * eps_x); ``state`` is 'l'/'n' or a boolean LoS array."""
    alpha, eps, rho, _ = _branch_arrays(state, params)
    return rho * np.asarray(R_u, dtype=float) ** (alpha * eps)


def received_power(state, gain, R_u, params):
    """eta_x * rho_x * G * R_u**(-(1 - eps_x) * alpha_x)."""
    alpha, eps, rho, eta = _branch_arrays(state, params)
    return eta * rho * gain * np.asarray(R_u, dtype=float) ** (-(1.0 - eps) * alpha)

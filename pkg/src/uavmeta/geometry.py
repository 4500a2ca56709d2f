"""Matern-cluster network realizations seen from a reference UAV at the origin."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


def serving_distance_pdf(r, r_c, h):
    """Density of the user-to-UAV distance for a user uniform in its cluster disc."""
    r = np.asarray(r, dtype=float)
    upper = math.sqrt(r_c * r_c + h * h)
    out = np.where((r >= h) & (r <= upper), 2.0 * r / (r_c * r_c), 0.0)
    return float(out) if out.ndim == 0 else out


def serving_distance_cdf(r, r_c, h):
    r = np.asarray(r, dtype=float)
    out = np.clip((r * r - h * h) / (r_c * r_c), 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def serving_distance_from_uniform(u, r_c, h):
    """Inverse CDF of the serving distance."""
    return np.sqrt(h * h + r_c * r_c * np.asarray(u, dtype=float))


def sample_serving_distance(r_c, h, rng, size=None):
    return serving_distance_from_uniform(rng.random(size), r_c, h)


def sample_disc(radius, n, rng):
    """``n`` points uniform in a disc, as an (n, 2) array."""
    rad = radius * np.sqrt(rng.random(n))
    ang = 2.0 * np.pi * rng.random(n)
    return np.column_stack((rad * np.cos(ang), rad * np.sin(ang)))


def sample_parents(lambda_b, window_radius, rng):
    """Homogeneous PPP of cluster centres in the disc of radius ``window_radius``."""
    n = rng.poisson(lambda_b * math.pi * window_radius ** 2)
    return sample_disc(window_radius, n, rng)


class InterfererGeom(NamedTuple):
    own_serving_distance: float
    ref_distance: float


@dataclass(frozen=True)
class NetworkRealization:
    """One network snapshot around the reference cluster.

    ``serving_distance`` is the 3D distance from the reference user to the
    reference UAV; for interferer ``i``, ``own_distance[i]`` is its distance to
    its own cluster UAV and ``ref_distance[i]`` its distance to the reference UAV.
    """

    serving_distance: float
    own_distance: np.ndarray
    ref_distance: np.ndarray
    h: float
    window_radius: float
    seed_stamp: tuple = ()

    @property
    def n_interferers(self):
        return len(self.ref_distance)

    @property
    def interferers(self):
        return [InterfererGeom(float(a), float(b))
                for a, b in zip(self.own_distance, self.ref_distance)]

    def horizontal(self, d):
        """Horizontal distance for 3D distance(s) ``d`` to a UAV at altitude h."""
        return np.sqrt(np.maximum(np.asarray(d, dtype=float) ** 2 - self.h ** 2, 0.0))


def sample_realization(params, controls, rng, seed_stamp=()):
    """Sample the reference link and one active interferer per non-reference cluster.

    The reference cluster centre is pinned at the origin; the other centres form
    a PPP in the simulation window and contribute no user to the reference cluster.
    """
    h, r_c = params.h, params.r_c
    serving = float(sample_serving_distance(r_c, h, rng))
    parents = sample_parents(params.lambda_b, controls.window_radius, rng)
    offsets = sample_disc(r_c, len(parents), rng)
    own = np.sqrt(h * h + np.einsum("ij,ij->i", offsets, offsets))
    users = parents + offsets
    ref = np.sqrt(h * h + np.einsum("ij,ij->i", users, users))
    return NetworkRealization(serving, own, ref, h, controls.window_radius, tuple(seed_stamp))


def dump_realization(real, path):
    """Write one CSV row per interferer: own_serving_distance, ref_distance."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["own_serving_distance", "ref_distance"])
        for own, ref in zip(real.own_distance, real.ref_distance):
            w.writerow([repr(float(own)), repr(float(ref))])

"""Monte Carlo engines for the conditional success probability.

``semi_analytic`` samples node locations and LoS labels and evaluates the
closed-form success probability per realization. ``full_fading`` keeps the
same geometry but draws every fading gain explicitly and counts SINR
exceedances. The two share only the geometry/channel primitives, so each
checks the other.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic, streams
from .channel import los_probability_3d, sample_tags
from .geometry import sample_realization

SEMI_ANALYTIC = "semi_analytic"
FULL_FADING = "full_fading"


@dataclass
class MetaSamples:
    theta: float
    method: str
    values: np.ndarray
    seed: int
    fingerprint: str
    n_fading: int | None = None

    def __len__(self):
        return len(self.values)


@dataclass
class MetaCurve:
    gamma_grid: np.ndarray
    curves: dict = field(default_factory=dict)
    moments: object = None


def tagged_realization(params, controls, index):
    """Geometry and LoS labels of realization ``index``; identical for both engines."""
    real = sample_realization(params, controls, streams.stream(controls.seed, index, streams.GEOMETRY),
                              seed_stamp=(controls.seed, index))
    return sample_tags(real, params, streams.stream(controls.seed, index, streams.TAGS),
                       controls.serving_state)


def _semi_chunk(args):
    params, controls, thetas, indices = args
    out = np.empty((len(indices), len(thetas)))
    for row, idx in enumerate(indices):
        tagged = tagged_realization(params, controls, idx)
        for col, theta in enumerate(thetas):
            out[row, col] = analytic.conditional_success_probability(tagged, theta, params)
    return out


def full_fading_sinr(tagged, params, n_fading, rng):
    """SINR of the reference link over ``n_fading`` independent fading draws."""
    real = tagged.realization
    R = real.serving_distance
    if tagged.serving_los is None:
        los = rng.random(n_fading) < los_probability_3d(R, params)
    else:
        los = np.full(n_fading, tagged.serving_los)
    m0 = np.where(los, params.m_l, params.m_n).astype(float)
    g0 = rng.gamma(m0, 1.0 / m0)
    alpha0 = np.where(los, params.alpha_l, params.alpha_n)
    eps0 = np.where(los, params.eps_l, params.eps_n)
    rho0 = np.where(los, params.rho_l, params.rho_n)
    eta0 = np.where(los, params.eta_l, params.eta_n)
    p_tx = rho0 * R ** (alpha0 * eps0)
    signal = p_tx * eta0 * g0 * R ** (-alpha0)

    e, j = tagged.e_los, tagged.j_los
    p_i = np.where(e, params.rho_l * real.own_distance ** (params.alpha_l * params.eps_l),
                   params.rho_n * real.own_distance ** (params.alpha_n * params.eps_n))
    path = np.where(j, params.eta_l * real.ref_distance ** (-params.alpha_l),
                    params.eta_n * real.ref_distance ** (-params.alpha_n))
    m_i = np.where(j, params.m_l, params.m_n).astype(float)
    if len(m_i):
        gains = rng.gamma(m_i, 1.0 / m_i, size=(n_fading, len(m_i)))
        interference = gains @ (p_i * path)
    else:
        interference = np.zeros(n_fading)
    return signal / (interference + params.sigma2)


def _full_chunk(args):
    params, controls, thetas, indices = args
    out = np.empty((len(indices), len(thetas)))
    th = np.asarray(thetas)
    for row, idx in enumerate(indices):
        tagged = tagged_realization(params, controls, idx)
        sinr = full_fading_sinr(tagged, params, controls.n_fading,
                                streams.stream(controls.seed, idx, streams.FADING))
        out[row] = np.mean(sinr[:, None] > th[None, :], axis=0)
    return out


def _run(chunk_fn, params, controls, thetas):
    idx = np.arange(controls.n_realizations)
    n_chunks = max(1, min(controls.workers * 4, len(idx)))
    jobs = [(params, controls, list(thetas), part) for part in np.array_split(idx, n_chunks)]
    if controls.workers > 1:
        with ProcessPoolExecutor(max_workers=controls.workers) as ex:
            parts = list(ex.map(chunk_fn, jobs))
    else:
        parts = [chunk_fn(job) for job in jobs]
    return np.vstack(parts)


def _package(values, thetas, method, params, controls):
    fp = params.fingerprint()
    n_f = controls.n_fading if method == FULL_FADING else None
    return [MetaSamples(float(t), method, values[:, i].copy(), controls.seed, fp, n_f)
            for i, t in enumerate(thetas)]


def run_semi_analytic_sweep(params, controls, thetas):
    """Closed-form success probabilities for every realization and every threshold."""
    vals = _run(_semi_chunk, params, controls, thetas)
    return _package(vals, thetas, SEMI_ANALYTIC, params, controls)


def run_full_fading_sweep(params, controls, thetas):
    """Fraction of fading draws with SINR above each threshold, per realization."""
    vals = _run(_full_chunk, params, controls, thetas)
    return _package(vals, thetas, FULL_FADING, params, controls)


def run_semi_analytic(params, controls, theta):
    return run_semi_analytic_sweep(params, controls, [theta])[0]


def run_full_fading(params, controls, theta):
    return run_full_fading_sweep(params, controls, [theta])[0]


def empirical_meta(samples, gamma_grid):
    """Fraction of values strictly above each gamma."""
    v = np.asarray(getattr(samples, "values", samples), dtype=float)
    if v.size == 0:
        raise ValueError("empirical_meta needs at least one sample")
    g = np.asarray(gamma_grid, dtype=float)
    out = np.mean(v[None, :] > g.reshape(-1)[:, None], axis=1)
    return float(out[0]) if g.ndim == 0 else out.reshape(g.shape)


def empirical_moment(samples, b):
    v = np.asarray(getattr(samples, "values", samples), dtype=float)
    if v.size == 0:
        raise ValueError("empirical_moment needs at least one sample")
    return float(np.mean(v ** b))


def paired_standard_error(a, b):
    """Standard error of mean(a) - mean(b) for paired per-realization values."""
    a = np.asarray(getattr(a, "values", a), dtype=float)
    b = np.asarray(getattr(b, "values", b), dtype=float)
    d = a - b
    return float(np.std(d, ddof=1) / math.sqrt(len(d))) if len(d) > 1 else math.inf


def write_samples(samples, path):
    """Columnar dump: '#'-prefixed header lines, then realization_index,value rows."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# method={samples.method}\n# theta={samples.theta!r}\n")
        fh.write(f"# seed={samples.seed}\n# params_fingerprint={samples.fingerprint}\n")
        if samples.n_fading is not None:
            fh.write(f"# n_fading={samples.n_fading}\n")
        w = csv.writer(fh)
        w.writerow(["realization_index", "value"])
        for i, v in enumerate(samples.values):
            w.writerow([i, repr(float(v))])


def read_samples(path):
    header = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                header[k.strip()] = v.strip()
            elif line.startswith("realization_index"):
                continue
            elif line.strip():
                _, v = line.split(",")
                rows.append(float(v))
    n_f = header.get("n_fading")
    return MetaSamples(float(header["theta"]), header["method"], np.array(rows),
                       int(header["seed"]), header["params_fingerprint"],
                       int(n_f) if n_f is not None else None)

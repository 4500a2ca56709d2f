"""Closed-form conditional success probability, its moments and meta-distribution inversions.

The Nakagami CDF is replaced by Alzer's bound, which turns the success
probability into a finite alternating sum of Laplace-transform terms. Moments
come from the PPP probability generating functional of the interferers.
"""

from __future__ import annotations

import itertools
import math
import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .channel import los_probability, los_probability_3d


class QuadratureError(RuntimeError):
    """Moment quadrature failed to reach the requested tolerance."""

    def __init__(self, message, value, achieved):
        super().__init__(message)
        self.value = value
        self.achieved = achieved


def beta2(m):
    """Alzer constant (m!)^(-1/m)."""
    return math.exp(-math.lgamma(m + 1) / m)


def g_coefficient(state, r, theta, params):
    """beta2(m) * m * theta * r**((1-eps)*alpha) / (rho*eta) for the serving branch ``state``.

    Multiply by the binomial index k to get the per-term factor.
    """
    alpha, eps, rho, eta, m = params.branch(state)
    r = np.asarray(r, dtype=float)
    return beta2(m) * m * theta * r ** ((1.0 - eps) * alpha) / (rho * eta)


def _interferer_coupling(e_los, j_los, R_ui, D_ui, params):
    """rho_e * eta_j * R_ui**(alpha_e*eps_e) * D_ui**(-alpha_j), and m_j."""
    e_los = np.asarray(e_los, dtype=bool)
    j_los = np.asarray(j_los, dtype=bool)
    rho_e = np.where(e_los, params.rho_l, params.rho_n)
    pow_e = np.where(e_los, params.alpha_l * params.eps_l, params.alpha_n * params.eps_n)
    eta_j = np.where(j_los, params.eta_l, params.eta_n)
    alpha_j = np.where(j_los, params.alpha_l, params.alpha_n)
    m_j = np.where(j_los, params.m_l, params.m_n).astype(float)
    coupling = rho_e * eta_j * np.asarray(R_ui, float) ** pow_e * np.asarray(D_ui, float) ** (-alpha_j)
    return coupling, m_j


def interference_factor(e, j, g, R_ui, D_ui, params):
    """Expected suppression (m_j / (m_j + g*rho_e*eta_j*R**(alpha_e eps_e)*D**-alpha_j))**m_j.

    ``e`` and ``j`` are 'l'/'n' labels or boolean LoS arrays.
    """
    e_los = (e == "l") if isinstance(e, str) else e
    j_los = (j == "l") if isinstance(j, str) else j
    coupling, m_j = _interferer_coupling(e_los, j_los, R_ui, D_ui, params)
    out = np.exp(-m_j * np.log1p(np.asarray(g, float) * coupling / m_j))
    return float(out) if np.ndim(out) == 0 else out


def branch_success(tagged, theta, params, state):
    """Success probability given the serving link is in ``state`` (no LoS weighting)."""
    real = tagged.realization
    m = params.branch(state)[4]
    c = float(g_coefficient(state, real.serving_distance, theta, params))
    coupling, m_j = _interferer_coupling(
        tagged.e_los, tagged.j_los, real.own_distance, real.ref_distance, params)
    total = 0.0
    for k in range(1, m + 1):
        g = k * c
        log_prod = -g * params.sigma2 - np.sum(m_j * np.log1p(g * coupling / m_j))
        total += math.comb(m, k) * (-1) ** (k + 1) * math.exp(log_prod)
    return min(max(total, 0.0), 1.0)


def conditional_success_probability(tagged, theta, params):
    """Success probability of the reference link given node locations and LoS labels.

    When the tagged realization carries a frozen serving state, the matching
    branch is returned; otherwise both branches are weighted by the LoS
    probability of the serving link.
    """
    if tagged.serving_los is not None:
        return branch_success(tagged, theta, params, "l" if tagged.serving_los else "n")
    p_l = float(los_probability_3d(tagged.realization.serving_distance, params))
    val = (p_l * branch_success(tagged, theta, params, "l")
           + (1.0 - p_l) * branch_success(tagged, theta, params, "n"))
    return min(max(val, 0.0), 1.0)


# --- PGFL / Laplace transform ---------------------------------------------------

@dataclass
class _InterfererGrid:
    """Quadrature grid over (own horizontal offset y, horizontal distance x to the reference UAV).

    For each (e, j) pair it stores the coupling coefficient A(y, x), m_j and the
    combined weight 2*pi*lambda * P_e(y) * P_j(x) * f(y) * x (all measure factors).
    """

    terms: list
    tail_coeff: float  # sum over (e, j) of the far-field bound on the intensity integral per unit g


def _x_edges(h, x_max):
    edges = [0.0]
    x = h / 8.0
    while x < x_max:
        edges.append(x)
        x *= 2.0
    edges.append(x_max)
    return np.array(edges)


def _interferer_grid(params, z_max, order):
    h, r_c = params.h, params.r_c
    y, wy = numerics.composite_nodes([0.0, r_c], order)
    wy = wy * 2.0 * y / r_c ** 2
    x_max = math.sqrt(max(z_max ** 2 - h ** 2, 0.0))
    x, wx = numerics.composite_nodes(_x_edges(h, x_max), order)
    r = np.sqrt(y ** 2 + h ** 2)
    z = np.sqrt(x ** 2 + h ** 2)
    pl_y = los_probability(y, h, params.a_env, params.b_env)
    pl_x = los_probability(x, h, params.a_env, params.b_env)
    # sup of P_l / P_n beyond the truncation radius (P_l decreases with distance)
    pl_far = float(los_probability(x_max, h, params.a_env, params.b_env))
    pn_far = 1.0 - float(los_probability(np.inf, h, params.a_env, params.b_env))
    terms = []
    tail = 0.0
    for e in ("l", "n"):
        alpha_e, eps_e, rho_e, _, _ = params.branch(e)
        p_e = pl_y if e == "l" else 1.0 - pl_y
        for j in ("l", "n"):
            alpha_j, _, _, eta_j, m_j = params.branch(j)
            p_j = pl_x if j == "l" else 1.0 - pl_x
            A = (rho_e * eta_j * r[:, None] ** (alpha_e * eps_e)) * z[None, :] ** (-alpha_j)
            w = 2.0 * math.pi * params.lambda_u * (wy * p_e)[:, None] * (wx * p_j * x)[None, :]
            terms.append((A, float(m_j), w))
            # 1 - prod f <= sum g_i A; integrate z**(1-alpha_j) from z_max to infinity
            mean_tx = float(np.sum(wy * p_e * rho_e * eta_j * r ** (alpha_e * eps_e)))
            p_far = pl_far if j == "l" else pn_far
            if alpha_j > 2:
                tail += 2.0 * math.pi * params.lambda_u * mean_tx * p_far * z_max ** (2 - alpha_j) / (alpha_j - 2)
            else:
                tail = math.inf
    return _InterfererGrid(terms, tail)


def _log_laplace(ks, c, grid, sigma2):
    """ln L for g_i = ks[i] * c, with c an array of per-node base coefficients."""
    c = np.asarray(c, dtype=float)
    ks = tuple(ks)
    out = -sum(ks) * c * sigma2
    for A, m_j, w in grid.terms:
        cA = c.reshape(c.shape + (1, 1)) * A
        s = np.zeros_like(cA)
        for k in ks:
            s -= m_j * np.log1p(k * cA / m_j)
        out = out - np.sum(-np.expm1(s) * w, axis=(-2, -1))
    return out


class TruncationWarning(UserWarning):
    """Interference beyond the integration radius is not negligible."""


def laplace_transform(g_list, params, controls, max_order=64):
    """E exp(-(g_1 + ... + g_b)(I + sigma^2)) with per-term independent interferer gains.

    Evaluated through the PGFL of the interferer process, whose intensity
    integral is truncated at ``controls.z_max`` (3D distance); the quadrature
    order grows until successive values of ln L agree to ``controls.quad_tol``.
    """
    g = np.asarray(g_list, dtype=float)
    if np.any(g < 0):
        raise ValueError("laplace_transform needs g >= 0")
    if g.size == 0 or np.all(g == 0):
        return 1.0
    z_max = controls.resolved_z_max(params)
    # g_i enters as k_i * c with c = 1
    order = 8
    prev = _log_laplace(tuple(g), 1.0, _interferer_grid(params, z_max, order), params.sigma2)
    while order < max_order:
        order = min(int(order * 1.5), max_order)
        cur = _log_laplace(tuple(g), 1.0, _interferer_grid(params, z_max, order), params.sigma2)
        done = abs(cur - prev) <= controls.quad_tol * max(abs(cur), 1e-300)
        prev = cur
        if done:
            break
    else:
        raise QuadratureError(f"Laplace transform quadrature stalled at order {order}",
                              math.exp(prev), abs(cur - prev))
    tail = laplace_tail_bound(g, params, controls)
    if tail > controls.quad_tol:
        warnings.warn(f"interference beyond z_max={z_max:.0f} m may lower ln L by up to {tail:.3g}",
                      TruncationWarning, stacklevel=2)
    return float(math.exp(prev))


def laplace_tail_bound(g_list, params, controls):
    """Upper bound on the intensity-integral mass beyond ``z_max`` (add to -ln L)."""
    grid = _interferer_grid(params, controls.resolved_z_max(params), 4)
    return float(np.sum(g_list)) * grid.tail_coeff


def _signed_tuples(m, b):
    """(multiplicity * prod C(m, k_i) * sign, k-multiset) for the b-fold binomial expansion."""
    acc = Counter()
    for ks in itertools.product(range(1, m + 1), repeat=b):
        coeff = math.prod(math.comb(m, k) for k in ks) * (-1) ** (sum(ks) + b)
        acc[tuple(sorted(ks))] += coeff
    return [(float(v), ks) for ks, v in acc.items() if v != 0]


def _moment_at_order(b_values, theta, params, z_max, order):
    h, r_c = params.h, params.r_c
    grid = _interferer_grid(params, z_max, order)
    yu, wu = numerics.composite_nodes([0.0, r_c], order)
    wu = wu * 2.0 * yu / r_c ** 2
    u = np.sqrt(yu ** 2 + h ** 2)
    pl = los_probability(yu, h, params.a_env, params.b_env)
    out = {}
    for b in b_values:
        total = 0.0
        for state, p_x in (("l", pl), ("n", 1.0 - pl)):
            c = g_coefficient(state, u, theta, params)
            m = params.branch(state)[4]
            for coeff, ks in _signed_tuples(m, b):
                lap = np.exp(_log_laplace(ks, c, grid, params.sigma2))
                total += coeff * float(np.sum(wu * p_x * lap))
        out[b] = total
    return out


@dataclass
class MomentSet:
    theta: float
    M1: float
    M2: float
    est_error: float = 0.0
    tail_change: float = 0.0
    converged: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def variance(self):
        return self.M2 - self.M1 ** 2


def moments(theta, params, controls, b_values=(1, 2), max_order=64):
    """Moments E[P_s^b] for each b in ``b_values``, refining the quadrature until
    successive orders agree to ``controls.quad_tol`` (relative).

    Returns ``(values, est_error, tail_change, converged)`` with ``values`` a dict
    b -> M_b; ``tail_change`` is the largest change of any M_b when the
    interferer field is extended from ``z_max`` to ``2*z_max``.
    """
    z_max = controls.resolved_z_max(params)
    prev = _moment_at_order(b_values, theta, params, z_max, 8)
    order = 12
    while True:
        cur = _moment_at_order(b_values, theta, params, z_max, order)
        err = max(abs(cur[b] - prev[b]) for b in b_values)
        scale = max(max(abs(cur[b]) for b in b_values), 1e-300)
        if err <= controls.quad_tol * scale or err <= 1e-14:
            converged = True
            break
        if order >= max_order:
            converged = False
            break
        prev = cur
        order = min(int(order * 1.5), max_order)
    # one-octave probe: how much the moments move if the interferer field doubles in radius
    wider = _moment_at_order(b_values, theta, params, 2.0 * z_max, order)
    tail = max(abs(wider[b] - cur[b]) for b in b_values)
    values = {b: min(max(v, 0.0), 1.0) for b, v in cur.items()}
    return values, err, tail, converged


def moment_b(b, theta, params, controls):
    """b-th moment of the conditional success probability (LoS and NLoS serving branches summed)."""
    if int(b) != b or b < 1:
        raise ValueError(f"moment_b needs a positive integer b, got {b}")
    values, err, _, converged = moments(theta, params, controls, (int(b),))
    if not converged:
        raise QuadratureError(
            f"moment quadrature for b={b} stalled at error {err:.3g}", values[int(b)], err)
    return values[int(b)]


def moment_set(theta, params, controls):
    """First and second moments with diagnostics; non-convergence is flagged, not raised."""
    values, err, tail, converged = moments(theta, params, controls, (1, 2))
    return MomentSet(theta, values[1], values[2], err, tail, converged)


# --- meta distribution -------------------------------------------------------------

def beta_approximation(M1, M2, gamma, tol=1e-9):
    """Meta distribution 1 - I_gamma(a, b) of the Beta law matching moments M1, M2."""
    if not (-tol <= M1 <= 1 + tol and M1 ** 2 - tol <= M2 <= M1 + tol):
        raise ValueError(f"moments out of order: need M1^2 <= M2 <= M1 <= 1, got M1={M1}, M2={M2}")
    gamma = np.asarray(gamma, dtype=float)
    var = M2 - M1 ** 2
    if var <= 1e-12 * max(M1, 1e-300) or M1 <= 0 or M1 >= 1 or M2 >= M1:
        # deterministic P_s = M1
        out = np.where(gamma < M1, 1.0, 0.0)
    else:
        a = M1 * (M1 - M2) / var
        b = (M1 - M2) * (1.0 - M1) / var
        out = 1.0 - numerics.regularized_incomplete_beta(np.clip(gamma, 0.0, 1.0), a, b)
    out = np.clip(out, 0.0, 1.0)
    return float(out) if np.ndim(out) == 0 else out


class SampleImaginaryMoment:
    """t -> mean(P_s**(jt)) over a sample of conditional success probabilities.

    Values are floored at 1e-300 before the logarithm. ``log_floor`` optionally
    clips log-values from below; this leaves the recovered CCDF unchanged for
    every gamma > exp(log_floor) while bounding the oscillation frequency.
    """

    def __init__(self, values, log_floor=None):
        v = np.asarray(values, dtype=float)
        if v.size == 0:
            raise ValueError("need at least one sample")
        self.n_zero = int(np.sum(v <= 0.0))
        logs = np.log(np.maximum(v, 1e-300))
        if log_floor is not None:
            logs = np.maximum(logs, log_floor)
        self.logs = logs
        self.bandwidth = float(np.max(np.abs(logs)))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape, dtype=complex)
        flat_t = t.ravel()
        flat = out.reshape(-1)
        # chunk to bound memory: len(t) x n_samples
        step = max(1, 2_000_000 // max(self.logs.size, 1))
        for i in range(0, flat_t.size, step):
            ph = np.outer(flat_t[i:i + step], self.logs)
            flat[i:i + step] = np.cos(ph).mean(axis=1) + 1j * np.sin(ph).mean(axis=1)
        return complex(out) if out.ndim == 0 else out


def imaginary_moment_from_samples(samples, t):
    """Empirical M_{jt} = mean(exp(j t ln P_s))."""
    values = getattr(samples, "values", samples)
    return SampleImaginaryMoment(values)(t)


def gil_pelaez(imaginary_moment, gamma, controls=None, t_max=None, n_t=None,
               bandwidth=None, full_output=False):
    """P(P_s > gamma) from the imaginary moments by Gil-Pelaez inversion.

    The integral of Im(exp(-jt ln gamma) M_jt)/t over [0, t_max] is split into
    panels no wider than half an oscillation of the fastest component (the
    gamma factor or ``bandwidth``, read from ``imaginary_moment.bandwidth`` when
    present), each integrated with ``n_t``-point Gauss-Legendre.
    """
    if t_max is None:
        t_max = controls.t_max if controls is not None else 1000.0
    if n_t is None:
        n_t = controls.n_t if controls is not None else 8
    gamma = np.asarray(gamma, dtype=float)
    if np.any((gamma <= 0) | (gamma >= 1)):
        raise ValueError("gil_pelaez needs gamma in (0, 1)")
    lng = np.log(np.atleast_1d(gamma))
    if bandwidth is None:
        bandwidth = getattr(imaginary_moment, "bandwidth", 1.0)
    omega = max(float(np.max(np.abs(lng))), float(bandwidth), 1.0)
    # phase difference between components can reach |ln P| + |ln gamma|
    omega += float(np.max(np.abs(lng)))
    n_panels = max(1, int(math.ceil(t_max * omega / math.pi)))
    t, w = numerics.composite_nodes(np.linspace(0.0, t_max, n_panels + 1), n_t)
    M = np.asarray(imaginary_moment(t), dtype=complex)
    integrand = np.imag(np.exp(-1j * np.outer(lng, t)) * M[None, :]) / t[None, :]
    vals = 0.5 + integrand @ w / math.pi
    # tail envelope: a unit tone at the slowest gamma frequency decays like 1/(pi*omega*t)
    tail = np.abs(M[-1]) / (math.pi * np.maximum(np.abs(lng), 1e-12) * t_max)
    vals = np.clip(vals, 0.0, 1.0)
    if np.ndim(gamma) == 0:
        vals, tail = float(vals[0]), float(tail[0])
    if full_output:
        return vals, {"tail_estimate": tail, "nodes": int(t.size)}
    return vals

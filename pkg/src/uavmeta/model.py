"""Network parameters, simulation controls and their validation.

Everything is stored in SI units (metres, watts, linear gains). Decibels only
appear in config files, through the ``*_db`` keys handled by
:func:`params_from_mapping`.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field


class ParameterError(ValueError):
    """Raised when parameters violate their domain; ``errors`` lists every violation."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(x):
    return 10.0 * math.log10(x)


def epsilon_max(alpha, rho, p_u, r_c, h):
    """Largest compensation factor that keeps every cluster user within ``p_u``.

    A user at the cluster edge, 3D distance sqrt(r_c^2 + h^2), transmitting with
    power ``rho * d**(alpha*eps)`` reaches exactly ``p_u`` at the returned value.
    """
    if p_u < rho:
        raise ParameterError([f"p_u={p_u} W below rho={rho} W: no feasible compensation factor"])
    base = math.sqrt(r_c * r_c + h * h)
    if base <= 1.0:
        raise ParameterError([f"sqrt(r_c^2+h^2)={base} m must exceed 1 for the power bound"])
    if alpha <= 0:
        raise ParameterError([f"alpha={alpha} must be positive"])
    return math.log(p_u / rho) / math.log(base) / alpha


@dataclass(frozen=True)
class NetworkParams:
    """Physical and network parameters. Defaults are the baseline network
    with h = 100 m and both compensation factors at zero."""

    lambda_b: float = 1e-6
    lambda_u: float = 1e-6
    r_c: float = 100.0
    h: float = 100.0
    a_env: float = 12.0
    b_env: float = 0.11
    rho_l: float = 0.01
    rho_n: float = 0.01
    eps_l: float = 0.0
    eps_n: float = 0.0
    p_u: float = 2.0
    sigma2: float = 1e-9
    alpha_l: float = 2.1
    alpha_n: float = 4.0
    m_l: int = 3
    m_n: int = 1
    eta_l: float = 1.0
    eta_n: float = 0.01

    def eps_max(self, state):
        """Feasible upper bound on the compensation factor for ``state`` ('l' or 'n')."""
        alpha, rho = (self.alpha_l, self.rho_l) if state == "l" else (self.alpha_n, self.rho_n)
        return epsilon_max(alpha, rho, self.p_u, self.r_c, self.h)

    def with_eps_scale(self, scale):
        """Copy with eps_x = scale * eps_max(x) on both branches."""
        return dataclasses.replace(
            self, eps_l=scale * self.eps_max("l"), eps_n=scale * self.eps_max("n")
        )

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @property
    def max_serving_distance(self):
        return math.sqrt(self.r_c ** 2 + self.h ** 2)

    def branch(self, state):
        """(alpha, eps, rho, eta, m) of the 'l' or 'n' branch."""
        if state == "l":
            return self.alpha_l, self.eps_l, self.rho_l, self.eta_l, self.m_l
        if state == "n":
            return self.alpha_n, self.eps_n, self.rho_n, self.eta_n, self.m_n
        raise ValueError(f"unknown link state {state!r}")

    def fingerprint(self):
        blob = json.dumps(dataclasses.asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def baseline_params(h=100.0, eps_scale=1.0, **overrides):
    """Baseline parameters at altitude ``h`` with eps = eps_scale * eps_max."""
    return NetworkParams(h=h, **overrides).with_eps_scale(eps_scale)


def param_errors(p):
    """Every violated invariant of ``p`` as a human-readable message."""
    errs = []
    for name in ("lambda_b", "r_c", "h", "p_u", "rho_l", "rho_n",
                 "alpha_l", "alpha_n", "eta_l", "eta_n"):
        v = getattr(p, name)
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            errs.append(f"{name}={v} must be a positive finite number")
    if not p.sigma2 >= 0:
        errs.append(f"sigma2={p.sigma2} must be >= 0")
    if p.a_env <= 0 or p.b_env <= 0:
        errs.append(f"a_env, b_env must be positive (got {p.a_env}, {p.b_env})")
    if p.lambda_u != p.lambda_b:
        errs.append(f"lambda_u={p.lambda_u} must equal lambda_b={p.lambda_b} "
                    "(one active user per cluster)")
    for name in ("m_l", "m_n"):
        m = getattr(p, name)
        if isinstance(m, bool) or int(m) != m or m < 1:
            errs.append(f"{name}={m} must be an integer >= 1")
    if errs:
        return errs
    for state in ("l", "n"):
        eps = getattr(p, f"eps_{state}")
        if eps < 0:
            errs.append(f"eps_{state} below 0 (got {eps})")
            continue
        try:
            bound = p.eps_max(state)
        except ParameterError as exc:
            errs.extend(f"eps_{state}: {e}" for e in exc.errors)
            continue
        # Small slack so eps = eps_max computed in floating point stays valid.
        if eps > bound * (1 + 1e-12):
            errs.append(f"eps_{state}={eps:.6g} exceeds the max-transmit-power bound "
                        f"eps_max={bound:.6g} (p_u={p.p_u} W at the cluster edge)")
    return errs


def validate(p):
    """Return ``p`` unchanged if valid, else raise :class:`ParameterError` listing all problems."""
    errs = param_errors(p)
    if errs:
        raise ParameterError(errs)
    return p


@dataclass(frozen=True)
class SimControls:
    seed: int = 12345
    n_realizations: int = 2000
    n_fading: int = 500
    window_radius: float = 6000.0
    z_max: float | None = None  # None: match the simulation window
    t_max: float = 1000.0
    n_t: int = 8  # Gauss-Legendre nodes per Gil-Pelaez panel
    quad_tol: float = 1e-6
    workers: int = 1
    serving_state: str = "per_realization"

    def resolved_z_max(self, params):
        if self.z_max is not None:
            return self.z_max
        return math.sqrt(self.window_radius ** 2 + params.h ** 2)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


SERVING_STATE_CONVENTIONS = ("per_realization", "per_fading")


def control_errors(c, params):
    errs = []
    for name in ("n_realizations", "n_fading", "n_t", "workers"):
        v = getattr(c, name)
        if isinstance(v, bool) or int(v) != v or v < 1:
            errs.append(f"{name}={v} must be an integer >= 1")
    if not 0 <= c.seed < 2 ** 64 or int(c.seed) != c.seed:
        errs.append(f"seed={c.seed} must be an integer in [0, 2^64)")
    min_window = 10.0 * math.sqrt(1.0 / (math.pi * params.lambda_b))
    if not c.window_radius >= min_window:
        errs.append(f"window_radius={c.window_radius} m below 10/sqrt(pi*lambda_b)={min_window:.1f} m")
    if c.z_max is not None and not c.z_max > params.max_serving_distance:
        errs.append(f"z_max={c.z_max} m must exceed sqrt(h^2+r_c^2)={params.max_serving_distance:.1f} m")
    if not c.t_max > 0:
        errs.append(f"t_max={c.t_max} must be positive")
    if not 0 < c.quad_tol < 1:
        errs.append(f"quad_tol={c.quad_tol} must lie in (0, 1)")
    if c.serving_state not in SERVING_STATE_CONVENTIONS:
        errs.append(f"serving_state={c.serving_state!r} not in {SERVING_STATE_CONVENTIONS}")
    return errs


def validate_controls(c, params):
    errs = control_errors(c, params)
    if errs:
        raise ParameterError(errs)
    return c


_PARAM_FIELDS = {f.name: f.type for f in dataclasses.fields(NetworkParams)}
_CONTROL_FIELDS = {f.name: f.type for f in dataclasses.fields(SimControls)}


def params_from_mapping(values):
    """Build NetworkParams from flat config keys.

    ``eta_l_db``/``eta_n_db`` carry the additional losses in dB; the linear
    ``eta_*`` keys are not accepted in configs. ``lambda_u`` defaults to
    ``lambda_b``. Unknown keys raise :class:`ParameterError`.
    """
    kw = {}
    errs = []
    for key, val in values.items():
        if key in ("eta_l_db", "eta_n_db"):
            kw[key[:-3]] = db_to_linear(float(val))
        elif key in _PARAM_FIELDS and key not in ("eta_l", "eta_n"):
            kw[key] = int(val) if key in ("m_l", "m_n") else float(val)
        else:
            errs.append(f"unknown parameter key {key!r}")
    if errs:
        raise ParameterError(errs)
    if "lambda_b" in kw and "lambda_u" not in kw:
        kw["lambda_u"] = kw["lambda_b"]
    return NetworkParams(**kw)


def controls_from_mapping(values):
    kw = {}
    errs = []
    for key, val in values.items():
        if key not in _CONTROL_FIELDS:
            errs.append(f"unknown control key {key!r}")
        elif key == "serving_state":
            kw[key] = str(val)
        elif key in ("seed", "n_realizations", "n_fading", "n_t", "workers"):
            kw[key] = int(val)
        else:
            kw[key] = float(val)
    if errs:
        raise ParameterError(errs)
    return SimControls(**kw)


PARAM_KEYS = tuple(k for k in _PARAM_FIELDS if k not in ("eta_l", "eta_n")) + ("eta_l_db", "eta_n_db")
CONTROL_KEYS = tuple(_CONTROL_FIELDS)

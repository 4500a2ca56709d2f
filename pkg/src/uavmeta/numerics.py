"""Quadrature, incomplete beta and binomial kernels shared by the analysis code."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[1:7:2] = _WG[:3]
_GWEIGHTS[7] = _WG[3]
_GWEIGHTS[9:15:2] = _WG[2::-1]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    est_error: float
    evaluations: int
    converged: bool

    def __float__(self):
        return float(self.value)


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = np.asarray(f(mid + half * _NODES), dtype=float)
    if y.shape != _NODES.shape:
        y = np.broadcast_to(y, _NODES.shape)
    kron = half * np.dot(_KWEIGHTS, y)
    gauss = half * np.dot(_GWEIGHTS, y)
    return kron, abs(kron - gauss)


def integrate(f, a, b, tol=1e-10, abs_tol=1e-300, max_intervals=2000):
    """Globally adaptive Gauss-Kronrod (7/15) quadrature of ``f`` over ``[a, b]``.

    ``f`` is called with a 1-D array of 15 abscissae and must return an array
    of the same length. The interval with the largest error estimate is
    bisected until the summed estimate drops below ``max(tol*|I|, abs_tol)``.
    A non-converged result is still returned, flagged with ``converged=False``.
    """
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError(f"integrate needs a < b, got [{a}, {b}]")
    val, err = _gk15(f, a, b)
    heap = [(-err, a, b, val)]
    total, total_err = val, err
    n_eval = 15
    while total_err > max(tol * abs(total), abs_tol) and len(heap) < max_intervals:
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            heapq.heappush(heap, (neg_err, lo, hi, v))
            break
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        n_eval += 30
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        # Resum from the heap to avoid drift in the running totals.
        total = math.fsum(item[3] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)
    converged = total_err <= max(tol * abs(total), abs_tol)
    return QuadratureResult(float(total), float(total_err), n_eval, bool(converged))


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Gauss-Legendre nodes and weights on [-1, 1] (cached)."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_nodes(edges, order):
    """Nodes/weights of a composite Gauss-Legendre rule over consecutive panels.

    ``edges`` are sorted panel boundaries; each panel gets ``order`` nodes.
    """
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    lo = edges[:-1, None]
    half = 0.5 * np.diff(edges)[:, None]
    nodes = lo + half * (x + 1.0)
    weights = half * w
    return nodes.ravel(), weights.ravel()


def regularized_incomplete_beta(x, a, b):
    """I_x(a, b) for x in [0, 1] and a, b > 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(np.isnan(xa)) or np.any(xa < 0.0) or np.any(xa > 1.0):
        raise ValueError("regularized_incomplete_beta: x must lie in [0, 1]")
    if not (a > 0 and b > 0):
        raise ValueError(f"regularized_incomplete_beta: need a, b > 0, got a={a}, b={b}")
    out = special.betainc(a, b, xa)
    return float(out) if np.ndim(out) == 0 else out


def log_binomial(m, k):
    """ln C(m, k) via log-gamma."""
    if int(m) != m or int(k) != k or not 0 <= k <= m:
        raise ValueError(f"log_binomial needs integers 0 <= k <= m, got m={m}, k={k}")
    return math.lgamma(m + 1) - math.lgamma(k + 1) - math.lgamma(m - k + 1)


def binomial(m, k):
    return math.comb(int(m), int(k))

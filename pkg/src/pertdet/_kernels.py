"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The two genuinely loop-bound kernels of the package live here: the Halley
iteration for the Lambert W function (per-element convergence) and the
trapezoidal circle average of log|h| used by the Jensen-identity check
(nodes x zeros double loop).  Everything LAPACK-dominated (eig, svd, expm,
solve) stays on numpy/scipy and gains nothing from jitting.

Backend selection happens once at import time:

* ``PERTDET_NUMBA=0`` (or ``false``/``off``) forces the numpy fallback.
* otherwise numba is used when importable; if the import fails the numpy
  fallback is selected silently.

``BACKEND`` reports which path is active.  Both implementations of each
kernel are importable under explicit names so the benchmark in
``benchmarks/bench_kernels.py`` can time them side by side.
"""

from __future__ import annotations

import math
import os

import numpy as np

_MAX_HALLEY_STEPS = 80


def _lambert_w_numpy(x: np.ndarray) -> np.ndarray:
    """Principal Lambert W on x >= 0, elementwise Halley iteration."""
    x = np.asarray(x, dtype=np.float64)
    w = np.where(x < math.e, x / math.e, np.log(np.maximum(x, 1.0)))
    big = x > math.e
    # refine the logarithmic initial guess W ~ log x - log log x for large x
    w = np.where(big, np.log(np.maximum(x, 2.0)) - np.log(np.maximum(np.log(np.maximum(x, 2.0)), 1.0)), w)
    for _ in range(_MAX_HALLEY_STEPS):
        ew = np.exp(w)
        f = w * ew - x
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
        step = np.where(denom != 0.0, f / np.where(denom != 0.0, denom, 1.0), 0.0)
        w = w - step
        if np.all(np.abs(f) <= 1e-13 * (1.0 + x)):
            break
    return w


def _jensen_circle_mean_numpy(zeros: np.ndarray, radius: float, nodes: int) -> float:
    """Mean of log|prod_j (1 - w/z_j)| over the circle |w| = radius.

    Uniform nodes on a periodic integrand, so the plain mean equals the
    composite trapezoid rule.
    """
    t = 2.0 * np.pi * np.arange(nodes) / nodes
    w = radius * np.exp(1j * t)
    h = np.prod(1.0 - w[:, None] / zeros[None, :], axis=1)
    return float(np.mean(np.log(np.abs(h))))


def _lambert_w_loop(x):
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        xi = x[i]
        if xi < math.e:
            w = xi / math.e
        else:
            lx = math.log(xi)
            llx = math.log(lx) if lx > 1.0 else 0.0
            w = lx - llx
        for _ in range(_MAX_HALLEY_STEPS):
            ew = math.exp(w)
            f = w * ew - xi
            if abs(f) <= 1e-13 * (1.0 + xi):
                break
            denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
            if denom == 0.0:
                break
            w -= f / denom
        out[i] = w
    return out


def _jensen_circle_mean_loop(zeros, radius, nodes):
    total = 0.0
    for k in range(nodes):
        t = 2.0 * math.pi * k / nodes
        w = radius * complex(math.cos(t), math.sin(t))
        h = complex(1.0, 0.0)
        for j in range(zeros.shape[0]):
            h *= 1.0 - w / zeros[j]
        total += math.log(abs(h))
    return total / nodes


def _want_numba() -> bool:
    flag = os.environ.get("PERTDET_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


BACKEND = "numpy"
lambert_w_kernel = _lambert_w_numpy
jensen_circle_mean = _jensen_circle_mean_numpy

if _want_numba():
    try:
        from numba import njit

        _lambert_w_njit = njit(cache=True)(_lambert_w_loop)
        _jensen_circle_mean_njit = njit(cache=True)(_jensen_circle_mean_loop)

        def _lambert_w_numba(x: np.ndarray) -> np.ndarray:
            return _lambert_w_njit(np.ascontiguousarray(x, dtype=np.float64))

        def _jensen_circle_mean_numba(zeros: np.ndarray, radius: float, nodes: int) -> float:
            return float(
                _jensen_circle_mean_njit(
                    np.ascontiguousarray(zeros, dtype=np.complex128), float(radius), int(nodes)
                )
            )

        BACKEND = "numba"
        lambert_w_kernel = _lambert_w_numba
        jensen_circle_mean = _jensen_circle_mean_numba
    except ImportError:  # pragma: no cover - exercised only without numba
        pass

"""Explicit eigenvalue-counting bounds and their supporting special functions.

The central quantity is the factor

    F_p(x) = W(c x)^p / ( (1/p - W(c x))^{p+1} * x^p ),   c = (1/p) e^{1/p},

defined for 0 < x < 1, where W is the principal Lambert W function.  It turns
a resolvent envelope ||(lam - A)^{-1}|| <= C / (|lam| - R) into a bound on the
number of perturbed eigenvalues outside radius s > R, and it satisfies

    F_p(x) <= (p+1)^{p+1} / p^p * (1 - x)^{-(p+1)},

which yields the simpler relaxed bounds.  As x -> 0 the factor tends to p*e,
the value used when R = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from ._kernels import jensen_circle_mean, lambert_w_kernel
from .report import BoundReport

JENSEN_TOL = 1e-6
JENSEN_START_NODES = 4096
JENSEN_CAP_NODES = 2**19
ENVELOPE_RTOL = 1e-9


def lambert_w(x):
    """Principal Lambert W on x >= 0 with residual |W e^W - x| <= 1e-12 (1+x).

    Accepts a scalar or an array; Halley iteration from a logarithmic initial
    guess (jit-compiled when the numba backend is active).
    """
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(arr < 0):
        raise ValueError("lambert_w is defined here for x >= 0 only")
    out = lambert_w_kernel(arr.ravel()).reshape(arr.shape)
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return float(out.ravel()[0])
    return out


def count_factor_limit(p: float) -> float:
    """Limit of the counting factor as its argument tends to zero: p*e."""
    return p * math.e


def count_factor(p: float, x: float) -> float:
    """The sharp envelope-to-count factor F_p(x) on 0 < x < 1."""
    if not 0.0 < x < 1.0:
        raise ValueError(f"argument must lie in (0, 1), got {x}")
    if p <= 0:
        raise ValueError("order must be positive")
    w = lambert_w((1.0 / p) * math.exp(1.0 / p) * x)
    denom = (1.0 / p - w) ** (p + 1.0) * x**p
    if denom < 1e-300:
        raise OverflowError(
            f"counting factor denominator underflowed at p={p}, x={x} (argument too close to 1)"
        )
    return w**p / denom


def count_factor_relaxed(p: float, x: float) -> float:
    """Closed-form upper bound (p+1)^{p+1}/p^p * (1-x)^{-(p+1)} for the factor."""
    if not 0.0 <= x < 1.0:
        raise ValueError(f"argument must lie in [0, 1), got {x}")
    return (p + 1.0) ** (p + 1.0) / p**p / (1.0 - x) ** (p + 1.0)


def disk_exterior_radius(t: float, s: float) -> float:
    """Conformal radius of {|z| > s} inside {|z| > t}: simply t/s.

    The exterior disk {|z| > t} maps onto the unit disk by z -> t/z (infinity
    to 0), so the sup of |t/z| over {|z| > s} is t/s.
    """
    if not 0 < t < s:
        raise ValueError(f"need 0 < t < s, got t={t}, s={s}")
    return t / s


def pseudospectrum_count_bound(
    eps: float, r: float, p: float, eigenvalue_const: float, growth_const: float, norm_k: float
) -> float:
    """Count bound for eigenvalues inside a region of conformal radius r.

    g^p * c / (eps^p * log(1/r)) * ||K||_I^p, valid for regions avoiding the
    eps-pseudospectrum of the unperturbed operator.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"conformal radius must lie in (0, 1), got {r}")
    if eps <= 0:
        raise ValueError("eps must be positive")
    return (
        eigenvalue_const**p * growth_const * norm_k**p / (eps**p * math.log(1.0 / r))
    )


@dataclass(frozen=True)
class ResolventEnvelope:
    """Certified (or not) resolvent decay ||(lam-A)^{-1}|| <= C / (|lam| - R)."""

    radius: float  # spectral threshold R
    constant: float  # C
    certified: bool = False
    witness: complex | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("spectral threshold must be >= 0")
        if self.constant <= 0:
            raise ValueError("envelope constant must be positive")


def certify_envelope(a, radius: float, constant: float, grid=None, angles: int = 64) -> ResolventEnvelope:
    """Check the resolvent envelope on an angular x radial grid.

    Verifies s_min(lam*I - A) >= (|lam| - R) / C at every grid point (with
    relative slack 1e-9); the default radial grid is 50 points log-spaced
    over (R, 100 R + 100].  Requires R >= spectral radius of A.  On any
    violation the envelope comes back uncertified with the witnessing lam.
    """
    a = linalg.as_matrix(a, "A")
    if angles < 64:
        raise ValueError("use at least 64 angles per radius")
    r_a = linalg.spectral_radius(a)
    if radius < r_a * (1.0 - 1e-12):
        raise ValueError(f"threshold {radius} is below the spectral radius {r_a}")
    if grid is None:
        grid = radius + np.geomspace(1e-3 * (radius + 1.0), 100.0 * radius + 100.0 - radius, 50)
    grid = np.asarray(grid, dtype=np.float64)
    if np.any(grid <= radius):
        raise ValueError("all grid radii must exceed the spectral threshold")
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    thetas = 2.0 * np.pi * np.arange(angles) / angles
    for rho in grid:
        required = (rho - radius) / constant
        for theta in thetas:
            lam = rho * np.exp(1j * theta)
            smin = float(np.linalg.svd(lam * eye - a, compute_uv=False)[-1])
            if smin < required * (1.0 - ENVELOPE_RTOL):
                return ResolventEnvelope(radius, constant, certified=False, witness=complex(lam))
    return ResolventEnvelope(radius, constant, certified=True)


def envelope_count_bound(
    s: float,
    envelope: ResolventEnvelope,
    p: float,
    eigenvalue_const: float,
    growth_const: float,
    norm_k: float,
) -> tuple[float, float]:
    """(tight, relaxed) count bounds outside radius s under a resolvent envelope.

    tight   = C^p g^p c * F_p(R/s) / s^p * ||K||_I^p
    relaxed = C^p g^p c * (p+1)^{p+1}/p^p * s/(s-R)^{p+1} * ||K||_I^p

    with F_p(0+) = p*e when R = 0.  The tight value never exceeds the relaxed
    one.
    """
    r_thr, c_a = envelope.radius, envelope.constant
    if s <= r_thr:
        raise ValueError(f"s must exceed the spectral threshold {r_thr}, got {s}")
    shared = c_a**p * eigenvalue_const**p * growth_const * norm_k**p
    factor = count_factor_limit(p) if r_thr == 0.0 else count_factor(p, r_thr / s)
    tight = shared * factor / s**p
    relaxed = shared * (p + 1.0) ** (p + 1.0) / p**p * s / (s - r_thr) ** (p + 1.0)
    return tight, relaxed


def norm_count_bound(
    s: float, norm_a: float, p: float, eigenvalue_const: float, growth_const: float, norm_k: float
) -> float:
    """Count bound outside radius s > ||A|| from the operator norm alone."""
    if s <= norm_a:
        raise ValueError(f"s must exceed ||A||={norm_a}, got {s}")
    return (
        eigenvalue_const**p
        * growth_const
        * (p + 1.0) ** (p + 1.0)
        / p**p
        * s
        / (s - norm_a) ** (p + 1.0)
        * norm_k**p
    )


def unperturbed_count_bound(s: float, p: float, eigenvalue_const: float, norm_k: float) -> float:
    """Count bound for the unperturbed case A = 0: g^p ||K||_I^p / s^p."""
    if s <= 0:
        raise ValueError("s must be positive")
    return eigenvalue_const**p * norm_k**p / s**p


def jensen_identity_check(zeros, r: float, start_nodes: int = JENSEN_START_NODES) -> BoundReport:
    """Zero-counting integral against the circle average of log|h|.

    For h(w) = prod_j (1 - w/z_j) (so h(0) = 1) the integral of n(h; s)/s
    over (0, r] equals the average of log|h| on |w| = r.  The left side is
    evaluated in closed form, the right side by the composite trapezoid rule
    with node doubling until the value moves by less than 1e-8.
    """
    zeros = np.asarray(list(zeros), dtype=np.complex128)
    if zeros.size and np.any(np.abs(zeros) == 0.0):
        raise ValueError("zeros must be nonzero (h(0) = 1 requires it)")
    if zeros.size and np.any(np.abs(zeros) >= 1.0):
        raise ValueError("zeros must lie strictly inside the unit disk")
    if not 0.0 < r < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    if zeros.size and np.any(np.abs(np.abs(zeros) - r) < 1e-12):
        raise ValueError("a zero lies on the integration circle")

    moduli = np.abs(zeros)
    lhs = float(np.sum(np.log(r / moduli[moduli <= r]))) if zeros.size else 0.0

    nodes = start_nodes
    if zeros.size == 0:
        rhs = 0.0
    else:
        rhs = jensen_circle_mean(zeros, r, nodes)
        while nodes < JENSEN_CAP_NODES:
            nodes *= 2
            refined = jensen_circle_mean(zeros, r, nodes)
            if abs(refined - rhs) < 1e-8:
                rhs = refined
                break
            rhs = refined

    return BoundReport.from_values(
        "jensen_identity",
        {"n_zeros": int(zeros.size), "radius": r, "lhs": lhs, "rhs": rhs, "nodes": nodes},
        bound_value=JENSEN_TOL,
        observed=abs(lhs - rhs),
    )

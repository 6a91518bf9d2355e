"""Plain and order-p regularized determinants of I - F on dense matrices.

The regularized determinant of order p damps det(I - F) by exponential trace
corrections up to order ceil(p) - 1:

    rdet_p(I - F) = det(I - F) * exp( sum_{k=1}^{ceil(p)-1} tr(F^k) / k )

with the empty sum (ceil(p) = 1) equal to zero.  An equivalent form runs over
the eigenvalue multiset:

    rdet_p(I - F) = prod_j (1 - mu_j) * exp( sum_{k=1}^{ceil(p)-1} mu_j^k / k )

Every call evaluates both and demands agreement, so a silent eigensolver or
LU failure cannot leak into downstream bounds.  The primary value is the LU
form: LU with partial pivoting behaves better than the eigenvalue product
near determinant zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .report import BoundReport

# agreement demanded between the LU-trace form and the eigenvalue-product form
CONSISTENCY_RTOL = 1e-9
# |rdet| below this (scaled) counts as a vanishing determinant
VANISH_TOL = 1e-10


class DeterminantConsistencyError(Exception):
    """The two determinant representations disagreed beyond tolerance."""


def ceil_order(p: float) -> int:
    """Smallest positive integer >= p (integer p maps to itself)."""
    if p <= 0:
        raise ValueError(f"regularization order must be positive, got {p}")
    return int(math.ceil(p))


@dataclass(frozen=True)
class RegularizationOrder:
    """Order p > 0 together with its integer ceiling."""

    p: float

    def __post_init__(self):
        ceil_order(self.p)

    @property
    def ceil_p(self) -> int:
        return ceil_order(self.p)


@dataclass(frozen=True)
class GrowthConstant:
    """Constant in |rdet_p(I-F)| <= exp(c * sum |mu_j|^p); provenance tracked."""

    p: float
    value: float
    provenance: str  # "paper" | "user" | "heuristic"

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("growth constant must be positive")
        if self.provenance not in ("paper", "user", "heuristic"):
            raise ValueError(f"unknown provenance {self.provenance!r}")


def det_growth_constant(p: float, override: float | None = None) -> GrowthConstant:
    """Known admissible growth constant for order p.

    1/p for p <= 1; (p-1)/p for integer p >= 2 except p = 3, which gets 1.
    Non-integer p > 1 has no published value here, so 1 is returned flagged
    as a heuristic; pass `override` to supply your own (provenance "user").
    """
    if p <= 0:
        raise ValueError(f"order must be positive, got {p}")
    if override is not None:
        return GrowthConstant(p, float(override), "user")
    if p <= 1:
        return GrowthConstant(p, 1.0 / p, "paper")
    if float(p).is_integer():
        n = int(p)
        return GrowthConstant(p, 1.0 if n == 3 else (n - 1.0) / n, "paper")
    return GrowthConstant(p, 1.0, "heuristic")


def det_id_minus(f) -> complex:
    """det(I - F) by LU with partial pivoting."""
    f = linalg.as_matrix(f, "F")
    return complex(np.linalg.det(np.eye(f.shape[0], dtype=np.complex128) - f))


def trace_power(f, k: int) -> complex:
    """tr(F^k) for integer k >= 1."""
    if k < 1:
        raise ValueError(f"power must be >= 1, got {k}")
    f = linalg.as_matrix(f, "F")
    return complex(np.trace(np.linalg.matrix_power(f, k)))


def _trace_correction(l: np.ndarray, ceil_p: int) -> complex:
    total = 0.0 + 0.0j
    power = np.eye(l.shape[0], dtype=np.complex128)
    for k in range(1, ceil_p):
        power = power @ l
        total += np.trace(power) / k
    return total


def _eigen_product_form(mu: np.ndarray, ceil_p: int) -> complex:
    out = 1.0 + 0.0j
    for m in mu:
        corr = sum(m**k / k for k in range(1, ceil_p))
        out *= (1.0 - m) * np.exp(corr)
    return complex(out)


def _agree(a: complex, b: complex, rtol: float) -> bool:
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1.0)


def regularized_det_forms(p: float, l) -> tuple[complex, complex]:
    """Both representations of the order-p determinant: (LU-trace, eigenvalue product)."""
    ceil_p = ceil_order(p)
    l = linalg.as_matrix(l, "L")
    primary = det_id_minus(l) * complex(np.exp(_trace_correction(l, ceil_p)))
    check = _eigen_product_form(linalg.eigenvalues(l), ceil_p)
    return primary, check


def regularized_det(p: float, l) -> complex:
    """Order-p regularized determinant of I - L.

    Computes the LU-trace form, cross-checks it against the eigenvalue
    product, and raises :class:`DeterminantConsistencyError` when the two
    disagree beyond CONSISTENCY_RTOL (relative, floored at scale 1).
    """
    primary, check = regularized_det_forms(p, l)
    if not _agree(primary, check, CONSISTENCY_RTOL):
        raise DeterminantConsistencyError(
            f"trace form {primary} and eigenvalue-product form {check} disagree "
            f"(p={p}, |diff|={abs(primary - check):.3e})"
        )
    return primary


def regularized_det_vanishes(p: float, f) -> bool:
    """Vanishing classification at the (scaled) VANISH_TOL threshold."""
    f = linalg.as_matrix(f, "F")
    return abs(regularized_det(p, f)) <= VANISH_TOL


def growth_bound_check(p: float, f, constant: GrowthConstant | None = None) -> BoundReport:
    """|rdet_p(I-F)| against exp(c * sum_j |mu_j(F)|^p)."""
    constant = constant or det_growth_constant(p)
    if constant.p != p:
        raise ValueError(f"growth constant is for order {constant.p}, not {p}")
    f = linalg.as_matrix(f, "F")
    lhs = abs(regularized_det(p, f))
    power_sum = float(np.sum(np.abs(linalg.eigenvalues(f)) ** p))
    rhs = math.exp(constant.value * power_sum)
    return BoundReport.from_values(
        "det_growth",
        {"p": p, "growth_const": constant.value, "provenance": constant.provenance,
         "n": f.shape[0], "eig_power_sum": power_sum},
        bound_value=rhs,
        observed=lhs,
    )


def lipschitz_check(p: float, ideal, k, l, constant: GrowthConstant | None = None) -> BoundReport:
    """Local Lipschitz bound for rdet_p under the ideal norm of the difference.

    |rdet_p(I-K) - rdet_p(I-L)| must not exceed
    ||K-L||_I * exp( q_I^{2p} * g^p * c * (||K||_I + ||L||_I + 1)^p )
    where g is the ideal's eigenvalue constant, q_I its quasi-triangle
    constant and c the growth constant for order p.
    """
    from .ideals import ideal_norm  # local import to avoid a module cycle

    constant = constant or det_growth_constant(p)
    k = linalg.as_matrix(k, "K")
    l = linalg.as_matrix(l, "L")
    if k.shape != l.shape:
        raise ValueError("K and L must have the same dimension")
    lhs = abs(regularized_det(p, k) - regularized_det(p, l))
    nk, nl, ndiff = ideal_norm(ideal, k), ideal_norm(ideal, l), ideal_norm(ideal, k - l)
    exponent = (
        ideal.q_triangle ** (2 * p)
        * ideal.gamma_p**p
        * constant.value
        * (nk + nl + 1.0) ** p
    )
    rhs = ndiff * math.exp(exponent)
    return BoundReport.from_values(
        "det_lipschitz",
        {"p": p, "ideal": ideal.label, "norm_k": nk, "norm_l": nl, "norm_diff": ndiff,
         "exponent": exponent},
        bound_value=rhs,
        observed=lhs,
    )


def factorization_check(f, l, p: float) -> BoundReport:
    """Product identity for rdet_p((I-F)(I-L)) with F of finite rank.

    With H = F + L - FL the right-hand side is
    det(I-F) * rdet_p(I-L) * exp( sum_{k=1}^{ceil(p)-1} sum_{m=0}^{k-1}
    tr( F (I-L) L^m H^{k-1-m} ) / k ), using L^0 = I.
    """
    f = linalg.as_matrix(f, "F")
    l = linalg.as_matrix(l, "L")
    if f.shape != l.shape:
        raise ValueError("F and L must have the same dimension")
    ceil_p = ceil_order(p)
    n = f.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    h = f + l - f @ l
    lhs = regularized_det(p, h)

    correction = 0.0 + 0.0j
    f_times = f @ (eye - l)
    for k in range(1, ceil_p):
        for m in range(k):
            term = f_times @ np.linalg.matrix_power(l, m) @ np.linalg.matrix_power(h, k - 1 - m)
            correction += np.trace(term) / k
    rhs = det_id_minus(f) * regularized_det(p, l) * complex(np.exp(correction))

    observed = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)
    return BoundReport.from_values(
        "det_factorization",
        {"p": p, "n": n, "lhs": complex(lhs), "rhs": complex(rhs)},
        bound_value=1e-8,
        observed=observed,
    )

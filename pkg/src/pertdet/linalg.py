"""Dense complex linear algebra primitives shared by every other module.

All operators are represented by dense square complex matrices (the
finite-rank picture); inputs are validated once via :func:`as_matrix` and
everything downstream works on ``complex128`` ndarrays.  Operations are pure
functions and safe to call concurrently.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

# s_min(lam*I - A) <= SINGULARITY_RTOL * ||A|| rejects lam as a spectrum point
SINGULARITY_RTOL = 1e-12
# eigenvalues closer than CLUSTER_RTOL * ||M|| may be merged when multiplicities
# are compared
CLUSTER_RTOL = 1e-7


class LinalgError(Exception):
    """Base class for failures of the dense kernels."""


class EigendecompositionError(LinalgError):
    """Eigenvalue iteration did not converge; carries the matrix label."""

    def __init__(self, label: str, cause: Exception):
        super().__init__(f"eigenvalue iteration failed to converge for matrix {label!r}: {cause}")
        self.label = label


class SingularResolvent(LinalgError):
    """Requested resolvent point is (numerically) in the spectrum."""

    def __init__(self, lam: complex, smin: float, threshold: float):
        super().__init__(
            f"lambda={lam} is within tolerance of the spectrum: "
            f"smin={smin:.3e} <= threshold={threshold:.3e}"
        )
        self.lam = lam
        self.smin = smin
        self.threshold = threshold


class ResolventResidualError(LinalgError):
    """Resolvent solve produced a residual beyond the certified envelope."""


class MatrixExponentialOverflow(LinalgError):
    """exp(t*H) produced non-finite entries."""


def as_matrix(m, label: str = "matrix") -> np.ndarray:
    """Validate and convert to a square complex128 ndarray."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{label} must be square, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError(f"{label} must have dimension >= 1")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{label} contains non-finite entries")
    return a


def eigenvalues(m, label: str = "matrix") -> np.ndarray:
    """All eigenvalues with algebraic multiplicity (length n, unordered)."""
    a = as_matrix(m, label)
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise EigendecompositionError(label, exc) from exc


def singular_values(m, label: str = "matrix") -> np.ndarray:
    """Singular values, sorted descending; the first equals the operator norm."""
    a = as_matrix(m, label)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise EigendecompositionError(label, exc) from exc


def operator_norm(m) -> float:
    return float(singular_values(m)[0])


def spectral_radius(m) -> float:
    return float(np.max(np.abs(eigenvalues(m))))


def norms(m) -> tuple[float, float]:
    """(operator norm, spectral radius); the radius never exceeds the norm."""
    a = as_matrix(m)
    return float(np.linalg.svd(a, compute_uv=False)[0]), float(np.max(np.abs(np.linalg.eigvals(a))))


def smallest_singular_value(m) -> float:
    return float(singular_values(m)[-1])


def resolvent(a, lam: complex, return_residual: bool = False):
    """(lam*I - A)^{-1} for lam outside the spectrum of A.

    The point is accepted only if s_min(lam*I - A) stays above
    ``SINGULARITY_RTOL * ||A||``; otherwise :class:`SingularResolvent` is
    raised carrying the offending s_min.  On success the residual
    ``||(lam*I - A) R - I||`` is checked against 1e-10 times the condition
    number of lam*I - A, and returned alongside R when ``return_residual``.
    """
    a = as_matrix(a, "A")
    n = a.shape[0]
    shifted = lam * np.eye(n, dtype=np.complex128) - a
    svals = np.linalg.svd(shifted, compute_uv=False)
    smin = float(svals[-1])
    threshold = SINGULARITY_RTOL * float(np.linalg.svd(a, compute_uv=False)[0])
    if smin <= threshold:
        raise SingularResolvent(lam, smin, threshold)
    r = np.linalg.solve(shifted, np.eye(n, dtype=np.complex128))
    residual = float(np.linalg.norm(shifted @ r - np.eye(n), ord=2))
    cond = float(svals[0]) / smin
    if residual > 1e-10 * cond:
        raise ResolventResidualError(
            f"resolvent residual {residual:.3e} exceeds 1e-10 * cond = {1e-10 * cond:.3e}"
        )
    if return_residual:
        return r, residual
    return r


def matrix_exponential(h, t: float = 1.0) -> np.ndarray:
    """exp(t*H) for t >= 0 via scaling-and-squaring (scipy Pade backend)."""
    a = as_matrix(h, "H")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0.0:
        return np.eye(a.shape[0], dtype=np.complex128)
    result = scipy.linalg.expm(t * a)
    if not np.all(np.isfinite(result)):
        raise MatrixExponentialOverflow(
            f"exp(t*H) overflowed for t={t}, ||H||~{float(np.max(np.abs(a))):.3e}"
        )
    return np.asarray(result, dtype=np.complex128)


def cluster_multiplicity(values: np.ndarray, target: complex, tol: float) -> int:
    """Count entries within tol of target (algebraic multiplicity of a cluster)."""
    return int(np.sum(np.abs(np.asarray(values) - target) <= tol))


def cluster_tolerance(m) -> float:
    """Default pairing tolerance for eigenvalue-multiplicity comparisons."""
    return CLUSTER_RTOL * max(operator_norm(m), 1.0)

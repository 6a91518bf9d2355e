"""Seeded random inputs for verification campaigns.

Every randomized trial derives its generator from a 64-bit campaign seed plus
the trial index (one independent PRNG stream per trial), so any failing trial
replays in isolation.  Matrix entries are drawn uniformly from a complex box
of configurable half-width.
"""

from __future__ import annotations

import numpy as np

from . import linalg


def trial_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator for trial `index` of a campaign with `seed`."""
    return np.random.default_rng([int(seed), int(index)])


def complex_box(rng: np.random.Generator, n: int, half_width: float = 1.0) -> np.ndarray:
    """n x n matrix, entries uniform on the square [-w, w] + i[-w, w]."""
    re = rng.uniform(-half_width, half_width, size=(n, n))
    im = rng.uniform(-half_width, half_width, size=(n, n))
    return re + 1j * im


def scaled_to_norm(m: np.ndarray, target: float) -> np.ndarray:
    """Rescale so the operator norm equals `target` (zero matrix passes through)."""
    norm = linalg.operator_norm(m)
    if norm == 0.0:
        return m
    return m * (target / norm)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(complex_box(rng, n))
    # fix the phase ambiguity so the factor is deterministic
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d))


def random_normal_matrix(
    rng: np.random.Generator,
    n: int,
    re_range: tuple[float, float] = (-1.0, 1.0),
    im_range: tuple[float, float] = (-1.0, 1.0),
) -> np.ndarray:
    """Unitarily diagonalizable matrix with eigenvalues in the given box."""
    eigs = rng.uniform(*re_range, size=n) + 1j * rng.uniform(*im_range, size=n)
    u = random_unitary(rng, n)
    return u @ np.diag(eigs) @ u.conj().T


def random_dissipative_normal(rng: np.random.Generator, n: int, depth: float = 2.0, spread: float = 3.0) -> np.ndarray:
    """Normal matrix with spectrum in the closed left half-plane (contraction generator)."""
    return random_normal_matrix(rng, n, re_range=(-depth, 0.0), im_range=(-spread, spread))


def jordan_block(n: int, lam: complex) -> np.ndarray:
    j = lam * np.eye(n, dtype=np.complex128)
    j += np.diag(np.ones(n - 1), 1) if n > 1 else 0.0
    return j


def tridiagonal_laplacian(n: int) -> np.ndarray:
    """Discrete-Laplacian-like tridiagonal matrix; negative semidefinite."""
    return (
        np.diag(-2.0 * np.ones(n)) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)
    ).astype(np.complex128)

"""Perturbation determinants and their spectral consequences.

For a problem (A, K, ideal, p) the perturbation determinant is

    D(lam) = rdet_p( I - K (lam*I - A)^{-1} ),   lam outside sigma(A),

a holomorphic function whose zeros are exactly the spectrum of A + K, with
zero orders matching algebraic multiplicities.  This module evaluates D,
counts its zeros inside circles by the argument principle, and provides the
brute-force eigenvalue counts the determinant results are verified against.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from .determinants import regularized_det
from .ideals import IdealSpec

ZERO_SAMPLE_TOL = 1e-8  # |D| at a contour sample must stay above this
WINDING_START = 256
WINDING_CAP = 2**16
BOUNDARY_RTOL = 1e-9


class ContourThroughZero(Exception):
    """A contour sample landed (numerically) on a zero of D."""


class WindingNotInteger(Exception):
    """Accumulated argument refused to settle near an integer multiple of 2*pi."""


class BoundaryAmbiguousWarning(UserWarning):
    """An eigenvalue sits within tolerance of the counting-region boundary."""


@dataclass(frozen=True)
class PerturbationProblem:
    """The tuple (A, K, ideal, p) every determinant bound is evaluated on."""

    a: np.ndarray
    k: np.ndarray
    ideal: IdealSpec
    p: float

    def __post_init__(self):
        object.__setattr__(self, "a", linalg.as_matrix(self.a, "A"))
        object.__setattr__(self, "k", linalg.as_matrix(self.k, "K"))
        if self.a.shape != self.k.shape:
            raise ValueError("A and K must have the same dimension")
        if self.p != self.ideal.p:
            raise ValueError(
                f"order p={self.p} must match the ideal's eigenvalue exponent {self.ideal.p}"
            )

    @classmethod
    def from_ideal(cls, a, k, ideal: IdealSpec) -> "PerturbationProblem":
        return cls(a=a, k=k, ideal=ideal, p=ideal.p)

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def perturbed(self) -> np.ndarray:
        return self.a + self.k


@dataclass(frozen=True)
class Contour:
    """Counterclockwise circle used for argument-principle zero counting."""

    center: complex
    radius: float
    samples: int = 256

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("contour radius must be positive")
        if self.samples < 64:
            raise ValueError("contour needs at least 64 samples")

    def points(self, n: int | None = None) -> np.ndarray:
        n = n or self.samples
        t = 2.0 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * t)


@dataclass(frozen=True)
class OutsideRadius:
    s: float

    def contains(self, z: complex) -> bool:
        return abs(z) > self.s

    def boundary_distance(self, z: complex) -> float:
        return abs(abs(z) - self.s)


@dataclass(frozen=True)
class HalfplaneReGt:
    s: float

    def contains(self, z: complex) -> bool:
        return z.real > self.s

    def boundary_distance(self, z: complex) -> float:
        return abs(z.real - self.s)


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius

    def boundary_distance(self, z: complex) -> float:
        return abs(abs(z - self.center) - self.radius)


def perturbation_determinant(prob: PerturbationProblem, lam: complex) -> complex:
    """D(lam) = rdet_p(I - K (lam*I - A)^{-1}); raises off the resolvent set."""
    return regularized_det(prob.p, prob.k @ linalg.resolvent(prob.a, lam))


def _contour_in_resolvent_set(prob: PerturbationProblem, contour: Contour, n_samples: int) -> None:
    spec_a = linalg.eigenvalues(prob.a)
    dist = np.abs(np.abs(spec_a - contour.center) - contour.radius)
    spacing = 2.0 * np.pi / n_samples
    guard = 10.0 * spacing * contour.radius
    if np.any(dist < guard):
        bad = spec_a[int(np.argmin(dist))]
        raise ValueError(
            f"contour passes too close to the unperturbed spectrum: eigenvalue {bad} "
            f"within {guard:.3e} of the circle"
        )


def winding_zero_count(prob: PerturbationProblem, contour: Contour) -> int:
    """Total zero order of D inside the contour, by accumulated argument.

    Samples are doubled (starting at 256, capped at 2^16) until the raw
    winding sits within 0.1 of an integer and no single argument step exceeds
    pi/2.  A sample with |D| <= 1e-8 aborts with :class:`ContourThroughZero`.
    """
    n = max(WINDING_START, contour.samples)
    while True:
        _contour_in_resolvent_set(prob, contour, n)
        points = contour.points(n)
        values = np.array([perturbation_determinant(prob, z) for z in points])
        if np.any(np.abs(values) <= ZERO_SAMPLE_TOL):
            worst = float(np.min(np.abs(values)))
            raise ContourThroughZero(
                f"|D| dropped to {worst:.3e} on the contour (center {contour.center}, "
                f"radius {contour.radius})"
            )
        steps = np.angle(np.roll(values, -1) / values)
        raw = float(np.sum(steps) / (2.0 * np.pi))
        if abs(raw - round(raw)) <= 0.1 and float(np.max(np.abs(steps))) < math.pi / 2:
            return int(round(raw))
        if n >= WINDING_CAP:
            raise WindingNotInteger(
                f"winding {raw} not within 0.1 of an integer at {n} samples"
            )
        n *= 2


def brute_count(prob: PerturbationProblem, region) -> int:
    """Eigenvalues of A + K inside the region, counted with multiplicity.

    Emits :class:`BoundaryAmbiguousWarning` when an eigenvalue sits within
    1e-9 * ||A + K|| of the region boundary.
    """
    perturbed = prob.perturbed()
    eigs = linalg.eigenvalues(perturbed)
    tol = BOUNDARY_RTOL * linalg.operator_norm(perturbed)
    near = [z for z in eigs if region.boundary_distance(complex(z)) <= tol]
    if near:
        warnings.warn(
            f"{len(near)} eigenvalue(s) within {tol:.3e} of the region boundary",
            BoundaryAmbiguousWarning,
            stacklevel=2,
        )
    return int(sum(1 for z in eigs if region.contains(complex(z))))


def pseudospectrum_member(a, lam: complex, eps: float) -> bool:
    """Whether lam lies in the eps-pseudospectrum (resolvent norm above 1/eps).

    Uses the equivalent smallest-singular-value form s_min(lam*I - A) < eps;
    spectrum points (s_min = 0) are members for every eps > 0.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    a = linalg.as_matrix(a, "A")
    shifted = lam * np.eye(a.shape[0], dtype=np.complex128) - a
    return linalg.smallest_singular_value(shifted) < eps


def decay_at_infinity(prob: PerturbationProblem, radii, samples_per_circle: int = 64) -> list[float]:
    """max |D - 1| over circles of the given increasing radii.

    All radii must exceed the spectral radius of A; far enough out the maxima
    decrease toward zero, which is what campaigns assert.
    """
    radii = [float(r) for r in radii]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    r_a = linalg.spectral_radius(prob.a)
    if radii and radii[0] <= r_a:
        raise ValueError(f"all radii must exceed the spectral radius {r_a:.3e}")
    maxima = []
    for r in radii:
        circle = Contour(center=0.0 + 0.0j, radius=r, samples=samples_per_circle).points()
        values = [abs(perturbation_determinant(prob, z) - 1.0) for z in circle]
        maxima.append(float(max(values)))
    return maxima

"""Seeded verification campaigns over every module's invariants.

A campaign is deterministic in (seed, config): trial i draws from its own
PRNG stream, reports are assembled in trial order, and floats are emitted in
round-trip form, so repeated runs produce byte-identical files.  Trials can
run across a process pool capped by the PERTDET_THREADS environment variable
(default: sequential).
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds, determinants, ideals, linalg, perturbation, sampling, semigroup
from .report import BoundReport, emit_report

SUITE_NAMES = ("determinants", "ideals", "perturbation", "bounds", "semigroup", "all")


class ConfigError(ValueError):
    """Invalid campaign configuration."""


@dataclass
class CampaignConfig:
    seed: int = 42
    trials: int = 20
    dimension: int = 8
    suite: str = "all"
    tolerances: dict = field(default_factory=dict)
    output: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.dimension < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.dimension}")
        if self.suite not in SUITE_NAMES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {SUITE_NAMES}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")
        if not (0 <= int(self.seed) < 2**64):
            raise ConfigError("seed must fit in 64 bits")


@dataclass
class CampaignResult:
    status: int
    reports: list[BoundReport]
    failures: list[tuple[int, str]]  # (trial index, bound_id)
    output: str | None = None


def _captured(fn, *args, **kwargs):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        out = fn(*args, **kwargs)
    return out, [str(w.message) for w in caught]


def _equality_report(bound_id: str, inputs: dict, expected: float, got: float,
                     warns: list[str] | None = None) -> BoundReport:
    return BoundReport.from_values(
        bound_id, {**inputs, "expected": expected, "got": got},
        bound_value=0.0, observed=abs(got - expected), warnings=warns,
    )


# --------------------------------------------------------------------------
# determinant suite

_DET_ORDERS = (0.5, 1.0, 2.0, 3.0, 4.0)
_FACTORIZATION_ORDERS = (2.0, 3.0, 4.0)


def _lipschitz_ideals():
    return (ideals.schatten(2), ideals.hille_tamarkin(2), ideals.nuclear_upper())


def _determinants_trial(seed: int, idx: int, dim: int, tol: dict) -> list[BoundReport]:
    rng = sampling.trial_rng(seed, idx)
    reports = []
    l = sampling.scaled_to_norm(sampling.complex_box(rng, dim), rng.uniform(0.3, 2.0))
    for p in _DET_ORDERS:
        primary, check = determinants.regularized_det_forms(p, l)
        rel = abs(primary - check) / max(abs(primary), abs(check), 1.0)
        reports.append(
            BoundReport.from_values(
                "det_form_consistency",
                {"trial": idx, "p": p, "n": dim},
                bound_value=determinants.CONSISTENCY_RTOL,
                observed=rel,
            )
        )
        rep = determinants.growth_bound_check(p, l)
        reports.append(BoundReport.from_values(rep.bound_id, {"trial": idx, **rep.inputs},
                                               rep.bound_value, rep.observed))
    k = sampling.scaled_to_norm(sampling.complex_box(rng, dim), 0.4)
    l2 = k + sampling.scaled_to_norm(sampling.complex_box(rng, dim), 0.1)
    for spec in _lipschitz_ideals():
        rep = determinants.lipschitz_check(spec.p, spec, k, l2)
        reports.append(BoundReport.from_values(rep.bound_id, {"trial": idx, **rep.inputs},
                                               rep.bound_value, rep.observed))
    f = sampling.scaled_to_norm(sampling.complex_box(rng, dim), 0.8)
    g = sampling.scaled_to_norm(sampling.complex_box(rng, dim), 0.8)
    for p in _FACTORIZATION_ORDERS:
        rep = determinants.factorization_check(f, g, p)
        reports.append(BoundReport.from_values(rep.bound_id, {"trial": idx, **rep.inputs},
                                               rep.bound_value, rep.observed))
    return reports


# --------------------------------------------------------------------------
# ideal suite

def _ideal_specs():
    return (
        ideals.schatten(1), ideals.schatten(2), ideals.schatten(3),
        ideals.hille_tamarkin(1.5), ideals.hille_tamarkin(2), ideals.hille_tamarkin(3),
        ideals.nuclear_upper(),
    )


def _ideals_trial(seed: int, idx: int, dim: int, tol: dict) -> list[BoundReport]:
    rng = sampling.trial_rng(seed, idx)
    reports = []
    l = sampling.complex_box(rng, dim)
    a = sampling.complex_box(rng, dim)
    b = sampling.complex_box(rng, dim)
    k = sampling.complex_box(rng, dim)
    c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
    for spec in _ideal_specs():
        for rep in (ideals.eigenvalue_norm_check(spec, l), ideals.ideal_axiom_check(spec, a, l, b)):
            reports.append(BoundReport.from_values(rep.bound_id, {"trial": idx, **rep.inputs},
                                                   rep.bound_value, rep.observed))
        scaled = ideals.ideal_norm(spec, c * l)
        plain = abs(c) * ideals.ideal_norm(spec, l)
        reports.append(
            BoundReport.from_values(
                "ideal_homogeneity", {"trial": idx, "ideal": spec.label},
                bound_value=1e-12,
                observed=abs(scaled - plain) / max(plain, 1e-30),
            )
        )
        reports.append(
            BoundReport.from_values(
                "ideal_triangle", {"trial": idx, "ideal": spec.label, "q_triangle": spec.q_triangle},
                bound_value=spec.q_triangle * (ideals.ideal_norm(spec, k) + ideals.ideal_norm(spec, l))
                * (1.0 + 1e-12),
                observed=ideals.ideal_norm(spec, k + l),
            )
        )
    return reports


# --------------------------------------------------------------------------
# perturbation suite

def _isolated_eigenvalue(target_eigs: np.ndarray, avoid: np.ndarray) -> tuple[complex, float]:
    """Pick the eigenvalue with the largest isolation from its siblings and `avoid`."""
    best, best_iso = None, -1.0
    for i, mu in enumerate(target_eigs):
        others = np.concatenate([np.delete(target_eigs, i), avoid])
        iso = float(np.min(np.abs(others - mu))) if others.size else math.inf
        if iso > best_iso:
            best, best_iso = complex(mu), iso
    return best, best_iso


def _perturbation_trial(seed: int, idx: int, dim: int, tol: dict) -> list[BoundReport]:
    rng = sampling.trial_rng(seed, idx)
    reports = []
    a = sampling.scaled_to_norm(sampling.complex_box(rng, dim), 1.0)
    k = sampling.scaled_to_norm(sampling.complex_box(rng, dim), 0.5)
    spec = ideals.schatten(2)
    prob = perturbation.PerturbationProblem.from_ideal(a, k, spec)

    eigs = linalg.eigenvalues(prob.perturbed())
    mu, iso = _isolated_eigenvalue(eigs, linalg.eigenvalues(a))
    radius = 0.35 * iso
    contour = perturbation.Contour(center=mu, radius=radius, samples=256)
    winding = perturbation.winding_zero_count(prob, contour)
    (mult, warns) = _captured(
        perturbation.brute_count, prob, perturbation.Disk(center=mu, radius=radius)
    )
    reports.append(
        _equality_report("winding_vs_multiplicity",
                         {"trial": idx, "mu": mu, "radius": radius},
                         expected=float(mult), got=float(winding), warns=warns)
    )

    growth = determinants.det_growth_constant(prob.p)
    for _ in range(3):
        lam = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        shifted_min = linalg.smallest_singular_value(lam * np.eye(dim) - a)
        if shifted_min < 0.3:
            continue
        d_val = abs(perturbation.perturbation_determinant(prob, lam))
        norm_kr = ideals.ideal_norm(spec, prob.k @ linalg.resolvent(prob.a, lam))
        cap = math.exp(spec.gamma_p**prob.p * growth.value * norm_kr**prob.p)
        reports.append(
            BoundReport.from_values(
                "pdet_growth", {"trial": idx, "lam": lam, "ideal_norm_kr": norm_kr},
                bound_value=cap, observed=d_val,
            )
        )

    scale = linalg.operator_norm(a) + linalg.operator_norm(k) + 1.0
    maxima = perturbation.decay_at_infinity(prob, [10.0 * scale, 100.0 * scale, 1000.0 * scale])
    worst_rise = max(
        [maxima[i + 1] - maxima[i] for i in range(len(maxima) - 1)], default=0.0
    )
    reports.append(
        BoundReport.from_values(
            "decay_at_infinity", {"trial": idx, "maxima": [float(m) for m in maxima]},
            bound_value=0.0, observed=max(0.0, worst_rise),
        )
    )
    return reports


# --------------------------------------------------------------------------
# bound suite

_BOUND_IDEALS = ("schatten", "hille_tamarkin", "nuclear_upper")


def _bound_ideal(kind: str) -> ideals.IdealSpec:
    if kind == "schatten":
        return ideals.schatten(2)
    if kind == "hille_tamarkin":
        return ideals.hille_tamarkin(2)
    return ideals.nuclear_upper()


def _bounds_trial(seed: int, idx: int, dim: int, tol: dict) -> list[BoundReport]:
    rng = sampling.trial_rng(seed, idx)
    reports = []

    xs = rng.uniform(0.0, 1e4, size=16)
    w = bounds.lambert_w(xs)
    residual = float(np.max(np.abs(w * np.exp(w) - xs) / (1.0 + xs)))
    reports.append(
        BoundReport.from_values("lambert_w_residual", {"trial": idx},
                                bound_value=1e-12, observed=residual)
    )

    for _ in range(4):
        p = float(rng.choice([0.5, 1.0, 2.0, 3.0]))
        x = float(rng.uniform(0.01, 0.95))
        reports.append(
            BoundReport.from_values(
                "count_factor_vs_relaxed", {"trial": idx, "p": p, "x": x},
                bound_value=bounds.count_factor_relaxed(p, x),
                observed=bounds.count_factor(p, x),
            )
        )

    n_zeros = int(rng.integers(1, 11))
    zeros = rng.uniform(0.05, 0.95, n_zeros) * np.exp(1j * rng.uniform(0, 2 * np.pi, n_zeros))
    r = float(rng.uniform(0.3, 0.99))
    while np.any(np.abs(np.abs(zeros) - r) < 1e-6):
        r = float(rng.uniform(0.3, 0.99))
    rep = bounds.jensen_identity_check(zeros, r)
    reports.append(BoundReport.from_values(rep.bound_id, {"trial": idx, **rep.inputs},
                                           rep.bound_value, rep.observed))

    kind = _BOUND_IDEALS[idx % len(_BOUND_IDEALS)]
    spec = _bound_ideal(kind)
    growth = determinants.det_growth_constant(spec.p)
    a = sampling.scaled_to_norm(sampling.complex_box(rng, dim), 1.0)
    k = sampling.scaled_to_norm(sampling.complex_box(rng, dim), 0.5)
    prob = perturbation.PerturbationProblem.from_ideal(a, k, spec)
    norm_a = linalg.operator_norm(a)
    norm_k = ideals.ideal_norm(spec, k)
    hi = 4.0 * norm_a + 4.0 * linalg.operator_norm(k)
    s_grid = norm_a + (hi - norm_a) * np.arange(1, 11) / 10.0
    for s in s_grid:
        (count, warns) = _captured(perturbation.brute_count, prob,
                                   perturbation.OutsideRadius(float(s)))
        cap = bounds.norm_count_bound(float(s), norm_a, spec.p, spec.gamma_p, growth.value, norm_k)
        ratio = count / cap if cap > 0 else 0.0
        reports.append(
            BoundReport.from_values(
                "count_vs_norm_bound",
                {"trial": idx, "ideal": spec.label, "s": float(s), "ratio": ratio},
                bound_value=cap, observed=float(count), warnings=warns,
            )
        )

    # unperturbed variant (A = 0) and envelope variant (normal A)
    prob0 = perturbation.PerturbationProblem.from_ideal(np.zeros_like(a), k, spec)
    for s in s_grid[:5]:
        (count, warns) = _captured(perturbation.brute_count, prob0,
                                   perturbation.OutsideRadius(float(s)))
        cap = bounds.unperturbed_count_bound(float(s), spec.p, spec.gamma_p, norm_k)
        reports.append(
            BoundReport.from_values(
                "count_unperturbed", {"trial": idx, "ideal": spec.label, "s": float(s)},
                bound_value=cap, observed=float(count), warnings=warns,
            )
        )

    a_normal = sampling.random_normal_matrix(rng, dim)
    env = bounds.certify_envelope(
        a_normal, linalg.spectral_radius(a_normal), 1.0,
        grid=linalg.spectral_radius(a_normal) + np.geomspace(0.05, 10.0, 8), angles=64,
    )
    prob_n = perturbation.PerturbationProblem.from_ideal(a_normal, k, spec)
    reports.append(
        BoundReport.from_values(
            "envelope_certified", {"trial": idx, "radius": env.radius},
            bound_value=1.0, observed=1.0 if env.certified else 2.0,
        )
    )
    if env.certified:
        hi_n = 4.0 * env.radius + 4.0 * linalg.operator_norm(k) + 1.0
        for s in (env.radius + (hi_n - env.radius) * np.arange(1, 6) / 5.0):
            (count, warns) = _captured(perturbation.brute_count, prob_n,
                                       perturbation.OutsideRadius(float(s)))
            tight, relaxed = bounds.envelope_count_bound(
                float(s), env, spec.p, spec.gamma_p, growth.value, norm_k
            )
            reports.append(
                BoundReport.from_values(
                    "count_vs_envelope_bound",
                    {"trial": idx, "ideal": spec.label, "s": float(s), "relaxed": relaxed},
                    bound_value=tight, observed=float(count), warnings=warns,
                )
            )
    return reports


# --------------------------------------------------------------------------
# semigroup suite

def _semigroup_ideals():
    return (
        ideals.schatten(2), ideals.nuclear_upper(), ideals.hille_tamarkin(2),
        ideals.schatten(1), ideals.hille_tamarkin(3),
    )


def _semigroup_trial(seed: int, idx: int, dim: int, tol: dict) -> list[BoundReport]:
    rng = sampling.trial_rng(seed, idx)
    reports = []
    h0 = sampling.random_dissipative_normal(rng, dim)
    h = h0 + sampling.scaled_to_norm(sampling.complex_box(rng, dim), 0.8)
    specs = _semigroup_ideals()
    spec = specs[idx % len(specs)]
    pair = semigroup.GeneratorPair.from_ideal(h0, h, 1.0, spec)
    cert = semigroup.contraction_certify(h0, t_grid=np.geomspace(1e-3, 10.0, 60))
    reports.append(
        BoundReport.from_values(
            "contraction_certified", {"trial": idx},
            bound_value=1.0, observed=1.0 if cert.ok else 2.0,
        )
    )
    if not cert.ok:
        return reports

    top = float(np.max(linalg.eigenvalues(h).real))
    s_max = max(top, 0.0) + 1.0
    for s in np.linspace(s_max / 10.0, s_max, 10):
        (rep, warns) = _captured(semigroup.semigroup_bound, pair, float(s), cert)
        reports.append(
            BoundReport.from_values(rep.bound_id, {"trial": idx, **rep.inputs},
                                    rep.bound_value, rep.observed,
                                    warnings=rep.warnings + warns)
        )

    eigs_h = linalg.eigenvalues(h)
    right = eigs_h[eigs_h.real > 1e-6]
    if right.size:
        lam = complex(right[int(rng.integers(0, right.size))])
        rep = semigroup.multiplicity_transfer_check(h, 1.0, lam)
        reports.append(BoundReport.from_values(rep.bound_id, {"trial": idx, **rep.inputs},
                                               rep.bound_value, rep.observed))

    if idx % 5 == 0:
        n = max(dim, 10)
        h0t = sampling.tridiagonal_laplacian(n)
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ht = h0t + 0.4 * np.outer(u, v.conj()) / (np.linalg.norm(u) * np.linalg.norm(v))
        q = (1.5, 2.0, 3.0)[idx % 3]
        cert_t = semigroup.contraction_certify(h0t, t_grid=np.geomspace(1e-3, 10.0, 40))
        if cert_t.ok:
            for rep in semigroup.hille_tamarkin_pipeline(h0t, ht, 1.0, q,
                                                         np.linspace(0.2, 1.0, 5), cert_t):
                reports.append(BoundReport.from_values(rep.bound_id, {"trial": idx, **rep.inputs},
                                                       rep.bound_value, rep.observed,
                                                       warnings=rep.warnings))
    return reports


_SUITES = {
    "determinants": _determinants_trial,
    "ideals": _ideals_trial,
    "perturbation": _perturbation_trial,
    "bounds": _bounds_trial,
    "semigroup": _semigroup_trial,
}


def _run_one(args) -> tuple[int, list[BoundReport]]:
    suite, seed, idx, dim, tol = args
    if suite == "all":
        out = []
        for name in SUITE_NAMES[:-1]:
            out.extend(_SUITES[name](seed, idx, dim, tol))
        return idx, out
    return idx, _SUITES[suite](seed, idx, dim, tol)


def worker_count() -> int:
    raw = os.environ.get("PERTDET_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_campaign(cfg: CampaignConfig) -> CampaignResult:
    """Run the configured suite; deterministic in (seed, config).

    Returns status 0 when every report passed, 1 otherwise; failing trials
    are listed with their bound ids so they can be replayed in isolation from
    the same seed and trial index.
    """
    jobs = [(cfg.suite, int(cfg.seed), i, cfg.dimension, cfg.tolerances) for i in range(cfg.trials)]
    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    results.sort(key=lambda pair: pair[0])

    reports: list[BoundReport] = []
    failures: list[tuple[int, str]] = []
    for idx, trial_reports in results:
        for rep in trial_reports:
            reports.append(rep)
            if not rep.passed:
                failures.append((idx, rep.bound_id))

    output = None
    if cfg.output:
        output = emit_report(reports, cfg.output, cfg.fmt)
    return CampaignResult(status=0 if not failures else 1, reports=reports,
                          failures=failures, output=output)

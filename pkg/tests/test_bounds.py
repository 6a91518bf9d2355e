import math

import numpy as np
import pytest

from pertdet import linalg, sampling
from pertdet.bounds import (
    ResolventEnvelope,
    certify_envelope,
    count_factor,
    count_factor_limit,
    count_factor_relaxed,
    disk_exterior_radius,
    envelope_count_bound,
    jensen_identity_check,
    lambert_w,
    norm_count_bound,
    pseudospectrum_count_bound,
    unperturbed_count_bound,
)


def lambert_w_bisect(x, tol=1e-13):
    """Bisection oracle for w * e^w = x on w >= 0."""
    lo, hi = 0.0, max(1.0, math.log(x + 1.0) + 1.0)
    while hi * math.exp(hi) < x:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(mid) < x:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def test_lambert_w_trivials():
    assert lambert_w(0.0) == 0.0
    assert lambert_w(math.e) == pytest.approx(1.0, abs=1e-13)


def test_lambert_w_unit_value_against_bisection():
    assert lambert_w(1.0) == pytest.approx(0.5671432904, abs=1e-9)
    assert lambert_w(1.0) == pytest.approx(lambert_w_bisect(1.0), abs=1e-12)


def test_lambert_w_residual_on_log_grid():
    x = np.logspace(-8, 8, 200)
    w = lambert_w(x)
    assert np.all(np.abs(w * np.exp(w) - x) <= 1e-12 * (1.0 + x))


def test_lambert_w_rejects_negative():
    with pytest.raises(ValueError):
        lambert_w(-0.1)


def test_count_factor_small_argument_limit():
    for p in (0.5, 1.0, 2.0, 3.0):
        assert count_factor(p, 1e-8) == pytest.approx(count_factor_limit(p), rel=1e-5)
        assert count_factor_limit(p) == pytest.approx(p * math.e)


def test_count_factor_reference_point():
    # order 1 at 0.5: roughly 13.8, below the relaxed cap 16
    value = count_factor(1.0, 0.5)
    w = lambert_w_bisect(math.e * 0.5)
    oracle = w / ((1.0 - w) ** 2 * 0.5)
    assert value == pytest.approx(oracle, rel=1e-10)
    assert value == pytest.approx(13.8, abs=0.1)
    assert value <= count_factor_relaxed(1.0, 0.5) == pytest.approx(16.0)


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 3.0])
def test_count_factor_below_relaxed_cap_on_grid(p):
    for x in np.arange(0.01, 1.0, 0.01):
        value = count_factor(p, float(x))
        assert np.isfinite(value) and value > 0
        assert value <= count_factor_relaxed(p, float(x)) * (1 + 1e-12)


def test_count_factor_domain():
    with pytest.raises(ValueError):
        count_factor(1.0, 0.0)
    with pytest.raises(ValueError):
        count_factor(1.0, 1.0)


def test_disk_exterior_radius():
    assert disk_exterior_radius(1.0, 2.0) == 0.5
    assert disk_exterior_radius(3.0, 4.0) == 0.75
    assert disk_exterior_radius(1.0, 1e9) == pytest.approx(0.0, abs=1e-8)
    with pytest.raises(ValueError):
        disk_exterior_radius(2.0, 1.0)


def test_pseudospectrum_count_bound_values():
    assert pseudospectrum_count_bound(0.5, 0.5, 1.0, 1.0, 1.0, 0.0) == 0.0
    got = pseudospectrum_count_bound(0.5, 0.5, 1.0, 1.0, 1.0, 1.0)
    assert got == pytest.approx(2.0 / math.log(2.0), rel=1e-12)
    # conformal radius toward 0 kills the bound
    assert pseudospectrum_count_bound(0.5, 1e-9, 1.0, 1.0, 1.0, 1.0) < 0.1
    with pytest.raises(ValueError):
        pseudospectrum_count_bound(0.5, 1.5, 1.0, 1.0, 1.0, 1.0)


def test_envelope_count_bound_zero_perturbation():
    env = ResolventEnvelope(radius=1.0, constant=1.0)
    assert envelope_count_bound(2.0, env, 1.0, 1.0, 1.0, 0.0) == (0.0, 0.0)


def test_envelope_count_bound_matches_grid_search_oracle():
    rng = sampling.trial_rng(501, 0)
    for _ in range(25):
        p = float(rng.choice([0.5, 1.0, 2.0, 3.0]))
        s = float(rng.uniform(1.0, 10.0))
        r_thr = float(rng.uniform(0.05, 0.95) * s)
        env = ResolventEnvelope(radius=r_thr, constant=1.0)
        tight, relaxed = envelope_count_bound(s, env, p, 1.0, 1.0, 1.0)
        t = np.linspace(r_thr, s, 100001)[1:-1]
        fmax = float(np.max((t - r_thr) ** p * np.log(s / t)))
        assert tight == pytest.approx(1.0 / fmax, rel=1e-4)
        assert tight <= relaxed * (1 + 1e-12)


def test_envelope_count_bound_with_zero_threshold_uses_limit():
    env = ResolventEnvelope(radius=0.0, constant=1.0)
    tight, _ = envelope_count_bound(2.0, env, 1.0, 1.0, 1.0, 1.0)
    assert tight == pytest.approx(count_factor_limit(1.0) / 2.0)


def test_envelope_count_bound_domain():
    env = ResolventEnvelope(radius=1.0, constant=1.0)
    with pytest.raises(ValueError):
        envelope_count_bound(0.5, env, 1.0, 1.0, 1.0, 1.0)


def test_norm_count_bound_values():
    assert norm_count_bound(2.0, 1.0, 1.0, 1.0, 1.0, 0.0) == 0.0
    assert norm_count_bound(2.0, 1.0, 1.0, 1.0, 1.0, 1.0) == pytest.approx(8.0)
    # zero norm reduces to the unperturbed shape times the constant
    p = 2.0
    got = norm_count_bound(2.0, 0.0, p, 1.0, 1.0, 1.0)
    assert got == pytest.approx((p + 1) ** (p + 1) / p**p / 2.0**p)
    with pytest.raises(ValueError):
        norm_count_bound(0.5, 1.0, 1.0, 1.0, 1.0, 1.0)


def test_unperturbed_count_bound_values():
    assert unperturbed_count_bound(1.0, 2.0, 1.0, 0.0) == 0.0
    assert unperturbed_count_bound(1.0, 2.0, 1.0, 2.0) == pytest.approx(4.0)


def test_bounds_monotone_in_s_and_norm():
    s_grid = np.linspace(1.2, 6.0, 30)
    values = [norm_count_bound(float(s), 1.0, 2.0, 1.0, 0.5, 1.0) for s in s_grid]
    assert all(a > b for a, b in zip(values, values[1:]))
    env = ResolventEnvelope(radius=1.0, constant=1.0)
    tight = [envelope_count_bound(float(s), env, 2.0, 1.0, 0.5, 1.0)[0] for s in s_grid]
    assert all(a > b for a, b in zip(tight, tight[1:]))
    norms_grid = np.linspace(0.0, 3.0, 10)
    values = [unperturbed_count_bound(2.0, 2.0, 1.0, float(nk)) for nk in norms_grid]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_jensen_no_zeros():
    rep = jensen_identity_check([], 0.5)
    assert rep.observed == 0.0
    assert rep.passed


def test_jensen_single_zero_closed_form():
    rep = jensen_identity_check([0.5], 0.75)
    assert rep.inputs["lhs"] == pytest.approx(math.log(1.5))
    assert rep.inputs["rhs"] == pytest.approx(math.log(1.5), abs=1e-8)
    assert rep.passed


def test_jensen_mixed_configuration():
    rep = jensen_identity_check([0.3, 0.4j, -0.6], 0.9)
    assert rep.observed <= 1e-6
    assert rep.passed


def test_jensen_zeros_outside_radius_contribute_nothing_to_lhs():
    rep = jensen_identity_check([0.2, 0.8], 0.5)
    assert rep.inputs["lhs"] == pytest.approx(math.log(0.5 / 0.2))
    assert rep.passed


def test_jensen_validation():
    with pytest.raises(ValueError):
        jensen_identity_check([1.2], 0.5)
    with pytest.raises(ValueError):
        jensen_identity_check([0.5], 0.5)
    with pytest.raises(ValueError):
        jensen_identity_check([0.0], 0.5)
    with pytest.raises(ValueError):
        jensen_identity_check([0.4], 1.5)


def test_jensen_random_configurations():
    for trial in range(30):
        rng = sampling.trial_rng(502, trial)
        n = int(rng.integers(1, 11))
        zeros = rng.uniform(0.05, 0.95, n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        r = float(rng.uniform(0.3, 0.99))
        if np.any(np.abs(np.abs(zeros) - r) < 1e-6):
            continue
        assert jensen_identity_check(zeros, r).passed


def test_certify_envelope_zero_matrix():
    env = certify_envelope(np.zeros((2, 2)), 0.0, 1.0)
    assert env.certified


def test_certify_envelope_normal_matrix():
    rng = sampling.trial_rng(503, 0)
    a = sampling.random_normal_matrix(rng, 6)
    env = certify_envelope(a, linalg.spectral_radius(a), 1.0)
    assert env.certified


def test_certify_envelope_jordan_block_needs_larger_constant():
    j = sampling.jordan_block(2, 0.0)

    def resolvent_norm(lam):
        # explicit 2x2 oracle: (lam - J)^{-1} = [[1/lam, 1/lam^2], [0, 1/lam]]
        m = np.array([[1.0 / lam, 1.0 / lam**2], [0.0, 1.0 / lam]])
        return np.linalg.norm(m, ord=2)

    small = 0.05
    assert resolvent_norm(small) > 1.0 / small  # C = 1 cannot hold near zero
    env1 = certify_envelope(j, 0.0, 1.0, grid=np.geomspace(0.05, 5.0, 20))
    assert not env1.certified
    assert env1.witness is not None
    for lam in np.geomspace(1.0, 100.0, 30):
        assert resolvent_norm(lam) <= 2.0 / lam * (1 + 1e-9)
    env2 = certify_envelope(j, 0.0, 2.0, grid=np.geomspace(1.0, 100.0, 30))
    assert env2.certified


def test_certify_envelope_rejects_threshold_below_spectral_radius():
    with pytest.raises(ValueError):
        certify_envelope(np.diag([2.0, -1.0]), 1.0, 1.0)

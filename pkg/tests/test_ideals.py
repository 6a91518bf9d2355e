import math

import numpy as np
import pytest
import scipy.linalg

from pertdet import linalg, sampling
from pertdet.ideals import (
    IdealSpec,
    eigenvalue_lp,
    eigenvalue_norm_check,
    hille_tamarkin,
    ideal_axiom_check,
    ideal_from_dict,
    ideal_norm,
    ideal_to_dict,
    lq_operator_norm_lower,
    lq_operator_norm_upper,
    nuclear_upper,
    schatten,
)

ALL_SPECS = [
    schatten(1), schatten(2), schatten(3),
    hille_tamarkin(1.5), hille_tamarkin(2), hille_tamarkin(3),
    nuclear_upper(),
]


def test_spec_constants():
    assert schatten(2).gamma_p == pytest.approx(math.sqrt(2) * math.sqrt(2 * math.e))
    assert schatten(2).p == 2
    assert hille_tamarkin(1.5).p == 2  # eigenvalue exponent max(2, q)
    assert hille_tamarkin(3).p == 3
    assert hille_tamarkin(3).gamma_p == 1.0
    assert nuclear_upper().p == 2
    for spec in ALL_SPECS:
        assert spec.q_triangle == 1.0


def test_spec_validation():
    with pytest.raises(ValueError):
        hille_tamarkin(1.0)
    with pytest.raises(ValueError):
        schatten(0.5)
    with pytest.raises(ValueError):
        IdealSpec(kind="unknown", p=2)


def test_schatten_norm_identity():
    assert ideal_norm(schatten(2), np.eye(3)) == pytest.approx(math.sqrt(3))


def test_schatten_norm_from_svd_oracle():
    m = np.array([[3.0, 4.0], [0.0, 0.0]])
    # singular values are (5, 0)
    assert ideal_norm(schatten(1), m) == pytest.approx(5.0)


def test_hille_tamarkin_q2_is_frobenius():
    rng = sampling.trial_rng(301, 0)
    l = sampling.complex_box(rng, 6)
    assert ideal_norm(hille_tamarkin(2), l) == pytest.approx(np.linalg.norm(l, "fro"))


def test_hille_tamarkin_weights():
    l = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    spec = hille_tamarkin(2, weights=[1.0, 1.0])
    assert ideal_norm(spec, l) == pytest.approx(np.linalg.norm(l, "fro"))
    half = hille_tamarkin(2, weights=[0.5, 0.5])
    # row and column weights of 1/2 each scale the squared sum by 1/4
    assert ideal_norm(half, l) == pytest.approx(0.5 * np.linalg.norm(l, "fro"))


def test_nuclear_upper_is_singular_value_sum():
    rng = sampling.trial_rng(301, 1)
    l = sampling.complex_box(rng, 5)
    assert ideal_norm(nuclear_upper(), l) == pytest.approx(np.sum(linalg.singular_values(l)))
    assert ideal_norm(nuclear_upper(), l) == pytest.approx(ideal_norm(schatten(1), l))


def test_eigenvalue_lp_trivials():
    assert eigenvalue_lp(np.zeros((3, 3)), 1.0) == 0.0
    assert eigenvalue_lp(np.diag([3.0, 4.0]), 2.0) == pytest.approx(5.0)


def test_eigenvalue_lp_matches_oracle():
    rng = sampling.trial_rng(301, 2)
    l = sampling.complex_box(rng, 10)
    expected = float(np.sum(np.abs(np.linalg.eigvals(l))))
    assert eigenvalue_lp(l, 1.0) == pytest.approx(expected, rel=1e-9)


def test_eigenvalue_norm_check_diagonal_equality():
    d = np.diag([0.5, -0.25j, 0.1 + 0.1j])
    for p in (1.0, 2.0):
        rep = eigenvalue_norm_check(schatten(p), d)
        assert rep.passed
        # normal diagonal: eigenvalue sum equals the singular-value sum
        assert rep.inputs["observed_ratio"] == pytest.approx(1.0)


def test_eigenvalue_norm_check_nilpotent():
    rep = eigenvalue_norm_check(schatten(2), sampling.jordan_block(2, 0.0))
    assert rep.observed == pytest.approx(0.0)
    assert rep.passed


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.label)
def test_eigenvalue_norm_check_seeded_sweep(spec):
    for trial in range(60):
        rng = sampling.trial_rng(302, trial)
        assert eigenvalue_norm_check(spec, sampling.complex_box(rng, 8)).passed


def test_ideal_axiom_check_identity_factors():
    rng = sampling.trial_rng(303, 0)
    l = sampling.complex_box(rng, 5)
    eye = np.eye(5)
    for spec in ALL_SPECS:
        assert ideal_axiom_check(spec, eye, l, eye).passed


def test_ideal_axiom_check_zero_middle():
    eye = np.eye(4)
    for spec in ALL_SPECS:
        rep = ideal_axiom_check(spec, eye, np.zeros((4, 4)), eye)
        assert rep.observed == 0.0
        assert rep.passed


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.label)
def test_ideal_axiom_check_seeded_sweep(spec):
    for trial in range(40):
        rng = sampling.trial_rng(304, trial)
        a = sampling.complex_box(rng, 8)
        l = sampling.complex_box(rng, 8)
        b = sampling.complex_box(rng, 8)
        assert ideal_axiom_check(spec, a, l, b).passed


def test_spectral_norm_fails_the_product_axiom_off_q2():
    """The reason the checks use l_q operator norms: with the spectral norm the
    two-sided inequality is genuinely false for the mixed norm at q != 2."""
    n = 16
    h = scipy.linalg.hadamard(n).astype(np.complex128) / math.sqrt(n)
    spec = hille_tamarkin(3)
    lhs = ideal_norm(spec, h @ np.eye(n))
    spectral_rhs = linalg.operator_norm(h) * ideal_norm(spec, np.eye(n))
    assert lhs > spectral_rhs * 1.5
    assert ideal_axiom_check(spec, h, np.eye(n), np.eye(n)).passed


def test_lq_norm_estimates_bracket_known_values():
    rng = sampling.trial_rng(303, 1)
    m = sampling.complex_box(rng, 6)
    assert lq_operator_norm_lower(m, 2.0) == pytest.approx(linalg.operator_norm(m))
    assert lq_operator_norm_lower(m, 1.0) == pytest.approx(np.max(np.sum(np.abs(m), axis=0)))
    assert lq_operator_norm_lower(m, math.inf) == pytest.approx(np.max(np.sum(np.abs(m), axis=1)))
    for q in (1.5, 3.0):
        lo = lq_operator_norm_lower(m, q)
        hi = lq_operator_norm_upper(m, q)
        assert 0 < lo <= hi * (1 + 1e-12)
        # lower estimate must dominate the Rayleigh quotient of random vectors
        for _ in range(50):
            x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            quot = float(np.sum(np.abs(m @ x) ** q) ** (1 / q) / np.sum(np.abs(x) ** q) ** (1 / q))
            assert quot <= lo * (1 + 1e-9)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.label)
def test_homogeneity(spec):
    rng = sampling.trial_rng(305, 0)
    l = sampling.complex_box(rng, 7)
    c = 1.7 - 2.3j
    assert ideal_norm(spec, c * l) == pytest.approx(abs(c) * ideal_norm(spec, l), rel=1e-12)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.label)
def test_triangle_inequality_with_constant_one(spec):
    for trial in range(20):
        rng = sampling.trial_rng(306, trial)
        k = sampling.complex_box(rng, 7)
        l = sampling.complex_box(rng, 7)
        assert ideal_norm(spec, k + l) <= (ideal_norm(spec, k) + ideal_norm(spec, l)) * (1 + 1e-12)


def test_singular_power_mean_nonincreasing_in_exponent():
    rng = sampling.trial_rng(307, 0)
    l = sampling.complex_box(rng, 8)
    values = [ideal_norm(schatten(p), l) for p in (1.0, 1.5, 2.0, 3.0, 6.0)]
    assert all(a >= b * (1 - 1e-12) for a, b in zip(values, values[1:]))


def test_hille_tamarkin_dominates_its_operator_norm():
    for trial in range(20):
        rng = sampling.trial_rng(308, trial)
        l = sampling.complex_box(rng, 8)
        for q in (1.5, 2.0, 3.0):
            assert lq_operator_norm_lower(l, q) <= ideal_norm(hille_tamarkin(q), l) * (1 + 1e-9)


def test_ideal_json_round_trip():
    for spec in ALL_SPECS:
        data = ideal_to_dict(spec)
        back = ideal_from_dict(data)
        assert back == spec
    filled = ideal_from_dict({"kind": "schatten", "p": 2})
    assert filled.gamma_p == pytest.approx(schatten(2).gamma_p)
    with pytest.raises(ValueError):
        ideal_from_dict({"kind": "hille_tamarkin"})

import numpy as np
import pytest

from pertdet import linalg, sampling
from pertdet.linalg import (
    MatrixExponentialOverflow,
    SingularResolvent,
    as_matrix,
    eigenvalues,
    matrix_exponential,
    norms,
    resolvent,
    singular_values,
)

from conftest import match_multisets


def char_poly_coeffs(m):
    """Characteristic polynomial via Faddeev-LeVerrier (trace recursion only).

    Independent of any eigensolver: c_0 = 1, M_1 = A, and
    c_k = -tr(A M_k)/k, M_{k+1} = A M_k + c_k I.
    """
    a = np.asarray(m, dtype=np.complex128)
    n = a.shape[0]
    coeffs = [1.0 + 0.0j]
    mk = np.zeros_like(a)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ mk) / k)
    return np.array(coeffs)


def test_as_matrix_rejects_bad_inputs():
    with pytest.raises(ValueError):
        as_matrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        as_matrix(np.array([[np.nan, 0], [0, 0]]))
    with pytest.raises(ValueError):
        as_matrix(np.zeros((0, 0)))


def test_eigenvalues_diagonal():
    match_multisets(eigenvalues(np.diag([1.0, 2.0, 3.0])), [1, 2, 3], 1e-12)


def test_eigenvalues_nilpotent_jordan_block():
    match_multisets(eigenvalues(sampling.jordan_block(2, 0.0)), [0, 0], 1e-12)


def test_eigenvalues_match_characteristic_polynomial_roots():
    rng = sampling.trial_rng(101, 0)
    m = sampling.complex_box(rng, 5)
    roots = np.roots(char_poly_coeffs(m))
    match_multisets(eigenvalues(m), roots, 1e-8)


def test_singular_values_identity():
    assert singular_values(np.eye(3)) == pytest.approx([1, 1, 1])


def test_singular_values_diagonal_moduli():
    s = singular_values(np.diag([3.0, -4.0j]))
    assert s == pytest.approx([4.0, 3.0])


def test_singular_values_rank_one_from_gram_oracle():
    rng = sampling.trial_rng(101, 1)
    u = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    m = np.outer(u, v.conj())
    # Gram-matrix oracle: singular values are sqrt of eigenvalues of M* M
    # (the sqrt halves the oracle's accuracy near zero, hence the 1e-6 floor)
    gram = np.sort(np.sqrt(np.abs(np.linalg.eigvalsh(m.conj().T @ m))))[::-1]
    s = singular_values(m)
    assert s[0] == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v), rel=1e-12)
    assert np.allclose(s, gram, atol=1e-6 * s[0])
    assert np.all(s[1:] < 1e-10)


def test_resolvent_of_zero_matrix():
    r = resolvent(np.zeros((2, 2)), 2.0)
    assert np.allclose(r, 0.5 * np.eye(2))


def test_resolvent_diagonal():
    a = np.diag([1.0 + 1j, -2.0])
    lam = 3.0 + 0.5j
    r = resolvent(a, lam)
    assert np.allclose(np.diag(r), 1.0 / (lam - np.diag(a)))


def test_resolvent_residual_small_on_random_input():
    rng = sampling.trial_rng(101, 2)
    a = sampling.scaled_to_norm(sampling.complex_box(rng, 8), 1.0)
    lam = 2.5 + 1.0j
    r, residual = resolvent(a, lam, return_residual=True)
    shifted = lam * np.eye(8) - a
    cond = np.linalg.cond(shifted)
    assert residual <= 1e-10 * cond
    assert np.linalg.norm(shifted @ r - np.eye(8), ord=2) <= 1e-10 * cond


def test_resolvent_rejects_spectrum_points():
    a = np.diag([1.0, 2.0])
    with pytest.raises(SingularResolvent) as err:
        resolvent(a, 1.0)
    assert err.value.smin <= err.value.threshold


def test_matrix_exponential_at_zero_time():
    rng = sampling.trial_rng(101, 3)
    h = sampling.complex_box(rng, 4)
    assert np.allclose(matrix_exponential(h, 0.0), np.eye(4))


def test_matrix_exponential_diagonal():
    h = np.diag([1.0 + 2j, -0.5])
    t = 0.7
    assert np.allclose(np.diag(matrix_exponential(h, t)), np.exp(t * np.diag(h)))


def test_matrix_exponential_nilpotent_truncates():
    n = np.zeros((3, 3), dtype=complex)
    n[0, 2] = 2.0  # N^2 = 0
    t = 1.3
    assert np.allclose(matrix_exponential(n, t), np.eye(3) + t * n, atol=1e-14)


def test_matrix_exponential_overflow_raises():
    with pytest.raises(MatrixExponentialOverflow):
        matrix_exponential(np.diag([1000.0]), 1.0)


def test_matrix_exponential_semigroup_property():
    rng = sampling.trial_rng(101, 4)
    h = sampling.complex_box(rng, 5)
    for _ in range(5):
        s, t = rng.uniform(0, 2, size=2)
        lhs = matrix_exponential(h, s + t)
        rhs = matrix_exponential(h, s) @ matrix_exponential(h, t)
        assert np.linalg.norm(lhs - rhs, ord=2) <= 1e-9 * np.linalg.norm(lhs, ord=2)


def test_norms_diagonal():
    assert norms(np.diag([1.0, -2.0])) == pytest.approx((2.0, 2.0))


def test_norms_shift_matrix():
    op, sr = norms(sampling.jordan_block(2, 0.0))
    assert op == pytest.approx(1.0)
    assert sr == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("trial", range(20))
def test_eigenvalue_sum_matches_trace(trial):
    rng = sampling.trial_rng(102, trial)
    n = int(rng.integers(2, 16))
    m = sampling.complex_box(rng, n)
    eigs = eigenvalues(m)
    assert abs(np.sum(eigs) - np.trace(m)) <= 1e-9 * n * max(linalg.operator_norm(m), 1.0)


@pytest.mark.parametrize("trial", range(20))
def test_eigenvalue_product_matches_lu_determinant(trial):
    rng = sampling.trial_rng(103, trial)
    n = int(rng.integers(2, 30))
    m = sampling.complex_box(rng, n)
    det_lu = np.linalg.det(m)
    prod = np.prod(eigenvalues(m))
    assert abs(prod - det_lu) <= 1e-8 * max(abs(det_lu), abs(prod))


@pytest.mark.parametrize("trial", range(20))
def test_spectral_radius_below_operator_norm(trial):
    rng = sampling.trial_rng(104, trial)
    op, sr = norms(sampling.complex_box(rng, 9))
    assert sr <= op * (1 + 1e-12)

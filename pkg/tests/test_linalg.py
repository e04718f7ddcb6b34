import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entbound import linalg
from entbound.errors import ConvergenceError, DimensionError, NotHermitianError
from entbound.states import Bipartition, partial_transpose

from conftest import random_hermitian, random_unitary

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_matmul_identity_and_zero(rng):
    a = random_hermitian(5, rng)
    np.testing.assert_array_equal(linalg.matmul(np.eye(5), a), a)
    np.testing.assert_array_equal(linalg.matmul(a, np.zeros((5, 5))), np.zeros((5, 5)))


def test_pauli_product():
    np.testing.assert_allclose(linalg.matmul(SX, SY), 1j * SZ, atol=1e-15)


def test_matmul_shape_mismatch():
    with pytest.raises(DimensionError):
        linalg.matmul(np.eye(2), np.eye(3))


def test_as_matrix_rejects_bad_input():
    with pytest.raises(DimensionError):
        linalg.as_matrix(np.ones(3))
    with pytest.raises(ValueError):
        linalg.as_matrix(np.array([[np.nan, 0], [0, 1]]))


def test_kron_small_example():
    a = np.array([[1, 2], [3, 4]])
    b = np.array([[0, 5], [6, 7]])
    expected = np.array(
        [[0, 5, 0, 10], [6, 7, 12, 14], [0, 15, 0, 20], [18, 21, 24, 28]], dtype=complex
    )
    np.testing.assert_array_equal(linalg.kron(a, b), expected)


def test_kron_trace_factorizes(rng):
    a, b = random_hermitian(3, rng), random_hermitian(4, rng)
    assert np.trace(linalg.kron(a, b)) == pytest.approx(np.trace(a) * np.trace(b), rel=1e-12)


def test_dagger_and_hs_norm():
    a = np.array([[1, 2j], [0, 3]])
    np.testing.assert_array_equal(linalg.dagger(a), np.array([[1, 0], [-2j, 3]]))
    assert linalg.hs_norm(a) == pytest.approx(np.sqrt(14.0), rel=1e-15)


@pytest.mark.parametrize(
    "mat, expected",
    [
        (SZ, [-1.0, 1.0]),
        (SX, [-1.0, 1.0]),
        (SY, [-1.0, 1.0]),
        (np.array([[2, 1], [1, 2]]), [1.0, 3.0]),
        (np.diag([3.0, -2.0, 0.5]), [-2.0, 0.5, 3.0]),
    ],
)
def test_known_spectra(mat, expected):
    e = linalg.hermitian_eigen(mat)
    np.testing.assert_allclose(e.eigenvalues, expected, atol=1e-12)
    np.testing.assert_allclose(e.reconstruct(), mat, atol=1e-10)


def test_degenerate_spectrum_reconstructs(rng):
    u = random_unitary(6, rng)
    a = (u * np.array([1, 1, 1, 2, 2, -4.0])) @ u.conj().T
    e = linalg.hermitian_eigen(a)
    np.testing.assert_allclose(e.eigenvalues, [-4, 1, 1, 1, 2, 2], atol=1e-11)
    np.testing.assert_allclose(e.reconstruct(), a, atol=1e-10)


def test_empty_and_scalar():
    e = linalg.hermitian_eigen(np.array([[2.5]]))
    assert e.eigenvalues.tolist() == [2.5]


def test_non_hermitian_rejected():
    with pytest.raises(NotHermitianError):
        linalg.hermitian_eigen(np.array([[0, 1], [0, 0]]))


def test_jacobi_reports_nonconvergence(rng):
    a = random_hermitian(12, rng)
    with pytest.raises(ConvergenceError) as info:
        linalg.hermitian_eigen(a, max_sweeps=1, method="jacobi")
    assert info.value.residual > 0


def test_jacobi_matches_lapack(rng):
    a = random_hermitian(20, rng)
    ej = linalg.hermitian_eigen(a, method="jacobi")
    el = linalg.hermitian_eigen(a, method="lapack")
    np.testing.assert_allclose(ej.eigenvalues, el.eigenvalues, atol=1e-10)


def test_trace_norm_hermitian():
    assert linalg.trace_norm_hermitian(np.diag([0.5, -0.25, 0.75])) == pytest.approx(1.5, rel=1e-14)


def _chebyshev(n):
    # tridiagonal matrix with eigenvalues cos(k pi / (n + 1)), k = 1..n
    return 0.5 * (np.eye(n, k=1) + np.eye(n, k=-1))


@given(st.integers(min_value=2, max_value=40))
@settings(max_examples=25, deadline=None)
def test_chebyshev_spectrum(n):
    k = np.arange(1, n + 1)
    expected = np.sort(np.cos(k * np.pi / (n + 1)))
    np.testing.assert_allclose(linalg.hermitian_eigvals(_chebyshev(n), method="jacobi"), expected, atol=1e-12)


@given(st.integers(min_value=1, max_value=27), st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_eigen_invariants(d, seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(d, rng)
    e = linalg.hermitian_eigen(a)
    norm = linalg.hs_norm(a)
    v = e.eigenvectors
    assert np.all(np.diff(e.eigenvalues) >= 0)
    assert linalg.hs_norm(a @ v - v * e.eigenvalues) <= 1e-10 * norm
    assert linalg.hs_norm(v.conj().T @ v - np.eye(d)) <= 1e-10
    assert abs(np.trace(a).real - e.eigenvalues.sum()) <= 1e-12 * d * max(norm, 1.0)


@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_partial_transpose_preserves_hs_norm(d1, d2, seed):
    a = random_hermitian(d1 * d2, np.random.default_rng(seed))
    pt = partial_transpose(a, Bipartition(d1, d2))
    assert linalg.hs_norm(pt) == pytest.approx(linalg.hs_norm(a), rel=1e-13)

import numpy as np
import pytest
from hypothesis import given, settings

from kbiframe import linalg
from kbiframe._validation import MAX_DIM
from kbiframe.errors import MatrixTooLargeError, NotHermitianError, NotPSDError
from kbiframe.instances import right_shift
from kbiframe.operators import pseudo_inverse_verify

from conftest import complex_matrices, crandn, hermitian_matrices


def test_adjoint_examples():
    np.testing.assert_array_equal(linalg.adjoint(np.eye(3)), np.eye(3))
    np.testing.assert_array_equal(linalg.adjoint([[0, 1], [0, 0]]), [[0, 0], [1, 0]])
    m = np.zeros((2, 2), dtype=complex)
    m[0, 1] = 1j
    assert linalg.adjoint(m)[1, 0] == -1j


@given(complex_matrices(square=False))
def test_adjoint_is_an_involution(m):
    np.testing.assert_array_equal(linalg.adjoint(linalg.adjoint(m)), m)


def test_hermitian_eigen_of_singular_diagonal():
    w, v = linalg.hermitian_eigen(np.diag([2.0, 1, 1, 0]))
    np.testing.assert_allclose(w, [0, 1, 1, 2], atol=1e-15)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(4), atol=1e-14)


def test_hermitian_eigen_identity():
    w, v = linalg.hermitian_eigen(np.eye(5))
    np.testing.assert_allclose(w, np.ones(5))


def test_hermitian_eigen_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        linalg.hermitian_eigen([[0, 1], [0, 0]])


@settings(max_examples=200, deadline=None)
@given(hermitian_matrices(n_max=16))
def test_hermitian_eigen_reconstruction(h):
    w, v = linalg.hermitian_eigen(h)
    scale = max(1.0, np.linalg.norm(h, 2))
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(h @ v - v * w, 2) <= 1e-10 * scale
    assert np.linalg.norm(v.conj().T @ v - np.eye(len(w)), 2) <= 1e-10


def test_random_hermitian_residual(rng):
    a = crandn(rng, 5, 5)
    h = (a + a.conj().T) / 2
    w, v = linalg.hermitian_eigen(h)
    assert np.linalg.norm(v @ np.diag(w) @ v.conj().T - h, 2) <= 1e-10 * np.linalg.norm(h, 2)


def test_svd_examples():
    np.testing.assert_allclose(linalg.svd(np.diag([3.0, 2, 0])).singulars, [3, 2, 0])
    np.testing.assert_allclose(linalg.svd(np.zeros((3, 3))).singulars, 0)
    s = linalg.svd(right_shift(4)).singulars
    # oracle: eigenvalues of M^* M for the shift are diag(1, 1, 1, 0)
    m = right_shift(4)
    oracle = np.sqrt(np.sort(np.linalg.eigvalsh(m.conj().T @ m))[::-1].clip(0))
    np.testing.assert_allclose(s, oracle, atol=1e-15)
    np.testing.assert_allclose(s, [1, 1, 1, 0])


@settings(max_examples=200, deadline=None)
@given(complex_matrices(n_max=16, square=False))
def test_svd_reconstruction(m):
    u, s, v = linalg.svd(m)
    k = len(s)
    assert np.all(s >= 0) and np.all(np.diff(s) <= 0)
    smax = s[0] if k else 0.0
    recon = u[:, :k] @ np.diag(s) @ v[:, :k].conj().T
    assert np.linalg.norm(recon - m, 2) <= 1e-10 * max(smax, 1e-300) + 1e-300


def test_pseudo_inverse_examples():
    np.testing.assert_allclose(linalg.pseudo_inverse(np.diag([2.0, 0])), np.diag([0.5, 0]))
    np.testing.assert_array_equal(linalg.pseudo_inverse(np.zeros((3, 3))), np.zeros((3, 3)))


def test_pseudo_inverse_of_invertible_is_inverse(rng):
    m = crandn(rng, 4, 4)
    mp = linalg.pseudo_inverse(m)
    assert np.linalg.norm(mp @ m - np.eye(4), 2) <= 1e-9
    inv = np.linalg.inv(m)
    assert np.linalg.norm(mp - inv, 2) <= 1e-10 * np.linalg.norm(inv, 2)


def test_pseudo_inverse_penrose_properties_rank_two(rng):
    m = crandn(rng, 4, 2) @ crandn(rng, 2, 4)
    assert linalg.numerical_rank(m) == 2
    assert max(pseudo_inverse_verify(m, linalg.pseudo_inverse(m))) <= 1e-9


def test_pseudo_inverse_rejects_bad_rtol():
    with pytest.raises(ValueError):
        linalg.pseudo_inverse(np.eye(2), rtol=0.0)


@settings(max_examples=100, deadline=None)
@given(complex_matrices(n_max=8))
def test_pseudo_inverse_twice(m):
    # well-conditioned nonzero singular values only; the cutoff is tested above
    u, s, v = linalg.svd(m)
    s = np.where(s > 1e-3 * max(s[0], 1e-300), s, 0.0)
    m = (u * s) @ v.conj().T
    mpp = linalg.pseudo_inverse(linalg.pseudo_inverse(m))
    assert np.linalg.norm(mpp - m, 2) <= 1e-8 * max(1.0, np.linalg.norm(m, 2))


def test_psd_sqrt_examples():
    np.testing.assert_allclose(linalg.psd_sqrt(np.diag([4.0, 1, 0])), np.diag([2.0, 1, 0]))
    np.testing.assert_allclose(linalg.psd_sqrt(np.eye(3)), np.eye(3))


def test_psd_sqrt_errors():
    with pytest.raises(NotPSDError):
        linalg.psd_sqrt(np.diag([1.0, -1.0]))
    with pytest.raises(NotHermitianError):
        linalg.psd_sqrt([[1, 1], [0, 1]])


def test_psd_sqrt_clamps_tiny_negative_eigenvalue():
    r = linalg.psd_sqrt(np.diag([1.0, -1e-13]))
    np.testing.assert_allclose(r, np.diag([1.0, 0.0]))


@settings(max_examples=100, deadline=None)
@given(complex_matrices(n_max=10))
def test_psd_sqrt_squares_back(a):
    h = a @ a.conj().T
    r = linalg.psd_sqrt(h)
    assert np.linalg.norm(r - r.conj().T, 2) == 0.0
    assert linalg.min_eig_hermitian(r) >= -1e-10 * max(1.0, np.linalg.norm(r, 2))
    assert np.linalg.norm(r @ r - h, 2) <= 1e-9 * max(1.0, np.linalg.norm(h, 2))


def test_norm_rank_and_range_examples():
    assert linalg.spectral_norm(np.diag([2.0, -3.0])) == pytest.approx(3.0)
    k = np.zeros((4, 4))
    k[0, 0] = k[0, 1] = 1
    k[1, 2] = 2
    k[2, 3] = 3
    assert linalg.numerical_rank(k) == 3
    q = linalg.range_basis(right_shift(4))
    # projector onto span{e2, e3, e4}
    np.testing.assert_allclose(q @ q.conj().T, np.diag([0, 1, 1, 1]), atol=1e-15)
    assert linalg.numerical_rank(np.zeros((3, 3))) == 0
    assert linalg.range_basis(np.zeros((3, 3))).shape == (3, 0)


def test_null_basis_complements_range(rng):
    m = crandn(rng, 5, 3) @ crandn(rng, 3, 5)
    nb = linalg.null_basis(m)
    assert nb.shape == (5, 2)
    assert np.linalg.norm(m @ nb, 2) <= 1e-12 * np.linalg.norm(m, 2)


def test_is_psd():
    assert linalg.is_psd(np.diag([1.0, 0.0]))
    assert not linalg.is_psd(np.diag([1.0, -1e-3]))
    assert linalg.is_psd(np.diag([1.0, -1e-11]))


def test_size_cap():
    with pytest.raises(MatrixTooLargeError):
        linalg.spectral_norm(np.zeros((MAX_DIM + 1, MAX_DIM + 1)))


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        linalg.spectral_norm([[np.nan]])

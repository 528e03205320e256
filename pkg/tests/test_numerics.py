import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vanish.numerics import (
    Regularization,
    gen_sym_eig,
    pinv_rtol,
    projection_residual,
    sym_eig,
)


def random_gram(rng, d, rank=None):
    rank = rank or d
    C = rng.normal(size=(d, rank))
    return C @ C.T


def test_sym_eig_ascending_and_orthonormal():
    rng = np.random.default_rng(0)
    A = random_gram(rng, 6)
    eig = sym_eig(A)
    assert np.all(np.diff(eig.eigenvalues) >= 0)
    V = eig.eigenvectors
    assert np.allclose(V.T @ V, np.eye(6), atol=1e-12)
    assert np.allclose(A @ V, V * eig.eigenvalues, atol=1e-10)


def test_sym_eig_sign_convention():
    rng = np.random.default_rng(1)
    A = random_gram(rng, 5)
    V = sym_eig(A).eigenvectors
    for j in range(5):
        lead = np.abs(V[:, j]).argmax()
        assert V[lead, j] > 0


def test_sym_eig_clamps_rounding_noise():
    # rank-deficient Gram: tiny negative eigenvalues get clamped to zero
    rng = np.random.default_rng(2)
    A = random_gram(rng, 8, rank=3)
    eig = sym_eig(A)
    assert np.all(eig.eigenvalues >= 0)
    assert np.sum(eig.eigenvalues < 1e-10) == 5


def test_sym_eig_rejects_indefinite():
    with pytest.raises(ValueError):
        sym_eig(np.diag([1.0, -1.0]))
    with pytest.raises(ValueError):
        sym_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_gen_sym_eig_matches_scipy_reference():
    import scipy.linalg as sla

    rng = np.random.default_rng(3)
    A = random_gram(rng, 6)
    B = random_gram(rng, 6) + np.eye(6)
    eig = gen_sym_eig(A, B)
    ref = np.sort(sla.eigh(A, B, eigvals_only=True))
    assert np.allclose(eig.eigenvalues, ref, atol=1e-10)
    # vectors are B-orthonormal (alpha = 0 here)
    V = eig.eigenvectors
    assert np.allclose(V.T @ B @ V, np.eye(6), atol=1e-10)


def test_gen_sym_eig_regularized_orthonormality():
    rng = np.random.default_rng(4)
    A = random_gram(rng, 5)
    B = random_gram(rng, 5, rank=3)  # singular: needs alpha > 0
    alpha = Regularization(1e-6).realize(B)
    eig = gen_sym_eig(A, B, alpha=alpha)
    V = eig.eigenvectors
    Breg = B + alpha * np.eye(5)
    assert np.allclose(V.T @ Breg @ V, np.eye(5), atol=1e-8)


def test_gen_sym_eig_singular_without_alpha_raises():
    rng = np.random.default_rng(5)
    A = random_gram(rng, 4)
    B = np.diag([1.0, 1.0, 0.0, 0.0])  # exactly singular
    with pytest.raises(ValueError, match="regularization"):
        gen_sym_eig(A, B)


def test_gen_sym_eig_shape_mismatch():
    with pytest.raises(ValueError):
        gen_sym_eig(np.eye(3), np.eye(2))


def test_regularization_heuristic():
    B = np.diag([1.0, 2.0, 3.0])
    assert Regularization(1e-6).realize(B) == pytest.approx(1e-6 * 6.0 / 3.0)
    with pytest.raises(ValueError):
        Regularization(-1.0)


def test_pinv_rtol():
    assert pinv_rtol((100, 3)) == 100 * np.finfo(float).eps


def test_projection_residual_orthogonality_and_replay():
    rng = np.random.default_rng(6)
    F = rng.normal(size=(30, 4))
    C = rng.normal(size=(30, 3))
    residual, W = projection_residual(C, F)
    assert np.abs(F.T @ residual).max() < 1e-10 * np.linalg.norm(C)
    assert np.allclose(residual, C - F @ W)


def test_projection_residual_in_span_gives_zero():
    rng = np.random.default_rng(7)
    F = rng.normal(size=(20, 5))
    C = F @ rng.normal(size=(5, 2))
    residual, _ = projection_residual(C, F)
    assert np.linalg.norm(residual) < 1e-10 * np.linalg.norm(C)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(1, 4), st.integers(0, 2**31))
def test_projection_residual_property(rows_extra, cols, seed):
    rng = np.random.default_rng(seed)
    s = 10 + rows_extra
    F = rng.normal(size=(s, 3))
    C = rng.normal(size=(s, cols))
    residual, W = projection_residual(C, F)
    # residual orthogonal to span(F), decomposition exact
    assert np.abs(F.T @ residual).max() <= 1e-8 * max(np.linalg.norm(C), 1.0)
    assert np.allclose(F @ W + residual, C, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**31))
def test_gen_sym_eig_trace_identity(d, seed):
    # sum of eigenvalues equals trace of the whitened matrix
    rng = np.random.default_rng(seed)
    A = random_gram(rng, d)
    B = random_gram(rng, d) + np.eye(d)
    eig = gen_sym_eig(A, B)
    L = np.linalg.cholesky(B)
    M = np.linalg.solve(L, np.linalg.solve(L, A).T)
    assert np.sum(eig.eigenvalues) == pytest.approx(np.trace(M), rel=1e-8)

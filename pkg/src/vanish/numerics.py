"""Symmetric / generalized symmetric eigen-solvers and projection residuals.

The generalized solver whitens through a Cholesky factor of the regularized
right-hand matrix, so the returned vectors are (B + alpha*I)-orthonormal.
Both solvers share a deterministic sign convention: the largest-magnitude
component of each eigenvector is made positive, which pins down the +/-
ambiguity and makes runs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

# Gram-matrix eigenvalues are nonnegative in exact arithmetic; values in
# (-CLAMP_REL * ||A||, 0) are rounding noise and get clamped to zero, anything
# below that window indicates a non-Gram input and raises.
CLAMP_REL = 1e-10


@dataclass(frozen=True)
class Regularization:
    """Ridge term for the generalized eigenproblem: alpha = c * Tr(B) / dim."""

    alpha_multiplier: float = 1e-6

    def __post_init__(self):
        if self.alpha_multiplier < 0:
            raise ValueError("alpha_multiplier must be nonnegative")

    def realize(self, B: np.ndarray) -> float:
        dim = B.shape[0]
        return self.alpha_multiplier * float(np.trace(B)) / dim if dim else 0.0


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray   # ascending
    eigenvectors: np.ndarray  # column i pairs with eigenvalues[i]


def _check_finite(name: str, M: np.ndarray) -> None:
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")


def _fix_signs(V: np.ndarray) -> np.ndarray:
    lead = np.abs(V).argmax(axis=0)
    signs = np.sign(V[lead, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def _clamp_nonnegative(eigenvalues: np.ndarray, scale: float) -> np.ndarray:
    tol = CLAMP_REL * scale
    if np.any(eigenvalues < -tol):
        raise ValueError(
            f"eigenvalue {eigenvalues.min():.3e} below -{tol:.3e}; "
            "input is not a Gram matrix"
        )
    return np.where(eigenvalues < 0, 0.0, eigenvalues)


def sym_eig(A: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a symmetric (Gram) matrix, ascending eigenvalues."""
    A = np.asarray(A, dtype=float)
    _check_finite("A", A)
    A = 0.5 * (A + A.T)
    eigenvalues, V = np.linalg.eigh(A)
    eigenvalues = _clamp_nonnegative(eigenvalues, np.linalg.norm(A))
    return EigenDecomposition(eigenvalues, _fix_signs(V))


def gen_sym_eig(
    A: np.ndarray,
    B: np.ndarray,
    reg: Regularization | None = None,
    alpha: float | None = None,
) -> EigenDecomposition:
    """Solve A v = lambda (B + alpha*I) v for symmetric PSD A, B.

    alpha overrides reg when given; with both omitted alpha = 0 and B must be
    positive definite.  Returned vectors are (B + alpha*I)-orthonormal.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    _check_finite("A", A)
    _check_finite("B", B)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    A = 0.5 * (A + A.T)
    B = 0.5 * (B + B.T)
    if alpha is None:
        alpha = reg.realize(B) if reg is not None else 0.0
    Breg = B + alpha * np.eye(B.shape[0])
    try:
        L = np.linalg.cholesky(Breg)
    except np.linalg.LinAlgError:
        raise ValueError(
            "B + alpha*I is not positive definite; increase the "
            "regularization multiplier"
        ) from None
    # whiten: solve the standard problem on L^-1 A L^-T, map back via L^-T
    LiA = sla.solve_triangular(L, A, lower=True)
    M = sla.solve_triangular(L, LiA.T, lower=True)
    eigenvalues, W = np.linalg.eigh(0.5 * (M + M.T))
    # rounding while forming the whitened matrix perturbs eigenvalues by up to
    # ~eps * ||A|| * ||L^-1||^2, so the clamp window scales with that floor
    Linv = sla.solve_triangular(L, np.eye(L.shape[0]), lower=True)
    floor = np.linalg.norm(A) * np.linalg.norm(Linv) ** 2
    eigenvalues = _clamp_nonnegative(eigenvalues, floor)
    V = sla.solve_triangular(L.T, W, lower=False)
    return EigenDecomposition(eigenvalues, _fix_signs(V))


def pinv_rtol(shape: tuple[int, int]) -> float:
    """Rank cutoff used by projection_residual: max(dims) * machine epsilon."""
    return max(shape) * np.finfo(float).eps


def projection_residual(
    C_pre_eval: np.ndarray, F_eval: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonalize candidate evaluations against the span of F_eval.

    Returns (residual, combination) where
    residual = C_pre_eval - F_eval @ combination and
    combination = pinv(F_eval) @ C_pre_eval, so the same combination can be
    replayed on coefficient vectors or on fresh evaluation points.
    """
    C_pre_eval = np.asarray(C_pre_eval, dtype=float)
    F_eval = np.asarray(F_eval, dtype=float)
    _check_finite("C_pre_eval", C_pre_eval)
    _check_finite("F_eval", F_eval)
    combination = np.linalg.pinv(F_eval, rcond=pinv_rtol(F_eval.shape)) @ C_pre_eval
    residual = C_pre_eval - F_eval @ combination
    return residual, combination

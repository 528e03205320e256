"""Degree-lexicographic monomial bookkeeping and multiplication-shift matrices.

Monomials are indexed per degree block: block t holds the C(n+t-1, t)
exponent vectors of total degree t, sorted lexicographically descending on
(e_1, ..., e_n); blocks are concatenated in ascending degree.  For n = 2 this
yields 1, x, y, x^2, xy, y^2, x^3, ...  All tables and shift matrices depend
only on (n, k, t) and are cached, so repeated constructions pay nothing.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
import scipy.sparse as sp


def monomial_count(n: int, t: int, cumulative: bool = False) -> int:
    """Number of n-variate monomials of degree t (or degree <= t)."""
    if n < 1:
        raise ValueError(f"need at least one variable, got n={n}")
    if t < 0:
        raise ValueError(f"degree must be nonnegative, got t={t}")
    if cumulative:
        return math.comb(n + t, t)
    return math.comb(n + t - 1, t)


@lru_cache(maxsize=None)
def enumerate_exponents(n: int, t: int) -> tuple[tuple[int, ...], ...]:
    """Degree-t exponent vectors in canonical (descending lex) order."""
    if n < 1:
        raise ValueError(f"need at least one variable, got n={n}")
    if t < 0:
        raise ValueError(f"degree must be nonnegative, got t={t}")
    if n == 1:
        return ((t,),)
    out = []
    for head in range(t, -1, -1):
        out.extend((head, *rest) for rest in enumerate_exponents(n - 1, t - head))
    return tuple(out)


@lru_cache(maxsize=None)
def _block_ranks(n: int, t: int) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(enumerate_exponents(n, t))}


def monomial_index(exponents: tuple[int, ...], cumulative: bool = True) -> int:
    """Rank of an exponent vector, within its degree block or cumulatively."""
    exponents = tuple(int(e) for e in exponents)
    if any(e < 0 for e in exponents):
        raise ValueError(f"exponents must be nonnegative, got {exponents}")
    n = len(exponents)
    t = sum(exponents)
    rank = _block_ranks(n, t)[exponents]
    if cumulative and t > 0:
        rank += monomial_count(n, t - 1, cumulative=True)
    return rank


def index_to_exponents(index: int, n: int) -> tuple[int, ...]:
    """Inverse of cumulative monomial_index."""
    if index < 0:
        raise IndexError(f"index must be nonnegative, got {index}")
    t = 0
    while monomial_count(n, t, cumulative=True) <= index:
        t += 1
    offset = monomial_count(n, t - 1, cumulative=True) if t > 0 else 0
    return enumerate_exponents(n, t)[index - offset]


def cumulative_exponents(n: int, t: int) -> list[tuple[int, ...]]:
    """All exponent vectors of degree <= t in canonical order."""
    out: list[tuple[int, ...]] = []
    for tau in range(t + 1):
        out.extend(enumerate_exponents(n, tau))
    return out


def veronese_evaluate(points: np.ndarray, t: int) -> np.ndarray:
    """Evaluate every monomial of degree <= t at each point (row-wise)."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError("points must be a 2-d array (s x n)")
    if not np.all(np.isfinite(points)):
        raise ValueError("points must be finite")
    n = points.shape[1]
    exps = np.array(cumulative_exponents(n, t), dtype=int)
    # s x M^{<=t}: product over variables of x_j ** e_j
    return np.prod(points[:, None, :] ** exps[None, :, :], axis=2)


@lru_cache(maxsize=None)
def shift_rows(n: int, k: int, t: int) -> np.ndarray:
    """Row targets of the degree-block shift: column j (degree-t monomial j)
    maps to this row of the degree-(t+1) block when multiplied by x_k."""
    if not 1 <= k <= n:
        raise ValueError(f"variable index k={k} out of range 1..{n}")
    ranks = _block_ranks(n, t + 1)
    rows = np.empty(monomial_count(n, t), dtype=int)
    for j, e in enumerate(enumerate_exponents(n, t)):
        bumped = list(e)
        bumped[k - 1] += 1
        rows[j] = ranks[tuple(bumped)]
    rows.setflags(write=False)
    return rows


@lru_cache(maxsize=None)
def shift_matrix(n: int, k: int, t: int, form: str = "block") -> sp.csr_matrix:
    """Sparse 0/1 shift matrix for multiplication by x_k (k = 0: constant 1).

    block form: M_n^{t+1} x M_n^t, degree-t coefficients to degree-(t+1).
    cumulative form: M_n^{<=t+1} x M_n^{<=t}, acts on whole coefficient
    vectors; block diagonal for k >= 1, rectangular identity for k = 0.
    """
    if not 0 <= k <= n:
        raise ValueError(f"variable index k={k} out of range 0..{n}")
    if form not in ("block", "cumulative"):
        raise ValueError(f"unknown form {form!r}")
    if form == "block":
        n_rows = monomial_count(n, t + 1)
        n_cols = monomial_count(n, t)
        if k == 0:
            # multiplying by 1 contributes nothing of degree t+1
            return sp.csr_matrix((n_rows, n_cols))
        rows = shift_rows(n, k, t)
        cols = np.arange(n_cols)
        data = np.ones(n_cols)
        return sp.csr_matrix((data, (rows, cols)), shape=(n_rows, n_cols))
    n_rows = monomial_count(n, t + 1, cumulative=True)
    n_cols = monomial_count(n, t, cumulative=True)
    if k == 0:
        return sp.eye(n_rows, n_cols, format="csr")
    row_idx = []
    col_idx = []
    col_off = 0
    for tau in range(t + 1):
        row_off = monomial_count(n, tau, cumulative=True)
        rows = shift_rows(n, k, tau)
        row_idx.append(rows + row_off)
        col_idx.append(np.arange(len(rows)) + col_off)
        col_off += len(rows)
    rows = np.concatenate(row_idx)
    cols = np.concatenate(col_idx)
    data = np.ones(len(rows))
    return sp.csr_matrix((data, (rows, cols)), shape=(n_rows, n_cols))


def build_linear_shift(
    p_coeffs: np.ndarray,
    n: int,
    t: int,
    restrict_columns: np.ndarray | None = None,
) -> sp.csr_matrix:
    """Cumulative shift matrix of a degree-<=1 polynomial p = b_0 + sum b_k x_k.

    p_coeffs lists (b_0, b_1, ..., b_n); longer vectors are accepted when the
    extra entries (degree >= 2 monomials) are all zero.  If restrict_columns
    is given only those cumulative source columns are materialized.
    """
    p_coeffs = np.asarray(p_coeffs, dtype=float).ravel()
    if len(p_coeffs) < n + 1:
        p_coeffs = np.concatenate([p_coeffs, np.zeros(n + 1 - len(p_coeffs))])
    if np.any(p_coeffs[n + 1:] != 0):
        raise ValueError("p must have degree <= 1")
    out = sp.csr_matrix(
        (monomial_count(n, t + 1, cumulative=True),
         monomial_count(n, t, cumulative=True))
    )
    for k in range(n + 1):
        b = p_coeffs[k]
        if b != 0:
            out = out + b * shift_matrix(n, k, t, form="cumulative")
    if restrict_columns is not None:
        out = out.tocsc()[:, np.asarray(restrict_columns, dtype=int)].tocsr()
    return out

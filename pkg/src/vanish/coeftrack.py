"""Coefficient-vector propagation without symbolic expansion.

A CoefficientVector stores one array per degree block, aligned to the
canonical monomial order of `monomials`.  Blocks may be truncated to a
per-degree index set recorded in a TruncationState; all vectors inside one
basis construction share the same convention, so linear combinations stay
plain matrix algebra.  `expand_oracle` is the brute-force symbolic product
used only as ground truth in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .monomials import (
    enumerate_exponents,
    monomial_count,
    shift_rows,
)


class CoefficientVector:
    """Per-degree-block coefficients of a polynomial in n variables."""

    __slots__ = ("n", "blocks")

    def __init__(self, n: int, blocks: list[np.ndarray]):
        if not blocks:
            raise ValueError("need at least the constant block")
        self.n = n
        self.blocks = [np.asarray(b, dtype=float).ravel() for b in blocks]

    @classmethod
    def constant(cls, n: int, value: float) -> "CoefficientVector":
        return cls(n, [np.array([value])])

    @classmethod
    def variable(cls, n: int, k: int) -> "CoefficientVector":
        """The polynomial x_k (k in 1..n)."""
        block1 = np.zeros(n)
        block1[k - 1] = 1.0
        return cls(n, [np.zeros(1), block1])

    @classmethod
    def from_flat(cls, n: int, flat: np.ndarray) -> "CoefficientVector":
        """Split a cumulative (full-convention) coefficient vector into blocks."""
        flat = np.asarray(flat, dtype=float).ravel()
        blocks = []
        pos = 0
        t = 0
        while pos < len(flat):
            size = monomial_count(n, t)
            blocks.append(flat[pos:pos + size])
            pos += size
            t += 1
        if pos != len(flat):
            raise ValueError("flat length is not a sum of full degree blocks")
        return cls(n, blocks)

    @property
    def degree(self) -> int:
        return len(self.blocks) - 1

    def norm(self) -> float:
        return float(np.sqrt(sum(float(b @ b) for b in self.blocks)))

    def copy(self) -> "CoefficientVector":
        return CoefficientVector(self.n, [b.copy() for b in self.blocks])

    def is_full(self) -> bool:
        return all(
            len(b) == monomial_count(self.n, d) for d, b in enumerate(self.blocks)
        )

    def items(self):
        """Yield (exponent tuple, coefficient) for nonzero entries (full only)."""
        if not self.is_full():
            raise ValueError("items() requires an untruncated vector")
        for d, block in enumerate(self.blocks):
            exps = enumerate_exponents(self.n, d)
            for j in np.flatnonzero(block):
                yield exps[j], float(block[j])

    def to_flat(self) -> np.ndarray:
        return np.concatenate(self.blocks)

    def __repr__(self):
        return f"CoefficientVector(n={self.n}, degree={self.degree})"


@dataclass
class TruncationState:
    """Per-degree kept monomial index sets and the norm rescale factors."""

    theta: float = 1.0
    selected: dict[int, np.ndarray] = field(default_factory=dict)
    gamma: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")

    @property
    def gamma_product(self) -> float:
        out = 1.0
        for g in self.gamma.values():
            out *= g
        return out

    def indices(self, degree: int) -> np.ndarray | None:
        """Kept indices into the degree block, or None if untruncated."""
        return self.selected.get(degree)

    def record(self, degree: int, indices: np.ndarray, gamma: float) -> None:
        if not 0.0 < gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
        self.selected[degree] = np.sort(np.asarray(indices, dtype=int))
        self.gamma[degree] = float(gamma)

    def apply(self, vector: CoefficientVector, degree: int) -> None:
        """Restrict vector's degree block in place to the kept index set."""
        idx = self.selected.get(degree)
        if idx is not None and vector.degree >= degree:
            block = vector.blocks[degree]
            if len(block) != monomial_count(vector.n, degree):
                raise ValueError("block already truncated")
            vector.blocks[degree] = block[idx]


def _block_lengths(vectors: list[CoefficientVector]) -> list[int]:
    max_deg = max(v.degree for v in vectors)
    lengths = []
    for d in range(max_deg + 1):
        sizes = {len(v.blocks[d]) for v in vectors if v.degree >= d}
        if len(sizes) > 1:
            raise ValueError(
                f"inconsistent truncation convention at degree {d}: {sizes}"
            )
        lengths.append(sizes.pop())
    return lengths


def stack(vectors: list[CoefficientVector]) -> np.ndarray:
    """Column matrix of coefficient vectors, zero-padded to a shared degree."""
    lengths = _block_lengths(vectors)
    M = np.zeros((sum(lengths), len(vectors)))
    for j, v in enumerate(vectors):
        pos = 0
        for d, size in enumerate(lengths):
            if v.degree >= d:
                M[pos:pos + size, j] = v.blocks[d]
            pos += size
    return M


def _split(n: int, column: np.ndarray, lengths: list[int]) -> CoefficientVector:
    blocks = []
    pos = 0
    for size in lengths:
        blocks.append(column[pos:pos + size].copy())
        pos += size
    return CoefficientVector(n, blocks)


def combine(
    vectors: list[CoefficientVector], V: np.ndarray
) -> list[CoefficientVector]:
    """Coefficient vectors of the linear combinations C @ V (column-wise)."""
    V = np.asarray(V, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    if V.shape[0] != len(vectors):
        raise ValueError(
            f"combination matrix has {V.shape[0]} rows for {len(vectors)} vectors"
        )
    lengths = _block_lengths(vectors)
    out = stack(vectors) @ V
    n = vectors[0].n
    return [_split(n, out[:, j], lengths) for j in range(out.shape[1])]


def multiply_by_linear(
    p: CoefficientVector,
    q: CoefficientVector,
    truncation: TruncationState | None = None,
) -> CoefficientVector:
    """Coefficients of p*q for linear p, via sparse shift maps (no expansion).

    q may be truncated per `truncation`; output blocks follow the same
    convention, with the new top block restricted only if the truncation
    state already fixes its index set.
    """
    if p.degree > 1:
        raise ValueError(f"p must have degree <= 1, got {p.degree}")
    n = p.n
    b0 = float(p.blocks[0][0])
    b = np.zeros(n)
    if p.degree >= 1:
        if len(p.blocks[1]) == n:
            b = p.blocks[1]
        else:
            # truncated linear block: scatter back; dropped entries are zero
            idx = truncation.indices(1) if truncation is not None else None
            if idx is None or len(idx) != len(p.blocks[1]):
                raise ValueError("truncated p without a matching index set")
            b[idx] = p.blocks[1]
    D = q.degree
    sel = truncation.indices if truncation is not None else (lambda d: None)

    out: list[np.ndarray] = []
    for d in range(D + 2):
        idx = sel(d)
        size = len(idx) if idx is not None else monomial_count(n, d)
        block = np.zeros(size)
        if d <= D:
            block += b0 * q.blocks[d]
        if d >= 1:
            src = sel(d - 1)
            src_cols = src if src is not None else np.arange(monomial_count(n, d - 1))
            vals = q.blocks[d - 1]
            for k in np.flatnonzero(b):
                rows = shift_rows(n, k + 1, d - 1)[src_cols]
                if idx is not None:
                    pos = np.searchsorted(idx, rows)
                    ok = (pos < len(idx)) & (idx[np.minimum(pos, len(idx) - 1)] == rows)
                    np.add.at(block, pos[ok], b[k] * vals[ok])
                else:
                    np.add.at(block, rows, b[k] * vals)
        out.append(block)
    return CoefficientVector(n, out)


def expand_oracle(p: CoefficientVector, q: CoefficientVector) -> CoefficientVector:
    """Brute-force symbolic product: convolve exponent vectors term by term."""
    n = p.n
    terms: dict[tuple[int, ...], float] = {}
    for ep, cp in p.items():
        for eq, cq in q.items():
            key = tuple(a + b for a, b in zip(ep, eq))
            terms[key] = terms.get(key, 0.0) + cp * cq
    deg = p.degree + q.degree
    blocks = []
    for d in range(deg + 1):
        block = np.zeros(monomial_count(n, d))
        for j, e in enumerate(enumerate_exponents(n, d)):
            if e in terms:
                block[j] = terms[e]
        blocks.append(block)
    return CoefficientVector(n, blocks)


def gram(vectors: list[CoefficientVector]) -> np.ndarray:
    """Gram matrix of coefficient vectors (shared truncation convention)."""
    M = stack(vectors)
    G = M.T @ M
    return 0.5 * (G + G.T)


def truncate_select(
    degree_block: np.ndarray, theta: float
) -> tuple[np.ndarray, float]:
    """Pick the high-importance monomial rows of a degree block.

    degree_block has one row per degree-t monomial and one column per
    polynomial of F_t.  Rows are taken in descending row-norm order while the
    kept squared mass stays within theta^2 of the total (relative budget),
    with a floor of |F_t| rows so exact propagation stays possible.
    Returns (sorted kept indices, gamma).
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    block = np.atleast_2d(np.asarray(degree_block, dtype=float))
    n_rows, n_cols = block.shape
    delta2 = (block ** 2).sum(axis=1)
    total = float(delta2.sum())
    if total == 0.0:
        raise ValueError("all-zero coefficient block; nothing to select")
    # descending by row mass, ties broken toward the lower monomial index
    order = np.lexsort((np.arange(n_rows), -delta2))
    csum = np.cumsum(delta2[order])
    total = float(csum[-1])
    count = int(np.searchsorted(csum, theta ** 2 * total, side="right"))
    count = max(count, min(n_cols, n_rows))
    indices = np.sort(order[:count])
    gamma = float(np.sqrt(csum[count - 1] / total))
    return indices, gamma


def truncated_normalization_matrix(
    vectors: list[CoefficientVector], gamma_product: float
) -> np.ndarray:
    """Gram of truncated coefficients rescaled by the running gamma product."""
    if not 0.0 < gamma_product <= 1.0:
        raise ValueError(f"gamma_product must lie in (0, 1], got {gamma_product}")
    return gram(vectors) / gamma_product

"""Degree-by-degree basis construction for approximate vanishing ideals.

The pipeline alternates three steps per degree t: generate candidate
polynomials from products of lower-degree nonvanishing ones and orthogonalize
their evaluation vectors against everything found so far; solve a (possibly
generalized) symmetric eigenproblem on the candidate Gram matrix; split the
resulting combinations into nonvanishing (F_t) and vanishing (G_t) sets by
comparing sqrt(eigenvalue) against the tolerance epsilon.

Three normalization strategies are supported:
  identity     - plain eigenproblem, no normalization (prone to spurious
                 vanishing through coefficient decay/growth),
  coefficient  - generalized eigenproblem against the Gram matrix of
                 coefficient vectors, so every basis polynomial has unit
                 coefficient norm; optional per-degree coefficient truncation
                 (theta < 1) accelerates the Gram computation,
  vca          - identity solve followed by rescaling each nonvanishing
                 polynomial to unit evaluation norm, with F_0 = {1/sqrt(|X|)}.

Coefficient vectors are tracked for every strategy so diagnostics can expose
spurious (non)vanishing polynomials.  Evaluation vectors are always exact;
truncation only affects the normalization matrix and the tracked coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coeftrack import (
    CoefficientVector,
    TruncationState,
    combine,
    gram,
    multiply_by_linear,
    truncate_select,
)
from .numerics import EigenDecomposition, gen_sym_eig, projection_residual, sym_eig

STRATEGY_KINDS = ("identity", "coefficient", "vca")

# a candidate combination with v' N v below this times Tr(N) is the zero
# polynomial (its normalization component vanishes) and is dropped outright
ZERO_POLY_REL = 1e-12


@dataclass(frozen=True)
class Strategy:
    kind: str = "coefficient"
    theta: float = 1.0
    alpha_multiplier: float = 1e-6

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        if self.alpha_multiplier < 0:
            raise ValueError("alpha_multiplier must be nonnegative")

    @property
    def truncating(self) -> bool:
        return self.kind == "coefficient" and self.theta < 1.0


@dataclass
class TrackedPolynomial:
    """A polynomial held as (evaluation vector, coefficient vector)."""

    values: np.ndarray              # evaluation vector on the training points
    coeffs: CoefficientVector       # tracked (possibly truncated) coefficients
    degree: int
    sqrt_lambda: float | None = None  # sqrt of the eigenvalue that produced it
    scale: float = 1.0                # post-eigen rescale (vca nonvanishing)
    full_coeffs: CoefficientVector | None = None  # exact shadow when truncating

    @property
    def extent(self) -> float:
        return float(np.linalg.norm(self.values))

    def coeff_norm(self, exact: bool = True) -> float:
        v = self.full_coeffs if (exact and self.full_coeffs is not None) else self.coeffs
        return v.norm()


def _exact(poly: TrackedPolynomial) -> CoefficientVector:
    return poly.full_coeffs if poly.full_coeffs is not None else poly.coeffs


def _subtract(
    minuend: CoefficientVector, subtrahend: CoefficientVector
) -> CoefficientVector:
    """minuend - subtrahend, where subtrahend may have lower degree."""
    blocks = [b.copy() for b in minuend.blocks]
    for d, b in enumerate(subtrahend.blocks):
        if d > minuend.degree:
            if np.any(b):
                raise ValueError("subtrahend has higher degree than minuend")
            continue
        if len(b) != len(blocks[d]):
            raise ValueError(f"inconsistent block length at degree {d}")
        blocks[d] -= b
    return CoefficientVector(minuend.n, blocks)


@dataclass
class DegreeLayer:
    t: int
    candidates: list[TrackedPolynomial]
    normalization: np.ndarray
    eigen: EigenDecomposition
    F_t: list[TrackedPolynomial]
    G_t: list[TrackedPolynomial]
    # replay data: pre-candidate recipe and the orthogonalization combination
    pairs: list[tuple[int, int]] | None   # (index in F_1, index in F_{t-1}); None at t=1
    ortho_W: np.ndarray                   # |F^{t-1}| x |C_t|
    kept_F: list[int] = field(default_factory=list)  # eigen column indices
    kept_G: list[int] = field(default_factory=list)
    scales_F: list[float] = field(default_factory=list)
    realized_alpha: float = 0.0


@dataclass
class ConstructionResult:
    X: np.ndarray
    epsilon: float
    strategy: Strategy
    constant: float                      # the degree-0 seed polynomial value
    layers: list[DegreeLayer]
    F: list[TrackedPolynomial]           # includes the constant, construction order
    G: list[TrackedPolynomial]
    truncation: TruncationState | None
    termination_degree: int

    @property
    def n_variables(self) -> int:
        return self.X.shape[1]

    def F_by_degree(self, t: int) -> list[TrackedPolynomial]:
        if t == 0:
            return [self.F[0]]
        return self.layers[t - 1].F_t


def step1_candidates(
    t: int,
    F_layers: list[list[TrackedPolynomial]],
    F_all: list[TrackedPolynomial],
    X: np.ndarray,
    truncation: TruncationState | None,
    shadow: bool,
) -> tuple[list[TrackedPolynomial], list[tuple[int, int]] | None, np.ndarray]:
    """Generate degree-t candidates, orthogonalized against span(F^{t-1}).

    Returns (candidates, product pairs, combination matrix W) with
    candidate evaluations = pre - F^{t-1}(X) @ W, and coefficient vectors
    updated through the same W.
    """
    n = X.shape[1]
    if t == 1:
        pairs = None
        pre_vals = [X[:, k] for k in range(n)]
        pre_coeffs = [CoefficientVector.variable(n, k + 1) for k in range(n)]
        pre_full = [c.copy() for c in pre_coeffs] if shadow else None
    else:
        # C_t is a set: at t = 2 both factors come from F_1, so f_i f_j and
        # f_j f_i coincide and only unordered pairs are generated
        pairs = [
            (ip, iq)
            for ip in range(len(F_layers[1]))
            for iq in range(ip if t == 2 else 0, len(F_layers[t - 1]))
        ]
        pre_vals = []
        pre_coeffs = []
        pre_full = [] if shadow else None
        for ip, iq in pairs:
            p, q = F_layers[1][ip], F_layers[t - 1][iq]
            pre_vals.append(p.values * q.values)
            pre_coeffs.append(multiply_by_linear(p.coeffs, q.coeffs, truncation))
            if shadow:
                pre_full.append(multiply_by_linear(_exact(p), _exact(q)))

    pre_matrix = np.column_stack(pre_vals)
    F_matrix = np.column_stack([f.values for f in F_all])
    residual, W = projection_residual(pre_matrix, F_matrix)

    corrections = combine([f.coeffs for f in F_all], W)
    candidates = []
    full_corrections = combine([_exact(f) for f in F_all], W) if shadow else None
    for j in range(len(pre_vals)):
        coeffs = _subtract(pre_coeffs[j], corrections[j])
        full = _subtract(pre_full[j], full_corrections[j]) if shadow else None
        candidates.append(
            TrackedPolynomial(residual[:, j], coeffs, degree=t, full_coeffs=full)
        )
    return candidates, pairs, W


def step2_solve(
    candidates: list[TrackedPolynomial],
    strategy: Strategy,
    gamma_product: float = 1.0,
) -> tuple[EigenDecomposition, np.ndarray, float]:
    """Solve the (generalized) eigenproblem on the candidate evaluations.

    Returns (decomposition, normalization matrix, realized alpha).
    """
    C = np.column_stack([c.values for c in candidates])
    A = C.T @ C
    if strategy.kind == "coefficient":
        N = gram([c.coeffs for c in candidates]) / gamma_product
        alpha = strategy.alpha_multiplier * float(np.trace(N)) / len(candidates)
        return gen_sym_eig(A, N, alpha=alpha), N, alpha
    N = np.eye(len(candidates))
    return sym_eig(A), N, 0.0


def step3_split(
    candidates: list[TrackedPolynomial],
    eigen: EigenDecomposition,
    normalization: np.ndarray,
    epsilon: float,
    strategy: Strategy,
    gamma_product: float = 1.0,
) -> tuple[list[TrackedPolynomial], list[TrackedPolynomial], list[int], list[int]]:
    """Combine candidates with the eigenvectors and split by sqrt(lambda)."""
    t = candidates[0].degree
    C = np.column_stack([c.values for c in candidates])
    V = eigen.eigenvectors
    values = C @ V
    combos = combine([c.coeffs for c in candidates], V)
    shadow = candidates[0].full_coeffs is not None
    full_combos = combine([_exact(c) for c in candidates], V) if shadow else None
    drop_tol = ZERO_POLY_REL * float(np.trace(normalization))

    F_t: list[TrackedPolynomial] = []
    G_t: list[TrackedPolynomial] = []
    kept_F: list[int] = []
    kept_G: list[int] = []
    for i in range(len(candidates)):
        if strategy.kind == "coefficient":
            # the quadratic form v' N v cancels catastrophically for null
            # directions (e.g. duplicate product candidates); the combined
            # coefficient vector itself cancels accurately, so test its norm
            if combos[i].norm() ** 2 / gamma_product < drop_tol:
                continue  # the zero polynomial; never a basis element
        sq = float(np.sqrt(eigen.eigenvalues[i]))
        poly = TrackedPolynomial(
            values=values[:, i],
            coeffs=combos[i],
            degree=t,
            sqrt_lambda=sq,
            full_coeffs=full_combos[i] if shadow else None,
        )
        if sq <= epsilon:
            G_t.append(poly)
            kept_G.append(i)
        else:
            F_t.append(poly)
            kept_F.append(i)
    return F_t, G_t, kept_F, kept_G


def _rescale_unit_extent(poly: TrackedPolynomial) -> None:
    scale = 1.0 / float(np.linalg.norm(poly.values))
    poly.values = poly.values * scale
    poly.coeffs = CoefficientVector(
        poly.coeffs.n, [b * scale for b in poly.coeffs.blocks]
    )
    if poly.full_coeffs is not None:
        poly.full_coeffs = CoefficientVector(
            poly.full_coeffs.n, [b * scale for b in poly.full_coeffs.blocks]
        )
    poly.scale = scale


def construct(
    X: np.ndarray,
    epsilon: float,
    strategy: Strategy = Strategy(),
    max_degree: int | None = None,
    shadow_full_coeffs: bool = True,
) -> ConstructionResult:
    """Run the full basis construction on the points X with tolerance epsilon.

    max_degree defaults to min(|X|, 15) as a termination guard.  When the
    coefficient strategy truncates (theta < 1) and shadow_full_coeffs is
    true, exact untruncated coefficient vectors are additionally maintained
    for diagnostics (extra cost, no effect on the construction itself).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError("X must be a nonempty s x n matrix")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite entries")
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    s, n = X.shape
    if max_degree is None:
        max_degree = min(s, 15)
    if max_degree < 1:
        raise ValueError("max_degree must be positive")

    constant = 1.0 / np.sqrt(s) if strategy.kind == "vca" else 1.0
    seed = TrackedPolynomial(
        values=np.full(s, constant),
        coeffs=CoefficientVector.constant(n, constant),
        degree=0,
    )
    truncation = TruncationState(strategy.theta) if strategy.truncating else None
    shadow = strategy.truncating and shadow_full_coeffs

    F_all = [seed]
    F_layers = [[seed]]
    G_all: list[TrackedPolynomial] = []
    layers: list[DegreeLayer] = []
    termination_degree = max_degree

    for t in range(1, max_degree + 1):
        candidates, pairs, W = step1_candidates(
            t, F_layers, F_all, X, truncation, shadow
        )
        gamma_product = truncation.gamma_product if truncation is not None else 1.0
        eigen, N, alpha = step2_solve(candidates, strategy, gamma_product)
        F_t, G_t, kept_F, kept_G = step3_split(
            candidates, eigen, N, epsilon, strategy, gamma_product
        )
        if strategy.kind == "vca":
            for poly in F_t:
                _rescale_unit_extent(poly)
        layers.append(
            DegreeLayer(
                t=t,
                candidates=candidates,
                normalization=N,
                eigen=eigen,
                F_t=F_t,
                G_t=G_t,
                pairs=pairs,
                ortho_W=W,
                kept_F=kept_F,
                kept_G=kept_G,
                scales_F=[p.scale for p in F_t],
                realized_alpha=alpha,
            )
        )
        F_all.extend(F_t)
        F_layers.append(F_t)
        G_all.extend(G_t)
        if truncation is not None and F_t:
            block = np.column_stack([f.coeffs.blocks[t] for f in F_t])
            indices, gamma_t = truncate_select(block, strategy.theta)
            truncation.record(t, indices, gamma_t)
            for poly in F_t + G_t:
                truncation.apply(poly.coeffs, t)
        if not F_t:
            termination_degree = t
            break

    return ConstructionResult(
        X=X,
        epsilon=float(epsilon),
        strategy=strategy,
        constant=constant,
        layers=layers,
        F=F_all,
        G=G_all,
        truncation=truncation,
        termination_degree=termination_degree,
    )


def evaluate_basis(
    result: ConstructionResult, Y: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Exactly evaluate the basis sets on fresh points by replaying the
    construction's combination tree (never through truncated coefficients).

    Returns (F(Y), G(Y)) evaluation matrices, columns in construction order.
    """
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[1] != result.n_variables:
        raise ValueError(
            f"points must have {result.n_variables} columns, got shape {Y.shape}"
        )
    m = len(Y)
    F_cols: list[np.ndarray] = [np.full(m, result.constant)]
    F_layer_cols: list[list[np.ndarray]] = [[F_cols[0]]]
    G_cols: list[np.ndarray] = []
    for layer in result.layers:
        t = layer.t
        if t == 1:
            pre = [Y[:, k] for k in range(result.n_variables)]
        else:
            pre = [
                F_layer_cols[1][ip] * F_layer_cols[t - 1][iq]
                for ip, iq in layer.pairs
            ]
        C = np.column_stack(pre) - np.column_stack(F_cols) @ layer.ortho_W
        B = C @ layer.eigen.eigenvectors
        new_F = [B[:, i] * sc for i, sc in zip(layer.kept_F, layer.scales_F)]
        F_cols.extend(new_F)
        F_layer_cols.append(new_F)
        G_cols.extend(B[:, i] for i in layer.kept_G)
    G_matrix = np.column_stack(G_cols) if G_cols else np.zeros((m, 0))
    return np.column_stack(F_cols), G_matrix


@dataclass(frozen=True)
class PolynomialReport:
    set_label: str          # "F" or "G"
    degree: int
    extent: float
    coeff_norm: float
    rescaled_extent: float
    spurious: bool


def rescale_report(result: ConstructionResult) -> list[PolynomialReport]:
    """Raw vs unit-coefficient-rescaled extents for every basis polynomial.

    A vanishing polynomial whose rescaled extent exceeds epsilon is flagged as
    spurious (it vanished only through small coefficients); a nonvanishing one
    whose rescaled extent drops to epsilon or below is the converse case.
    """
    rows = []
    for label, polys in (("F", result.F), ("G", result.G)):
        for poly in polys:
            cn = poly.coeff_norm()
            if cn == 0.0:
                raise ValueError("retained polynomial with zero coefficient norm")
            extent = poly.extent
            rescaled = extent / cn
            spurious = (
                rescaled > result.epsilon if label == "G"
                else rescaled <= result.epsilon
            )
            rows.append(
                PolynomialReport(label, poly.degree, extent, cn, rescaled, spurious)
            )
    return rows

"""Diagnostics aggregation, feature extraction, and the classification harness.

Feature vectors concatenate |g(x)| over the per-class vanishing sets, so a
point of class i shows near-zero entries on its own class block.  The
one-vs-rest logistic classifier is a small in-house gradient-descent solver
(backtracking line search, zero initialization): the classifier is deliberate
plumbing, not the interesting part, but it is deterministic and dependency
free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import ConstructionResult, Strategy, construct, evaluate_basis, rescale_report
from .datasets import LabeledDataset


@dataclass(frozen=True)
class StatTriple:
    min: float
    mean: float
    max: float

    @classmethod
    def of(cls, values: list[float]) -> "StatTriple":
        arr = np.asarray(values, dtype=float)
        return cls(float(arr.min()), float(arr.mean()), float(arr.max()))


@dataclass(frozen=True)
class DegreeStats:
    degree: int
    set_label: str            # "F" or "G"
    count: int
    coeff_norm: StatTriple
    extent: StatTriple
    rescaled_extent: StatTriple
    spurious_count: int
    tracked_block_length: int  # kept degree-block coefficients at this degree


@dataclass(frozen=True)
class DegreeDiagnostics:
    rows: list[DegreeStats]
    coefficient_length: int    # total tracked coefficient-vector length
    termination_degree: int

    def stats(self, degree: int, set_label: str) -> DegreeStats | None:
        for row in self.rows:
            if row.degree == degree and row.set_label == set_label:
                return row
        return None


def diagnose(result: ConstructionResult) -> DegreeDiagnostics:
    """Per-degree min/mean/max of coefficient norms and (rescaled) extents.

    Degrees with no polynomials in a set are simply absent from the rows.
    """
    reports = rescale_report(result)
    rows: list[DegreeStats] = []
    from .monomials import monomial_count

    def block_length(t: int) -> int:
        if result.truncation is not None:
            idx = result.truncation.indices(t)
            if idx is not None:
                return len(idx)
        return monomial_count(result.n_variables, t)

    max_degree = max(r.degree for r in reports)
    for t in range(max_degree + 1):
        for label in ("F", "G"):
            here = [r for r in reports if r.degree == t and r.set_label == label]
            if not here:
                continue
            rows.append(
                DegreeStats(
                    degree=t,
                    set_label=label,
                    count=len(here),
                    coeff_norm=StatTriple.of([r.coeff_norm for r in here]),
                    extent=StatTriple.of([r.extent for r in here]),
                    rescaled_extent=StatTriple.of([r.rescaled_extent for r in here]),
                    spurious_count=sum(r.spurious for r in here),
                    tracked_block_length=block_length(t),
                )
            )
    total_length = sum(block_length(t) for t in range(max_degree + 1))
    return DegreeDiagnostics(rows, total_length, result.termination_degree)


@dataclass
class FeatureExtractor:
    """Per-class vanishing sets used to turn points into feature vectors."""

    class_results: list[ConstructionResult]

    @property
    def feature_length(self) -> int:
        return sum(len(r.G) for r in self.class_results)

    def __post_init__(self):
        if self.feature_length == 0:
            raise ValueError("no vanishing polynomials; features would be empty")

    def transform(self, points: np.ndarray) -> np.ndarray:
        blocks = [np.abs(evaluate_basis(r, points)[1]) for r in self.class_results]
        return np.column_stack(blocks)


def extract_features(x: np.ndarray, extractor: FeatureExtractor) -> np.ndarray:
    """Feature vector of a single point."""
    x = np.asarray(x, dtype=float)
    return extractor.transform(x[None, :])[0]


@dataclass
class OvrLogisticModel:
    weights: np.ndarray   # classes x features
    biases: np.ndarray    # classes
    reg_strength: float


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss_grad(
    w: np.ndarray, features: np.ndarray, y: np.ndarray, reg: float
) -> tuple[float, np.ndarray]:
    """L2-regularized logistic loss and gradient; w[-1] is the unpenalized bias."""
    z = features @ w[:-1] + w[-1]
    # log(1 + exp(-y z)) computed stably
    margins = y * z
    loss = float(np.sum(np.logaddexp(0.0, -margins))) + 0.5 * reg * float(
        w[:-1] @ w[:-1]
    )
    p = _sigmoid(-margins)
    coef = -y * p
    grad = np.empty_like(w)
    grad[:-1] = features.T @ coef + reg * w[:-1]
    grad[-1] = float(coef.sum())
    return loss, grad


def _fit_binary(
    features: np.ndarray,
    y: np.ndarray,
    reg: float,
    max_iters: int,
    grad_tol: float = 1e-6,
) -> np.ndarray:
    """Gradient descent with backtracking; zero init, so fully deterministic."""
    w = np.zeros(features.shape[1] + 1)
    loss, grad = logistic_loss_grad(w, features, y, reg)
    step = 1.0
    for _ in range(max_iters):
        if np.linalg.norm(grad) <= grad_tol:
            break
        step = min(step * 2.0, 1e6)
        while True:
            trial = w - step * grad
            trial_loss, trial_grad = logistic_loss_grad(trial, features, y, reg)
            if trial_loss <= loss - 0.5 * step * float(grad @ grad) or step < 1e-18:
                break
            step *= 0.5
        w, loss, grad = trial, trial_loss, trial_grad
    return w


def train_ovr_logistic(
    features: np.ndarray,
    labels: np.ndarray,
    reg_strength: float = 1.0,
    max_iters: int = 500,
) -> OvrLogisticModel:
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if not np.all(np.isfinite(features)):
        raise ValueError("features contain non-finite entries")
    n_classes = int(labels.max()) + 1
    if n_classes < 2:
        raise ValueError("need at least two classes to train")
    weights = np.zeros((n_classes, features.shape[1]))
    biases = np.zeros(n_classes)
    for c in range(n_classes):
        y = np.where(labels == c, 1.0, -1.0)
        w = _fit_binary(features, y, reg_strength, max_iters)
        weights[c] = w[:-1]
        biases[c] = w[-1]
    return OvrLogisticModel(weights, biases, reg_strength)


def predict(model: OvrLogisticModel, features: np.ndarray) -> np.ndarray:
    scores = np.asarray(features, dtype=float) @ model.weights.T + model.biases
    return scores.argmax(axis=1)


def error_rate(predicted: np.ndarray, truth: np.ndarray) -> float:
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ValueError("prediction/truth length mismatch")
    return float(np.mean(predicted != truth))


def _stratified_folds(
    labels: np.ndarray, folds: int, seed: int
) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(labels), dtype=int)
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        rng.shuffle(members)
        if len(members) < folds:
            raise ValueError(
                f"class {c} has {len(members)} points, fewer than {folds} folds"
            )
        assignment[members] = np.arange(len(members)) % folds
    return [np.flatnonzero(assignment == f) for f in range(folds)]


def fit_class_bases(
    train: LabeledDataset,
    epsilon: float,
    strategy: Strategy,
    max_degree: int | None = None,
) -> FeatureExtractor:
    """One basis construction per class, on that class's training points only."""
    results = []
    for c in range(train.n_classes):
        pts = train.points[train.labels == c]
        if len(pts) == 0:
            raise ValueError(f"class {train.class_names[c]!r} has no training points")
        results.append(construct(pts, epsilon, strategy, max_degree=max_degree))
    return FeatureExtractor(results)


@dataclass(frozen=True)
class EpsilonSelection:
    best: float
    mean_errors: dict[float, float] = field(default_factory=dict)


def default_epsilon_grid(points: np.ndarray, size: int = 12) -> np.ndarray:
    """Log-spaced grid over [1e-3, 1] times the mean point norm."""
    scale = float(np.mean(np.linalg.norm(points, axis=1)))
    return np.geomspace(1e-3, 1.0, size) * scale


def cross_validate_epsilon(
    train: LabeledDataset,
    epsilon_grid,
    folds: int = 3,
    strategy: Strategy = Strategy(),
    seed: int = 0,
    max_degree: int | None = None,
    reg_strength: float = 1.0,
) -> EpsilonSelection:
    """Pick the epsilon minimizing mean fold-validation error.

    Ties go to the larger epsilon (fewer, lower-degree polynomials).
    """
    epsilon_grid = [float(e) for e in np.atleast_1d(epsilon_grid)]
    if not epsilon_grid:
        raise ValueError("epsilon grid is empty")
    if folds < 2:
        raise ValueError("need at least two folds")
    fold_indices = _stratified_folds(train.labels, folds, seed)
    mean_errors: dict[float, float] = {}
    for eps in epsilon_grid:
        errors = []
        for f, val_idx in enumerate(fold_indices):
            mask = np.ones(len(train.labels), dtype=bool)
            mask[val_idx] = False
            fold_train = LabeledDataset(
                train.points[mask], train.labels[mask], train.class_names
            )
            extractor = fit_class_bases(fold_train, eps, strategy, max_degree)
            model = train_ovr_logistic(
                extractor.transform(fold_train.points),
                fold_train.labels,
                reg_strength,
            )
            pred = predict(model, extractor.transform(train.points[val_idx]))
            errors.append(error_rate(pred, train.labels[val_idx]))
        mean_errors[eps] = float(np.mean(errors))
    best = max(
        sorted(mean_errors), key=lambda e: (-mean_errors[e], e)
    )
    return EpsilonSelection(best=best, mean_errors=mean_errors)

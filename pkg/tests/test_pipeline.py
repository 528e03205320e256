import numpy as np
import pytest

from vanish.basis import Strategy, construct
from vanish.datasets import LabeledDataset, sample_variety, perturb
from vanish.pipeline import (
    EpsilonSelection,
    FeatureExtractor,
    _stratified_folds,
    cross_validate_epsilon,
    default_epsilon_grid,
    diagnose,
    error_rate,
    extract_features,
    fit_class_bases,
    logistic_loss_grad,
    predict,
    train_ovr_logistic,
)


def two_circles_dataset(count=60, seed=0, noise=0.03):
    """Unit circle vs radius-2 circle, lightly perturbed."""
    rng = np.random.default_rng(seed)
    ang = rng.uniform(0, 2 * np.pi, count)
    radius = np.where(np.arange(count) % 2 == 0, 1.0, 2.0)
    pts = np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])
    pts += rng.normal(scale=noise, size=pts.shape)
    labels = (np.arange(count) % 2).astype(int)
    return LabeledDataset(pts, labels, ("inner", "outer"))


def test_diagnose_lengths_and_rows():
    X = perturb(sample_variety("D1", 50, seed=0), 0.02, seed=0).points
    r = construct(X, 0.3, Strategy(kind="coefficient"), max_degree=6)
    diag = diagnose(r)
    from vanish.monomials import monomial_count

    expected = sum(
        monomial_count(2, t) for t in range(max(row.degree for row in diag.rows) + 1)
    )
    assert diag.coefficient_length == expected
    assert diag.termination_degree == r.termination_degree
    for row in diag.rows:
        assert row.count >= 1
        assert row.coeff_norm.min <= row.coeff_norm.mean <= row.coeff_norm.max
        assert row.set_label in ("F", "G")
    assert diag.stats(0, "F").count == 1
    assert diag.stats(99, "F") is None


def test_diagnose_truncated_lengths_shrink():
    X = perturb(sample_variety("D2", 60, seed=1), 0.05, seed=1).points
    full = diagnose(construct(X, 0.8, Strategy(kind="coefficient"), max_degree=5))
    trunc = diagnose(
        construct(X, 0.8, Strategy(kind="coefficient", theta=0.5), max_degree=5)
    )
    assert trunc.coefficient_length <= full.coefficient_length


def test_features_near_zero_on_own_class():
    ds = two_circles_dataset()
    extractor = fit_class_bases(ds, 0.3, Strategy(kind="coefficient"), max_degree=4)
    feats = extractor.transform(ds.points)
    assert feats.shape == (60, extractor.feature_length)
    n0 = len(extractor.class_results[0].G)
    own = np.where(ds.labels[:, None] == 0, feats[:, :n0].max(axis=1, keepdims=True),
                   feats[:, n0:].max(axis=1, keepdims=True)).ravel()
    other = np.where(ds.labels[:, None] == 0, feats[:, n0:].max(axis=1, keepdims=True),
                     feats[:, :n0].max(axis=1, keepdims=True)).ravel()
    # a point's own-class vanishing polynomials evaluate small; the other
    # class's do not
    assert np.median(own) < 0.1 * np.median(other)


def test_extract_features_single_point():
    ds = two_circles_dataset()
    extractor = fit_class_bases(ds, 0.3, Strategy(kind="coefficient"), max_degree=4)
    one = extract_features(ds.points[3], extractor)
    both = extractor.transform(ds.points[:5])
    assert np.allclose(one, both[3])


def test_feature_extractor_rejects_empty():
    X = np.random.default_rng(0).normal(size=(10, 2))
    r = construct(X, 1e-12, Strategy(kind="coefficient"), max_degree=2)
    assert len(r.G) == 0
    with pytest.raises(ValueError):
        FeatureExtractor([r])


def test_logistic_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    features = rng.normal(size=(20, 3))
    y = np.where(rng.uniform(size=20) > 0.5, 1.0, -1.0)
    w = rng.normal(size=4)
    _, grad = logistic_loss_grad(w, features, y, reg=0.7)
    h = 1e-6
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        lp, _ = logistic_loss_grad(w + e, features, y, 0.7)
        lm, _ = logistic_loss_grad(w - e, features, y, 0.7)
        assert grad[j] == pytest.approx((lp - lm) / (2 * h), rel=1e-4, abs=1e-6)


def test_logistic_solver_separable_data():
    rng = np.random.default_rng(1)
    features = np.vstack([rng.normal(-3, 0.5, (30, 2)), rng.normal(3, 0.5, (30, 2))])
    labels = np.repeat([0, 1], 30)
    model = train_ovr_logistic(features, labels, reg_strength=0.1)
    assert error_rate(predict(model, features), labels) == 0.0


def test_train_validation():
    with pytest.raises(ValueError):
        train_ovr_logistic(np.ones((5, 2)), np.zeros(5, dtype=int))
    with pytest.raises(ValueError):
        train_ovr_logistic(np.full((4, 2), np.nan), np.array([0, 1, 0, 1]))


def test_error_rate():
    assert error_rate(np.array([0, 1, 1]), np.array([0, 1, 0])) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        error_rate(np.zeros(3), np.zeros(4))


def test_stratified_folds_balance():
    labels = np.repeat([0, 1, 2], 12)
    folds = _stratified_folds(labels, 3, seed=0)
    assert sorted(np.concatenate(folds)) == list(range(36))
    for f in folds:
        for c in range(3):
            assert np.sum(labels[f] == c) == 4
    with pytest.raises(ValueError):
        _stratified_folds(np.array([0, 0, 1]), 2, seed=0)


def test_end_to_end_classification_two_circles():
    train = two_circles_dataset(count=60, seed=0)
    test = two_circles_dataset(count=40, seed=9)
    extractor = fit_class_bases(train, 0.3, Strategy(kind="coefficient"), max_degree=4)
    model = train_ovr_logistic(extractor.transform(train.points), train.labels)
    err = error_rate(predict(model, extractor.transform(test.points)), test.labels)
    assert err <= 0.05


def test_fit_class_bases_requires_points_per_class():
    ds = LabeledDataset(np.ones((3, 2)), np.zeros(3, dtype=int), ("a", "b"))
    with pytest.raises(ValueError):
        fit_class_bases(ds, 0.1, Strategy())


def test_default_epsilon_grid_scaling():
    pts = 2.0 * np.eye(4)[:, :2]
    grid = default_epsilon_grid(pts, size=5)
    assert len(grid) == 5
    assert grid[0] == pytest.approx(1e-3 * 1.0)  # mean norm of rows = 1
    assert np.all(np.diff(grid) > 0)


def test_cross_validate_epsilon_selects_and_reports():
    ds = two_circles_dataset(count=48, seed=2)
    grid = [0.05, 0.3, 0.9]
    sel = cross_validate_epsilon(
        ds, grid, folds=3, strategy=Strategy(kind="coefficient"), max_degree=4
    )
    assert isinstance(sel, EpsilonSelection)
    assert sel.best in grid
    assert set(sel.mean_errors) == set(grid)
    assert sel.mean_errors[sel.best] == min(sel.mean_errors.values())


def test_cross_validate_tie_breaks_to_larger_epsilon():
    # both moderate epsilons classify perfectly -> the larger one wins
    ds = two_circles_dataset(count=48, seed=3, noise=0.01)
    sel = cross_validate_epsilon(
        ds, [0.2, 0.4], folds=3, strategy=Strategy(kind="coefficient"), max_degree=4
    )
    if sel.mean_errors[0.2] == sel.mean_errors[0.4]:
        assert sel.best == 0.4


def test_cross_validate_validation():
    ds = two_circles_dataset(count=20)
    with pytest.raises(ValueError):
        cross_validate_epsilon(ds, [], folds=3)
    with pytest.raises(ValueError):
        cross_validate_epsilon(ds, [0.1], folds=1)

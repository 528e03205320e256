"""Approximate vanishing ideal basis construction.

Degree-by-degree construction of nonvanishing / vanishing polynomial sets on
a finite point cloud, with three normalization strategies (identity,
coefficient, vca), exact coefficient tracking through sparse multiplication
shifts, optional coefficient truncation, spurious-vanishing diagnostics, and
a one-vs-rest classification harness built on the vanishing sets.
"""

from .basis import (
    ConstructionResult,
    Strategy,
    TrackedPolynomial,
    construct,
    evaluate_basis,
    rescale_report,
)
from .coeftrack import CoefficientVector, TruncationState
from .datasets import (
    LabeledDataset,
    PointCloud,
    center,
    load_csv,
    perturb,
    sample_dataset,
    split,
)
from .numerics import EigenDecomposition, gen_sym_eig, projection_residual, sym_eig
from .pipeline import (
    DegreeDiagnostics,
    FeatureExtractor,
    cross_validate_epsilon,
    diagnose,
    error_rate,
    extract_features,
    fit_class_bases,
    predict,
    train_ovr_logistic,
)
from .serialize import load_result, save_result

__all__ = [
    "CoefficientVector",
    "ConstructionResult",
    "DegreeDiagnostics",
    "EigenDecomposition",
    "FeatureExtractor",
    "LabeledDataset",
    "PointCloud",
    "Strategy",
    "TrackedPolynomial",
    "TruncationState",
    "center",
    "construct",
    "cross_validate_epsilon",
    "diagnose",
    "error_rate",
    "evaluate_basis",
    "extract_features",
    "fit_class_bases",
    "gen_sym_eig",
    "load_csv",
    "load_result",
    "perturb",
    "predict",
    "projection_residual",
    "rescale_report",
    "sample_dataset",
    "save_result",
    "split",
    "sym_eig",
    "train_ovr_logistic",
]

__version__ = "0.1.0"

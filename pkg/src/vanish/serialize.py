"""JSON round-tripping of construction results.

basis.json stores the replay data (product pairs, orthogonalization and
eigen combination matrices, kept indices, rescale factors) plus coefficient
blocks and extents, so a reloaded result can re-evaluate its basis anywhere.
Evaluation vectors themselves are not stored; they are reconstructed by
replaying the combination tree on the stored training points.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .basis import (
    ConstructionResult,
    DegreeLayer,
    Strategy,
    TrackedPolynomial,
    evaluate_basis,
)
from .coeftrack import CoefficientVector, TruncationState
from .numerics import EigenDecomposition

SCHEMA_VERSION = 1


def _poly_to_dict(poly: TrackedPolynomial) -> dict[str, Any]:
    out = {
        "degree": poly.degree,
        "sqrt_lambda": poly.sqrt_lambda,
        "scale": poly.scale,
        "extent": poly.extent,
        "coeff_blocks": [b.tolist() for b in poly.coeffs.blocks],
    }
    if poly.full_coeffs is not None:
        out["full_coeff_blocks"] = [b.tolist() for b in poly.full_coeffs.blocks]
    return out


def _poly_from_dict(n: int, d: dict[str, Any]) -> TrackedPolynomial:
    full = d.get("full_coeff_blocks")
    return TrackedPolynomial(
        values=np.zeros(0),  # filled in by replay after loading
        coeffs=CoefficientVector(n, [np.asarray(b) for b in d["coeff_blocks"]]),
        degree=int(d["degree"]),
        sqrt_lambda=d["sqrt_lambda"],
        scale=float(d["scale"]),
        full_coeffs=CoefficientVector(n, [np.asarray(b) for b in full])
        if full is not None
        else None,
    )


def result_to_dict(result: ConstructionResult) -> dict[str, Any]:
    trunc = None
    if result.truncation is not None:
        trunc = {
            "theta": result.truncation.theta,
            "selected": {
                str(d): idx.tolist() for d, idx in result.truncation.selected.items()
            },
            "gamma": {str(d): g for d, g in result.truncation.gamma.items()},
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "truncation": trunc,
        "epsilon": result.epsilon,
        "strategy": {
            "kind": result.strategy.kind,
            "theta": result.strategy.theta,
            "alpha_multiplier": result.strategy.alpha_multiplier,
        },
        "constant": result.constant,
        "termination_degree": result.termination_degree,
        "points": result.X.tolist(),
        "layers": [
            {
                "t": layer.t,
                "pairs": layer.pairs,
                "ortho_W": layer.ortho_W.tolist(),
                "eigenvalues": layer.eigen.eigenvalues.tolist(),
                "eigenvectors": layer.eigen.eigenvectors.tolist(),
                "kept_F": layer.kept_F,
                "kept_G": layer.kept_G,
                "scales_F": layer.scales_F,
                "realized_alpha": layer.realized_alpha,
                "F": [_poly_to_dict(p) for p in layer.F_t],
                "G": [_poly_to_dict(p) for p in layer.G_t],
            }
            for layer in result.layers
        ],
        "seed_polynomial": _poly_to_dict(result.F[0]),
    }


def result_from_dict(data: dict[str, Any]) -> ConstructionResult:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {data.get('schema_version')!r}")
    X = np.asarray(data["points"], dtype=float)
    n = X.shape[1]
    strategy = Strategy(**data["strategy"])
    truncation = None
    raw_trunc = data.get("truncation")
    if raw_trunc is not None:
        truncation = TruncationState(raw_trunc["theta"])
        for d, idx in raw_trunc["selected"].items():
            truncation.record(int(d), np.asarray(idx, dtype=int), raw_trunc["gamma"][d])

    seed = _poly_from_dict(n, data["seed_polynomial"])
    layers: list[DegreeLayer] = []
    F_all = [seed]
    G_all: list[TrackedPolynomial] = []
    for raw in data["layers"]:
        F_t = [_poly_from_dict(n, p) for p in raw["F"]]
        G_t = [_poly_from_dict(n, p) for p in raw["G"]]
        layers.append(
            DegreeLayer(
                t=int(raw["t"]),
                candidates=[],
                normalization=np.zeros((0, 0)),
                eigen=EigenDecomposition(
                    np.asarray(raw["eigenvalues"], dtype=float),
                    np.asarray(raw["eigenvectors"], dtype=float),
                ),
                F_t=F_t,
                G_t=G_t,
                pairs=[tuple(p) for p in raw["pairs"]] if raw["pairs"] else None,
                ortho_W=np.asarray(raw["ortho_W"], dtype=float),
                kept_F=list(raw["kept_F"]),
                kept_G=list(raw["kept_G"]),
                scales_F=list(raw["scales_F"]),
                realized_alpha=float(raw["realized_alpha"]),
            )
        )
        F_all.extend(F_t)
        G_all.extend(G_t)
    result = ConstructionResult(
        X=X,
        epsilon=float(data["epsilon"]),
        strategy=strategy,
        constant=float(data["constant"]),
        layers=layers,
        F=F_all,
        G=G_all,
        truncation=truncation,
        termination_degree=int(data["termination_degree"]),
    )
    # rebuild evaluation vectors by replaying on the training points
    F_mat, G_mat = evaluate_basis(result, X)
    for j, poly in enumerate(result.F):
        poly.values = F_mat[:, j]
    for j, poly in enumerate(result.G):
        poly.values = G_mat[:, j]
    return result


def save_result(result: ConstructionResult, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(result_to_dict(result), fh)


def load_result(path: str) -> ConstructionResult:
    with open(path, encoding="utf-8") as fh:
        return result_from_dict(json.load(fh))

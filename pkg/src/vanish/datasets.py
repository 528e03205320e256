"""Synthetic algebraic-variety samplers, preprocessing, and CSV ingestion.

Builtin varieties:
  D1 - double concentric circles, radii 1 and 2,
  D2 - triple concentric ellipses, radii (sqrt2, 1/sqrt2) scaled by 1, 2, 3,
       rotated by 3*pi/4,
  D3 - the curve cut out by {x*z - y^2, x^3 - y*z}, sampled through the real
       parameterization (t, |t|^{4/3}, sign(t)*|t|^{5/3}),
  D2plus / D3plus - D2 / D3 with extra exact linear-combination columns.

Sampling is seeded and deterministic; every point satisfies its defining
equations to ~1e-12 before any perturbation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

D2_PLUS_WEIGHTS = (0.0, 0.2, 0.5, 0.8, 1.0)
D3_PLUS_WEIGHTS = tuple((k, l) for k in (0.2, 0.5, 0.8) for l in (0.2, 0.5, 0.8))


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    provenance: str

    def __post_init__(self):
        if not np.all(np.isfinite(self.points)):
            raise ValueError("points must be finite")


@dataclass(frozen=True)
class LabeledDataset:
    points: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, ...]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


def _circles(count: int, rng: np.random.Generator) -> np.ndarray:
    angles = rng.uniform(0.0, 2.0 * np.pi, size=count)
    radii = np.array([1.0, 2.0])[np.arange(count) % 2]
    return np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])


def _ellipses(count: int, rng: np.random.Generator) -> np.ndarray:
    angles = rng.uniform(0.0, 2.0 * np.pi, size=count)
    scale = (np.arange(count) % 3) + 1.0
    a = scale * np.sqrt(2.0)
    b = scale / np.sqrt(2.0)
    xy = np.column_stack([a * np.cos(angles), b * np.sin(angles)])
    rot = 3.0 * np.pi / 4.0
    R = np.array([[np.cos(rot), -np.sin(rot)], [np.sin(rot), np.cos(rot)]])
    return xy @ R.T


def _space_curve(count: int, rng: np.random.Generator) -> np.ndarray:
    t = rng.uniform(-1.0, 1.0, size=count)
    x = t
    y = np.abs(t) ** (4.0 / 3.0)
    z = np.sign(t) * np.abs(t) ** (5.0 / 3.0)
    return np.column_stack([x, y, z])


_SAMPLERS = {"D1": _circles, "D2": _ellipses, "D3": _space_curve}


def sample_variety(name: str, count: int, seed: int = 0) -> PointCloud:
    """Sample `count` points from a builtin variety, deterministic per seed."""
    if name not in _SAMPLERS:
        raise ValueError(f"unknown variety {name!r}; choose from {sorted(_SAMPLERS)}")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    points = _SAMPLERS[name](count, rng)
    return PointCloud(points, f"{name}(count={count}, seed={seed})")


def augment(name: str, base: PointCloud) -> PointCloud:
    """Append the exact linear-combination columns of D2plus / D3plus."""
    pts = base.points
    if name == "D2plus":
        if pts.shape[1] != 2:
            raise ValueError("D2plus expects a 2-column base cloud")
        extra = [k * pts[:, 0] + (1.0 - k) * pts[:, 1] for k in D2_PLUS_WEIGHTS]
    elif name == "D3plus":
        if pts.shape[1] != 3:
            raise ValueError("D3plus expects a 3-column base cloud")
        extra = [
            k * pts[:, 0] + l * pts[:, 1] + (1.0 - k - l) * pts[:, 2]
            for k, l in D3_PLUS_WEIGHTS
        ]
    else:
        raise ValueError(f"unknown augmentation {name!r}")
    return PointCloud(
        np.column_stack([pts, *extra]), f"{name}({base.provenance})"
    )


def sample_dataset(name: str, count: int, seed: int = 0) -> PointCloud:
    """Convenience front end: base varieties plus D2plus / D3plus."""
    if name in _SAMPLERS:
        return sample_variety(name, count, seed)
    if name == "D2plus":
        return augment(name, sample_variety("D2", count, seed))
    if name == "D3plus":
        return augment(name, sample_variety("D3", count, seed))
    raise ValueError(f"unknown dataset {name!r}")


def perturb(cloud: PointCloud, ratio: float, seed: int = 0) -> PointCloud:
    """Add zero-mean Gaussian noise with std = ratio * mean(|entries|)."""
    if ratio < 0:
        raise ValueError("noise ratio must be nonnegative")
    if ratio == 0:
        return cloud
    rng = np.random.default_rng(seed)
    sigma = ratio * float(np.mean(np.abs(cloud.points)))
    noisy = cloud.points + rng.normal(0.0, sigma, size=cloud.points.shape)
    return PointCloud(noisy, f"{cloud.provenance} + noise({ratio}, seed={seed})")


def center(cloud: PointCloud) -> PointCloud:
    """Subtract per-column means."""
    return PointCloud(
        cloud.points - cloud.points.mean(axis=0), f"centered({cloud.provenance})"
    )


def normalize_mean_norm(cloud: PointCloud) -> PointCloud:
    """Divide all entries so the mean point norm becomes one."""
    mean_norm = float(np.mean(np.linalg.norm(cloud.points, axis=1)))
    if mean_norm == 0.0:
        raise ValueError("cannot normalize: all points at the origin")
    return PointCloud(
        cloud.points / mean_norm, f"unit-mean-norm({cloud.provenance})"
    )


def load_csv(
    path: str,
    label_column: int | str = -1,
    delimiter: str = ",",
    has_header: bool | None = None,
) -> LabeledDataset:
    """Read a labeled point set from a delimited text file.

    label_column may be an index or (with a header) a column name.  With
    has_header=None the first row is treated as a header when any of its
    fields fails to parse as a number.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh, delimiter=delimiter) if row]
    if not rows:
        raise ValueError(f"{path}: empty file")

    def numeric(field: str) -> bool:
        try:
            float(field)
            return True
        except ValueError:
            return False

    header: list[str] | None = None
    if has_header is None:
        has_header = not all(numeric(f) for f in rows[0])
    if has_header:
        header = rows[0]
        rows = rows[1:]
    if isinstance(label_column, str):
        if header is None:
            raise ValueError("label column given by name but the file has no header")
        if label_column not in header:
            raise ValueError(f"label column {label_column!r} not found in header")
        label_idx = header.index(label_column)
    else:
        label_idx = label_column

    features = []
    labels = []
    width = len(rows[0])
    for line_no, row in enumerate(rows, start=2 if has_header else 1):
        if len(row) != width:
            raise ValueError(f"{path}:{line_no}: expected {width} fields, got {len(row)}")
        idx = label_idx if label_idx >= 0 else width + label_idx
        if not 0 <= idx < width:
            raise ValueError(f"label column {label_column} out of range for {width} fields")
        try:
            features.append([float(f) for j, f in enumerate(row) if j != idx])
        except ValueError as exc:
            raise ValueError(f"{path}:{line_no}: {exc}") from None
        labels.append(row[idx].strip())

    class_names = tuple(sorted(set(labels)))
    label_map = {name: i for i, name in enumerate(class_names)}
    return LabeledDataset(
        points=np.asarray(features, dtype=float),
        labels=np.array([label_map[l] for l in labels], dtype=int),
        class_names=class_names,
    )


def split(
    dataset: LabeledDataset,
    train_fraction: float,
    seed: int = 0,
    stratified: bool = True,
) -> tuple[LabeledDataset, LabeledDataset]:
    """Deterministic (stratified) train/test split."""
    if not 0.0 < train_fraction <= 1.0:
        raise ValueError("train_fraction must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    n = len(dataset.labels)
    train_idx: list[int] = []
    if stratified:
        for c in range(dataset.n_classes):
            members = np.flatnonzero(dataset.labels == c)
            rng.shuffle(members)
            n_train = int(round(train_fraction * len(members)))
            if n_train == 0 and len(members) > 0:
                raise ValueError(
                    f"class {dataset.class_names[c]!r} would lose all training points"
                )
            train_idx.extend(members[:n_train])
    else:
        order = rng.permutation(n)
        train_idx = list(order[: int(round(train_fraction * n))])
    mask = np.zeros(n, dtype=bool)
    mask[train_idx] = True

    def subset(keep: np.ndarray) -> LabeledDataset:
        return LabeledDataset(
            dataset.points[keep], dataset.labels[keep], dataset.class_names
        )

    return subset(mask), subset(~mask)

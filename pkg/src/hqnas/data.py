"""Dataset loading, stratified splitting and standardization.

CSV schema: UTF-8, comma separated, a header row ``f0,f1,...,label`` with
numeric feature columns and a final integer ``label`` column.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    name: str
    features: np.ndarray
    labels: np.ndarray
    num_classes: int

    def __post_init__(self):
        x, y = self.features, self.labels
        if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0]:
            raise DataError(f"bad shapes: features {x.shape}, labels {y.shape}")
        if not np.all(np.isfinite(x)):
            raise DataError("features contain non-finite values")
        counts = np.bincount(y, minlength=self.num_classes)
        if len(counts) != self.num_classes or np.any(counts == 0):
            raise DataError(f"every class in 0..{self.num_classes - 1} needs a sample")

    @property
    def num_samples(self) -> int:
        return self.features.shape[0]

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    def digest(self) -> str:
        """Content hash, used as part of evaluation cache keys."""
        h = hashlib.sha1()
        h.update(np.ascontiguousarray(self.features, dtype=float).tobytes())
        h.update(np.ascontiguousarray(self.labels, dtype=np.int64).tobytes())
        return f"{self.name}:{h.hexdigest()[:16]}"


@dataclass(frozen=True)
class DatasetSplit:
    train: np.ndarray
    test: np.ndarray
    mean: np.ndarray
    std: np.ndarray


def load_csv(path, name: str | None = None) -> Dataset:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        return _parse(csv.reader(fh), name or path.stem, str(path))


def load_iris() -> Dataset:
    """The bundled Iris fixture (150 samples, 4 features, 3 classes)."""
    ref = resources.files("hqnas") / "datasets" / "iris.csv"
    with ref.open("r", encoding="utf-8", newline="") as fh:
        return _parse(csv.reader(fh), "iris", "iris.csv")


def _parse(reader, name: str, where: str) -> Dataset:
    try:
        header = next(reader)
    except StopIteration:
        raise DataError(f"{where}: empty file") from None
    header = [h.strip() for h in header]
    if len(header) < 2 or header[-1] != "label":
        raise DataError(f"{where}: header must end with a 'label' column, got {header}")
    width = len(header)
    rows, raw_labels = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != width:
            raise DataError(f"{where}: row {lineno} has {len(row)} fields, expected {width}")
        try:
            rows.append([float(c) for c in row[:-1]])
        except ValueError:
            raise DataError(f"{where}: row {lineno} has a non-numeric feature") from None
        try:
            raw_labels.append(int(row[-1].strip()))
        except ValueError:
            raise DataError(f"{where}: row {lineno} has a non-integer label {row[-1]!r}") from None
    if not rows:
        raise DataError(f"{where}: no data rows")
    values = sorted(set(raw_labels))
    remap = {v: i for i, v in enumerate(values)}
    labels = np.array([remap[v] for v in raw_labels], dtype=np.int64)
    return Dataset(name, np.array(rows, dtype=float), labels, len(values))


def save_csv(dataset: Dataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([f"f{i}" for i in range(dataset.num_features)] + ["label"])
        for x, y in zip(dataset.features, dataset.labels):
            w.writerow([repr(float(v)) for v in x] + [int(y)])


def stratified_split(dataset: Dataset, test_fraction: float = 0.2, seed: int = 0) -> DatasetSplit:
    """Per-class shuffled split; feature statistics come from the train part."""
    if not 0 < test_fraction < 1:
        raise DataError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for c in range(dataset.num_classes):
        idx = np.flatnonzero(dataset.labels == c)
        if idx.size < 2:
            raise DataError(f"class {c} has fewer than 2 samples; cannot split")
        idx = rng.permutation(idx)
        n_test = int(round(test_fraction * idx.size))
        n_test = min(max(n_test, 1), idx.size - 1)
        test.append(idx[:n_test])
        train.append(idx[n_test:])
    train_idx = np.sort(np.concatenate(train))
    test_idx = np.sort(np.concatenate(test))
    x = dataset.features[train_idx]
    return DatasetSplit(train_idx, test_idx, x.mean(axis=0), x.std(axis=0))


def standardize(dataset: Dataset, split: DatasetSplit) -> tuple[np.ndarray, np.ndarray]:
    """Z-score both parts with train statistics; constant features become 0."""
    std = np.where(split.std > 0, split.std, 1.0)
    scale = np.where(split.std > 0, 1.0 / std, 0.0)
    xtr = (dataset.features[split.train] - split.mean) * scale
    xte = (dataset.features[split.test] - split.mean) * scale
    return xtr, xte


def synth_blobs(
    num_classes: int,
    samples_per_class: int,
    num_features: int,
    separation: float,
    seed: int = 0,
) -> Dataset:
    """Gaussian clusters with unit spread around random centers scaled by ``separation``."""
    if min(num_classes, samples_per_class, num_features) <= 0:
        raise DataError("num_classes, samples_per_class and num_features must be positive")
    rng = np.random.default_rng(seed)
    centers = rng.normal(size=(num_classes, num_features)) * separation
    x = np.concatenate(
        [c + rng.normal(size=(samples_per_class, num_features)) for c in centers]
    )
    y = np.repeat(np.arange(num_classes), samples_per_class)
    return Dataset(f"blobs{num_classes}x{samples_per_class}s{seed}", x, y, num_classes)

"""Gesture labels, the labeled dataset container, file I/O and splits.

The eight gesture classes and their default per-class sample counts mirror
the bartender vocabulary this package is built around. Because the original
sensor recordings are not distributed, a seeded synthetic generator produces
datasets of the same shape from editable gesture templates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import IntEnum
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .frames import (
    FINGER_ORDER,
    HandFrame,
    HandObservation,
    InvalidFrameError,
    Point2D,
    extract_features,
    frame_from_dict,
)
from .validation import N_FEATURES, check_feature_matrix, check_labels


class DatasetError(ValueError):
    """Raised for unparsable or invalid dataset files and parameters."""


class GestureLabel(IntEnum):
    """The eight order instructions, with stable integer codes 1-8."""

    Init = 1
    Alcohol = 2
    NonAlcohol = 3
    Food = 4
    Undo = 5
    Checkout = 6
    Cash = 7
    Credit = 8


ITEM_GESTURES = (GestureLabel.Alcohol, GestureLabel.NonAlcohol, GestureLabel.Food)
PAYMENT_GESTURES = (GestureLabel.Cash, GestureLabel.Credit)

# Default per-class sample counts of the reference dataset (total 528).
DEFAULT_CLASS_COUNTS: Dict[GestureLabel, int] = {
    GestureLabel.Init: 66,
    GestureLabel.Alcohol: 63,
    GestureLabel.NonAlcohol: 63,
    GestureLabel.Food: 65,
    GestureLabel.Undo: 64,
    GestureLabel.Checkout: 64,
    GestureLabel.Cash: 63,
    GestureLabel.Credit: 80,
}

_LABEL_ALIASES = {
    "".join(ch for ch in name.lower() if ch.isalnum()): member
    for name, member in GestureLabel.__members__.items()
}


def parse_label(text: str) -> GestureLabel:
    """Parse a gesture name, tolerating case and punctuation ('Non-Alcohol')."""
    key = "".join(ch for ch in str(text).lower() if ch.isalnum())
    try:
        return _LABEL_ALIASES[key]
    except KeyError:
        raise DatasetError(f"unknown gesture label: {text!r}") from None


class LabeledDataset:
    """Feature vectors paired with gesture labels.

    Attributes:
        X: (n_samples, 10) float array, values in [0, 1].
        y: (n_samples,) int array of GestureLabel codes.
        provenance: free-text source tag.
    """

    def __init__(self, X, y, provenance: str = ""):
        X = np.asarray(X, dtype=float)
        if X.size == 0:
            X = X.reshape(0, N_FEATURES)
        X = check_feature_matrix(X) if len(X) else X
        y = check_labels(y, n_samples=len(X))
        for code in np.unique(y):
            GestureLabel(int(code))  # raises ValueError on unknown codes
        self.X = X
        self.y = y
        self.provenance = provenance

    def __len__(self) -> int:
        return len(self.X)

    def class_counts(self) -> Dict[GestureLabel, int]:
        counts = {label: 0 for label in GestureLabel}
        for code in self.y:
            counts[GestureLabel(int(code))] += 1
        return counts

    def subset(self, indices, provenance: Optional[str] = None) -> "LabeledDataset":
        indices = np.asarray(indices, dtype=int)
        return LabeledDataset(
            self.X[indices], self.y[indices],
            provenance=self.provenance if provenance is None else provenance,
        )


@dataclass(frozen=True)
class GestureTemplate:
    """Canonical noise-free feature vector defining one gesture class."""

    label: GestureLabel
    extension: Tuple[float, ...]

    def __post_init__(self):
        ext = tuple(float(v) for v in self.extension)
        if len(ext) != N_FEATURES:
            raise DatasetError(
                f"template for {self.label.name} must have {N_FEATURES} values"
            )
        if any(not (0.0 <= v <= 1.0) or not math.isfinite(v) for v in ext):
            raise DatasetError(f"template for {self.label.name} has values outside [0, 1]")
        object.__setattr__(self, "extension", ext)


def load_templates(path) -> List[GestureTemplate]:
    """Load gesture templates from a JSON array of {label, extension}."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise DatasetError("template file must contain a JSON array")
    return [
        GestureTemplate(label=parse_label(item["label"]), extension=tuple(item["extension"]))
        for item in raw
    ]


def default_templates() -> List[GestureTemplate]:
    """The templates shipped with the package (editable data, not code)."""
    ref = resources.files("gesture_bartender").joinpath("data/templates.json")
    raw = json.loads(ref.read_text(encoding="utf-8"))
    return [
        GestureTemplate(label=parse_label(item["label"]), extension=tuple(item["extension"]))
        for item in raw
    ]


# --- file I/O ----------------------------------------------------------------

CSV_HEADER = "label," + ",".join(f"f{i}" for i in range(N_FEATURES))


def save_dataset_csv(dataset: LabeledDataset, path) -> None:
    """Write the feature CSV (`label,f0..f9`), 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for xi, yi in zip(dataset.X, dataset.y):
            values = ",".join(f"{v:.17g}" for v in xi)
            fh.write(f"{GestureLabel(int(yi)).name},{values}\n")


def _load_csv(path) -> LabeledDataset:
    feats: List[List[float]] = []
    labels: List[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    if not lines:
        raise DatasetError(f"{path}: empty file")
    start = 1 if lines[0].strip().lower().startswith("label") else 0
    for lineno in range(start, len(lines)):
        line = lines[lineno].strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 1 + N_FEATURES:
            raise DatasetError(
                f"{path}: line {lineno + 1}: expected {1 + N_FEATURES} fields, got {len(parts)}"
            )
        try:
            label = parse_label(parts[0])
        except DatasetError as exc:
            raise DatasetError(f"{path}: line {lineno + 1}: {exc}") from None
        try:
            row = [float(v) for v in parts[1:]]
        except ValueError as exc:
            raise DatasetError(f"{path}: line {lineno + 1}: {exc}") from None
        for v in row:
            if not math.isfinite(v) or v < 0.0 or v > 1.0:
                raise DatasetError(
                    f"{path}: line {lineno + 1}: feature value {v} outside [0, 1]"
                )
        feats.append(row)
        labels.append(int(label))
    return LabeledDataset(np.array(feats), np.array(labels), provenance=str(path))


def _load_frames_jsonl(path) -> LabeledDataset:
    feats: List[np.ndarray] = []
    labels: List[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path}: line {lineno}: invalid JSON ({exc})") from None
            try:
                frame, label = frame_from_dict(obj)
            except InvalidFrameError as exc:
                raise DatasetError(f"{path}: line {lineno}: {exc}") from None
            if label is None:
                raise DatasetError(f"{path}: line {lineno}: frame has no label")
            try:
                parsed = parse_label(label)
            except DatasetError as exc:
                raise DatasetError(f"{path}: line {lineno}: {exc}") from None
            feats.append(extract_features(frame))
            labels.append(int(parsed))
    if not feats:
        raise DatasetError(f"{path}: no frames found")
    return LabeledDataset(np.array(feats), np.array(labels), provenance=str(path))


def load_dataset(path) -> LabeledDataset:
    """Load a dataset from a feature CSV or a labeled frame JSONL file."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"no such file: {path}")
    suffix = path.suffix.lower()
    if suffix in (".jsonl", ".ndjson"):
        return _load_frames_jsonl(path)
    if suffix == ".csv":
        return _load_csv(path)
    # No recognized extension: sniff the first non-blank character.
    with open(path, "r", encoding="utf-8") as fh:
        head = fh.read(512).lstrip()
    return _load_frames_jsonl(path) if head.startswith("{") else _load_csv(path)


# --- synthetic generation ----------------------------------------------------

_PALM_RANGE_X = (-150.0, 150.0)
_PALM_RANGE_Y = (50.0, 300.0)
_HAND_SCALE_RANGE = (40.0, 120.0)


def _synth_hand(values: np.ndarray, rng: np.random.Generator) -> HandObservation:
    """Place fingertips so each fingertip-to-palm distance is value x scale."""
    palm = Point2D(rng.uniform(*_PALM_RANGE_X), rng.uniform(*_PALM_RANGE_Y))
    scale = rng.uniform(*_HAND_SCALE_RANGE)
    angles = rng.uniform(0.0, 2.0 * math.pi, size=len(FINGER_ORDER))
    tips = tuple(
        Point2D(palm.x + v * scale * math.cos(a), palm.y + v * scale * math.sin(a))
        for v, a in zip(values, angles)
    )
    return HandObservation(palm_center=palm, fingertips=tips)


def generate_synthetic(
    seed: int,
    counts: Optional[Dict[GestureLabel, int]] = None,
    noise_sigma: float = 0.05,
    templates: Optional[Sequence[GestureTemplate]] = None,
) -> Tuple[LabeledDataset, List[Tuple[HandFrame, str]]]:
    """Generate a labeled dataset plus matching raw frames.

    Each sample perturbs its class template with iid zero-mean Gaussian noise
    (clamped to [0, 1]); the emitted frame places every fingertip at distance
    (perturbed value x random hand scale) from a random palm center, so
    frame-level ingestion exercises the full distance/normalization pipeline.
    Fully deterministic for a fixed seed.
    """
    if counts is None:
        counts = dict(DEFAULT_CLASS_COUNTS)
    if templates is None:
        templates = default_templates()
    if not (0.0 <= noise_sigma < 0.5):
        raise DatasetError(f"noise_sigma must be in [0, 0.5), got {noise_sigma}")
    by_label = {t.label: t for t in templates}
    for label, n in counts.items():
        if n <= 0:
            raise DatasetError(f"count for {GestureLabel(label).name} must be positive")
        if GestureLabel(label) not in by_label:
            raise DatasetError(f"missing template for requested label {GestureLabel(label).name}")

    rng = np.random.default_rng(seed)
    feats: List[np.ndarray] = []
    labels: List[int] = []
    frames: List[Tuple[HandFrame, str]] = []
    for label in sorted(counts, key=int):
        template = np.array(by_label[GestureLabel(label)].extension)
        for _ in range(counts[label]):
            noise = rng.normal(0.0, noise_sigma, size=N_FEATURES) if noise_sigma > 0 else 0.0
            values = np.clip(template + noise, 0.0, 1.0)
            feats.append(values)
            frame = HandFrame(
                left=_synth_hand(values[:5], rng), right=_synth_hand(values[5:], rng)
            )
            frames.append((frame, GestureLabel(label).name))
            labels.append(int(label))
    dataset = LabeledDataset(
        np.array(feats), np.array(labels),
        provenance=f"synthetic(seed={seed}, sigma={noise_sigma})",
    )
    return dataset, frames


# --- splitting ---------------------------------------------------------------


def _round_half_up(value: float) -> int:
    # Tiny epsilon absorbs float dust in count * fraction (e.g. 65 * 0.3).
    return int(math.floor(value + 0.5 + 1e-9))


def stratified_split(
    dataset: LabeledDataset, test_fraction: float, seed: int = 42
) -> Tuple[LabeledDataset, LabeledDataset]:
    """Deterministic per-class split; round(count x fraction) samples go to test."""
    if not (0.0 < test_fraction < 1.0):
        raise DatasetError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    train_idx: List[int] = []
    test_idx: List[int] = []
    for label in GestureLabel:
        cls_idx = np.flatnonzero(dataset.y == int(label))
        if cls_idx.size == 0:
            continue
        if cls_idx.size < 2:
            raise DatasetError(f"class {label.name} too small to split ({cls_idx.size} sample)")
        order = rng.permutation(cls_idx.size)
        n_test = _round_half_up(cls_idx.size * test_fraction)
        shuffled = cls_idx[order]
        test_idx.extend(shuffled[:n_test].tolist())
        train_idx.extend(shuffled[n_test:].tolist())
    train_idx.sort()
    test_idx.sort()
    return (
        dataset.subset(train_idx, provenance=f"{dataset.provenance}[train]"),
        dataset.subset(test_idx, provenance=f"{dataset.provenance}[test]"),
    )


def kfold_partitions(
    dataset: LabeledDataset, k: int, seed: int = 42
) -> List[Tuple[LabeledDataset, LabeledDataset]]:
    """Shuffled k-fold partition; fold sizes differ by at most one."""
    n = len(dataset)
    if k < 2:
        raise DatasetError(f"k must be >= 2, got {k}")
    if k > n:
        raise DatasetError(f"k={k} larger than dataset ({n} samples)")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    base, extra = divmod(n, k)
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        test = np.sort(order[start:start + size])
        train = np.sort(np.concatenate([order[:start], order[start + size:]]))
        folds.append(
            (
                dataset.subset(train, provenance=f"{dataset.provenance}[fold{i}-train]"),
                dataset.subset(test, provenance=f"{dataset.provenance}[fold{i}-test]"),
            )
        )
        start += size
    return folds


def stratified_subset(dataset: LabeledDataset, n: int, seed: int = 42) -> LabeledDataset:
    """Draw a class-proportional subset of size n (largest-remainder rounding)."""
    total = len(dataset)
    if n > total:
        raise DatasetError(f"subset size {n} exceeds dataset size {total}")
    rng = np.random.default_rng(seed)
    labels = [label for label in GestureLabel if np.any(dataset.y == int(label))]
    quotas = {label: np.count_nonzero(dataset.y == int(label)) * n / total for label in labels}
    alloc = {label: int(math.floor(quotas[label])) for label in labels}
    remaining = n - sum(alloc.values())
    by_remainder = sorted(labels, key=lambda l: (-(quotas[l] - alloc[l]), int(l)))
    for label in by_remainder[:remaining]:
        alloc[label] += 1
    picked: List[int] = []
    for label in labels:
        cls_idx = np.flatnonzero(dataset.y == int(label))
        take = min(alloc[label], cls_idx.size)
        choice = rng.choice(cls_idx.size, size=take, replace=False)
        picked.extend(cls_idx[choice].tolist())
    picked.sort()
    return dataset.subset(picked, provenance=f"{dataset.provenance}[n={n}]")

"""The three gesture classifiers behind one sklearn-style train/predict surface.

All of them work on validated 10-value feature vectors and the eight gesture
classes. The nearest-neighbor model stores its training points verbatim; the
two parametric models train with full-batch gradient descent on cross-entropy
from seeded uniform initial weights, so runs are reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .dataset import GestureLabel, LabeledDataset
from .validation import N_FEATURES, check_feature_matrix, check_feature_vector, check_labels

N_CLASSES = len(GestureLabel)
HIDDEN_UNITS = 10
INIT_SCALE = 0.1  # parameters start uniform in [-INIT_SCALE, INIT_SCALE]
MODEL_FORMAT_VERSION = "1"


class ModelKind(str, Enum):
    KNN = "Knn"
    MLP = "Mlp"
    MLR = "Mlr"

    @classmethod
    def from_string(cls, text: str) -> "ModelKind":
        key = str(text).strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown model kind: {text!r} (expected knn, mlp or mlr)")


class ModelFormatError(ValueError):
    """Raised for unreadable or malformed model files."""


class ModelVersionError(ModelFormatError):
    """Raised when a model file's format version is not supported."""


@dataclass(frozen=True)
class Prediction:
    """A classified gesture with per-class scores.

    ``scores[i]`` belongs to the gesture with code ``i + 1``. For the
    parametric models the scores are softmax probabilities; for the
    nearest-neighbor model they are neighbor-vote fractions.
    """

    label: GestureLabel
    scores: Tuple[float, ...]

    def score_map(self) -> Dict[str, float]:
        return {GestureLabel(i + 1).name: s for i, s in enumerate(self.scores)}

    def top_score(self) -> float:
        return max(self.scores)


def _check_codes(y: np.ndarray) -> np.ndarray:
    if y.size and (y.min() < 1 or y.max() > N_CLASSES):
        raise ValueError(f"labels must be gesture codes 1..{N_CLASSES}")
    return y


def _one_hot(y: np.ndarray) -> np.ndarray:
    Y = np.zeros((len(y), N_CLASSES))
    Y[np.arange(len(y)), y - 1] = 1.0
    return Y


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def softmax(z: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction for numerical stability."""
    z = np.asarray(z, dtype=float)
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _cross_entropy(logits: np.ndarray, Y: np.ndarray) -> float:
    # mean over samples of logsumexp(z) - z[target]
    m = logits.max(axis=1, keepdims=True)
    lse = m[:, 0] + np.log(np.exp(logits - m).sum(axis=1))
    return float(np.mean(lse - (logits * Y).sum(axis=1)))


def _check_fitted(model, attr: str) -> None:
    if not hasattr(model, attr):
        raise NotFittedError(f"{type(model).__name__} is not trained; call fit first")


class KnnGestureClassifier(ClassifierMixin, BaseEstimator):
    """k-nearest-neighbor gesture classifier (Euclidean, majority vote).

    A vote tie is broken by the nearest neighbor whose class is among the
    tied classes; exact distance ties are broken by lowest stored index,
    which makes k=2 (the default) fully deterministic.
    """

    def __init__(self, k: int = 2):
        self.k = k

    def fit(self, X, y) -> "KnnGestureClassifier":
        X = check_feature_matrix(X)
        y = _check_codes(check_labels(y, n_samples=len(X)))
        if len(X) == 0:
            raise ValueError("empty training set")
        if not 1 <= self.k <= len(X):
            raise ValueError(f"k={self.k} must be in [1, {len(X)}]")
        self.X_ = X.copy()
        self.y_ = y.copy()
        self.classes_ = np.array([int(label) for label in GestureLabel])
        return self

    def predict_one(self, x) -> Prediction:
        _check_fitted(self, "X_")
        x = check_feature_vector(x)
        d2 = np.sum((self.X_ - x) ** 2, axis=1)
        # primary key distance, secondary key stored index
        order = np.lexsort((np.arange(len(d2)), d2))
        nearest = order[: self.k]
        counts = np.bincount(self.y_[nearest] - 1, minlength=N_CLASSES)
        top = counts.max()
        tied = np.flatnonzero(counts == top)
        if len(tied) == 1:
            code = int(tied[0]) + 1
        else:
            tied_set = set(tied + 1)
            code = next(int(self.y_[i]) for i in nearest if int(self.y_[i]) in tied_set)
        return Prediction(GestureLabel(code), tuple(counts / self.k))

    def predict(self, X) -> np.ndarray:
        X = check_feature_matrix(X)
        return np.array([int(self.predict_one(x).label) for x in X])

    def predict_proba(self, X) -> np.ndarray:
        X = check_feature_matrix(X)
        return np.vstack([self.predict_one(x).scores for x in X])


class MlrGestureClassifier(ClassifierMixin, BaseEstimator):
    """Softmax (multinomial logistic) regression trained by gradient descent."""

    def __init__(self, learning_rate: float = 0.01, epochs: int = 500, seed: int = 0):
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed

    def _init_params(self, rng: np.random.Generator) -> Dict[str, np.ndarray]:
        return {
            "W": rng.uniform(-INIT_SCALE, INIT_SCALE, size=(N_FEATURES, N_CLASSES)),
            "b": rng.uniform(-INIT_SCALE, INIT_SCALE, size=N_CLASSES),
        }

    @staticmethod
    def _logits(params: Dict[str, np.ndarray], X: np.ndarray) -> np.ndarray:
        return X @ params["W"] + params["b"]

    @classmethod
    def _loss(cls, params, X, Y) -> float:
        return _cross_entropy(cls._logits(params, X), Y)

    @classmethod
    def _grads(cls, params, X, Y) -> Dict[str, np.ndarray]:
        P = softmax(cls._logits(params, X))
        dZ = (P - Y) / len(X)
        return {"W": X.T @ dZ, "b": dZ.sum(axis=0)}

    def fit(self, X, y) -> "MlrGestureClassifier":
        X = check_feature_matrix(X)
        y = _check_codes(check_labels(y, n_samples=len(X)))
        if len(X) == 0:
            raise ValueError("empty training set")
        Y = _one_hot(y)
        params = self._init_params(np.random.default_rng(self.seed))
        self.loss_curve_ = []
        for _ in range(self.epochs):
            self.loss_curve_.append(self._loss(params, X, Y))
            grads = self._grads(params, X, Y)
            for key in params:
                params[key] -= self.learning_rate * grads[key]
        self.loss_curve_.append(self._loss(params, X, Y))
        self.W_ = params["W"]
        self.b_ = params["b"]
        self.classes_ = np.array([int(label) for label in GestureLabel])
        return self

    def _fitted_params(self) -> Dict[str, np.ndarray]:
        _check_fitted(self, "W_")
        return {"W": self.W_, "b": self.b_}

    def predict_proba(self, X) -> np.ndarray:
        X = check_feature_matrix(X)
        return softmax(self._logits(self._fitted_params(), X))

    def predict(self, X) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1) + 1

    def predict_one(self, x) -> Prediction:
        p = self.predict_proba(check_feature_vector(x).reshape(1, -1))[0]
        return Prediction(GestureLabel(int(p.argmax()) + 1), tuple(p))


class MlpGestureClassifier(ClassifierMixin, BaseEstimator):
    """10-10-8 multilayer perceptron: sigmoid hidden layer, softmax output.

    Trained full-batch with gradient descent on cross-entropy; architecture
    is fixed to 10 inputs, 10 hidden units and the 8 gesture classes.
    """

    def __init__(self, learning_rate: float = 0.01, epochs: int = 500, seed: int = 0):
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed

    def _init_params(self, rng: np.random.Generator) -> Dict[str, np.ndarray]:
        return {
            "W1": rng.uniform(-INIT_SCALE, INIT_SCALE, size=(N_FEATURES, HIDDEN_UNITS)),
            "b1": rng.uniform(-INIT_SCALE, INIT_SCALE, size=HIDDEN_UNITS),
            "W2": rng.uniform(-INIT_SCALE, INIT_SCALE, size=(HIDDEN_UNITS, N_CLASSES)),
            "b2": rng.uniform(-INIT_SCALE, INIT_SCALE, size=N_CLASSES),
        }

    @staticmethod
    def _forward(params, X) -> Tuple[np.ndarray, np.ndarray]:
        H = _sigmoid(X @ params["W1"] + params["b1"])
        return H, H @ params["W2"] + params["b2"]

    @classmethod
    def _loss(cls, params, X, Y) -> float:
        _, logits = cls._forward(params, X)
        return _cross_entropy(logits, Y)

    @classmethod
    def _grads(cls, params, X, Y) -> Dict[str, np.ndarray]:
        H, logits = cls._forward(params, X)
        P = softmax(logits)
        dZ2 = (P - Y) / len(X)
        dH = (dZ2 @ params["W2"].T) * H * (1.0 - H)
        return {
            "W1": X.T @ dH,
            "b1": dH.sum(axis=0),
            "W2": H.T @ dZ2,
            "b2": dZ2.sum(axis=0),
        }

    def fit(self, X, y) -> "MlpGestureClassifier":
        X = check_feature_matrix(X)
        y = _check_codes(check_labels(y, n_samples=len(X)))
        if len(X) == 0:
            raise ValueError("empty training set")
        Y = _one_hot(y)
        params = self._init_params(np.random.default_rng(self.seed))
        self.loss_curve_ = []
        for _ in range(self.epochs):
            self.loss_curve_.append(self._loss(params, X, Y))
            grads = self._grads(params, X, Y)
            for key in params:
                params[key] -= self.learning_rate * grads[key]
        self.loss_curve_.append(self._loss(params, X, Y))
        self.W1_, self.b1_ = params["W1"], params["b1"]
        self.W2_, self.b2_ = params["W2"], params["b2"]
        self.classes_ = np.array([int(label) for label in GestureLabel])
        return self

    def _fitted_params(self) -> Dict[str, np.ndarray]:
        _check_fitted(self, "W1_")
        return {"W1": self.W1_, "b1": self.b1_, "W2": self.W2_, "b2": self.b2_}

    def predict_proba(self, X) -> np.ndarray:
        X = check_feature_matrix(X)
        _, logits = self._forward(self._fitted_params(), X)
        return softmax(logits)

    def predict(self, X) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1) + 1

    def predict_one(self, x) -> Prediction:
        p = self.predict_proba(check_feature_vector(x).reshape(1, -1))[0]
        return Prediction(GestureLabel(int(p.argmax()) + 1), tuple(p))


_ESTIMATORS = {
    ModelKind.KNN: KnnGestureClassifier,
    ModelKind.MLP: MlpGestureClassifier,
    ModelKind.MLR: MlrGestureClassifier,
}


def make_classifier(kind, **hyperparams):
    """Instantiate the estimator for a model kind with given hyperparameters."""
    kind = kind if isinstance(kind, ModelKind) else ModelKind.from_string(kind)
    return _ESTIMATORS[kind](**hyperparams)


def model_kind_of(model) -> ModelKind:
    for kind, cls in _ESTIMATORS.items():
        if isinstance(model, cls):
            return kind
    raise ValueError(f"not a gesture classifier: {type(model).__name__}")


def train_model(kind, dataset: LabeledDataset, **hyperparams):
    """Train a fresh classifier of the given kind on a labeled dataset."""
    if len(dataset) == 0:
        raise ValueError("empty training set")
    model = make_classifier(kind, **hyperparams)
    model.fit(dataset.X, dataset.y)
    model.trained_on_ = dataset.provenance
    model.n_training_samples_ = len(dataset)
    return model


def gradient_check(kind, x=None, target=None, seed: int = 0, epsilon: float = 1e-5) -> float:
    """Compare analytic gradients against central finite differences.

    Evaluates the network of the given kind at seeded random parameters on a
    single input/one-hot-target pair and returns the maximum relative error
    |g_a - g_n| / max(1, |g_a| + |g_n|) over all parameters.
    """
    kind = kind if isinstance(kind, ModelKind) else ModelKind.from_string(kind)
    if kind == ModelKind.KNN:
        raise ValueError("gradient_check applies to the Mlp and Mlr models only")
    cls = _ESTIMATORS[kind]
    model = cls()
    rng = np.random.default_rng(seed)
    params = model._init_params(rng)
    if x is None:
        x = rng.uniform(0.0, 1.0, size=N_FEATURES)
    x = check_feature_vector(x)
    if target is None:
        target = np.zeros(N_CLASSES)
        target[rng.integers(N_CLASSES)] = 1.0
    target = np.asarray(target, dtype=float)
    if target.shape != (N_CLASSES,) or not math.isclose(target.sum(), 1.0):
        raise ValueError("target must be a one-hot vector over the 8 classes")

    X, Y = x.reshape(1, -1), target.reshape(1, -1)
    analytic = cls._grads(params, X, Y)
    worst = 0.0
    for key, grad in analytic.items():
        flat_param = params[key].reshape(-1)
        flat_grad = grad.reshape(-1)
        for i in range(flat_param.size):
            orig = flat_param[i]
            flat_param[i] = orig + epsilon
            up = cls._loss(params, X, Y)
            flat_param[i] = orig - epsilon
            down = cls._loss(params, X, Y)
            flat_param[i] = orig
            numeric = (up - down) / (2.0 * epsilon)
            err = abs(flat_grad[i] - numeric) / max(1.0, abs(flat_grad[i]) + abs(numeric))
            worst = max(worst, err)
    return worst


# --- model files ---------------------------------------------------------------
#
# Versioned JSON; numeric parameters round-trip exactly (shortest-exact float
# serialization, at most 17 significant digits).


def save_model(model, path) -> None:
    kind = model_kind_of(model)
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": kind.value,
        "hyperparams": model.get_params(),
        "classes": [int(label) for label in GestureLabel],
        "trained_on": getattr(model, "trained_on_", ""),
        "n_training_samples": getattr(model, "n_training_samples_", None),
    }
    if kind == ModelKind.KNN:
        _check_fitted(model, "X_")
        doc["params"] = {
            "points": model.X_.tolist(),
            "labels": model.y_.tolist(),
        }
    elif kind == ModelKind.MLR:
        doc["params"] = {"W": model.W_.tolist(), "b": model.b_.tolist()}
    else:
        doc["params"] = {
            "W1": model.W1_.tolist(),
            "b1": model.b1_.tolist(),
            "W2": model.W2_.tolist(),
            "b2": model.b2_.tolist(),
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_model(path):
    """Restore a trained model; predictions are bit-identical after reload."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise ModelFormatError(f"{path}: not a model file")
    version = str(doc["format_version"])
    if version != MODEL_FORMAT_VERSION:
        raise ModelVersionError(
            f"{path}: format version {version!r} not supported "
            f"(expected {MODEL_FORMAT_VERSION!r})"
        )
    try:
        kind = ModelKind.from_string(doc["kind"])
        model = make_classifier(kind, **doc.get("hyperparams", {}))
        params = doc["params"]
        if kind == ModelKind.KNN:
            model.X_ = np.array(params["points"], dtype=float)
            model.y_ = np.array(params["labels"], dtype=int)
            if model.X_.ndim != 2 or model.X_.shape[1] != N_FEATURES:
                raise ModelFormatError(f"{path}: bad stored-point shape {model.X_.shape}")
        elif kind == ModelKind.MLR:
            model.W_ = np.array(params["W"], dtype=float)
            model.b_ = np.array(params["b"], dtype=float)
            if model.W_.shape != (N_FEATURES, N_CLASSES):
                raise ModelFormatError(f"{path}: bad weight shape {model.W_.shape}")
        else:
            model.W1_ = np.array(params["W1"], dtype=float)
            model.b1_ = np.array(params["b1"], dtype=float)
            model.W2_ = np.array(params["W2"], dtype=float)
            model.b2_ = np.array(params["b2"], dtype=float)
            if model.W1_.shape != (N_FEATURES, HIDDEN_UNITS) or model.W2_.shape != (
                HIDDEN_UNITS,
                N_CLASSES,
            ):
                raise ModelFormatError(f"{path}: bad weight shapes")
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"{path}: corrupt model file ({exc})") from exc
    model.classes_ = np.array([int(label) for label in GestureLabel])
    model.trained_on_ = doc.get("trained_on", "")
    model.n_training_samples_ = doc.get("n_training_samples")
    return model

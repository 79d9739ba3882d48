"""Input validation helpers shared by the estimators and the harness."""

from __future__ import annotations

import numpy as np

N_FEATURES = 10


def check_feature_matrix(X, *, name: str = "X") -> np.ndarray:
    """Coerce to a (n_samples, 10) float array of finite values in [0, 1]."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != N_FEATURES:
        raise ValueError(f"{name} must have {N_FEATURES} features, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    if X.min() < 0.0 or X.max() > 1.0:
        raise ValueError(f"{name} has values outside [0, 1]")
    return X


def check_feature_vector(x) -> np.ndarray:
    """Coerce to a single validated feature vector of shape (10,)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (N_FEATURES,):
        raise ValueError(f"feature vector must have shape ({N_FEATURES},), got {x.shape}")
    return check_feature_matrix(x.reshape(1, -1), name="x")[0]


def check_labels(y, n_samples: int | None = None) -> np.ndarray:
    """Coerce labels to a 1-d int array, optionally checking the length."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"labels must be 1-d, got shape {y.shape}")
    if y.size and not np.issubdtype(y.dtype, np.integer):
        as_int = y.astype(int)
        if not np.array_equal(as_int, y):
            raise ValueError("labels must be integer class codes")
        y = as_int
    y = y.astype(int)
    if n_samples is not None and y.shape[0] != n_samples:
        raise ValueError(f"X and y have inconsistent lengths: {n_samples} vs {y.shape[0]}")
    return y

"""Planar PCA projection of the 10-d feature space for visualization.

Fits the top two principal axes of the sample covariance so datasets and
misclassification maps can be plotted in 2-d. The symmetric eigenproblem is
solved with cyclic Jacobi rotations, which is plenty for 10x10 matrices.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .validation import check_feature_matrix

N_COMPONENTS = 2


def jacobi_eigh(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) sorted by descending eigenvalue,
    eigenvectors in columns. Off-diagonal mass is driven below
    tol * ||a||_F, which reaches near machine precision within a few sweeps
    for the small matrices used here.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=1e-12):
        raise ValueError("matrix must be symmetric")
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        off = np.sqrt(max(0.0, np.sum(np.square(a)) - np.sum(np.square(np.diag(a)))))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:  # theta**2 would overflow
                    t = 1.0 / (2.0 * theta)
                else:
                    sign = 1.0 if theta >= 0 else -1.0
                    t = sign / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


class PlanarPca(TransformerMixin, BaseEstimator):
    """Top-2 principal component projection of feature vectors.

    Fitted attributes:
        mean_: (10,) feature mean.
        components_: (2, 10) orthonormal principal axes, descending variance,
            each with its largest-magnitude entry positive.
        eigenvalues_: (2,) explained variances (sample covariance, n-1).
    """

    def fit(self, X, y=None) -> "PlanarPca":
        X = check_feature_matrix(X)
        n = len(X)
        if n < 3:
            raise ValueError(f"need at least 3 samples to fit, got {n}")
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        cov = centered.T @ centered / (n - 1)
        if np.trace(cov) <= 1e-30:
            raise ValueError("zero-variance dataset: all points identical")
        eigenvalues, eigenvectors = jacobi_eigh(cov)
        components = eigenvectors[:, :N_COMPONENTS].T
        for i in range(N_COMPONENTS):
            peak = np.argmax(np.abs(components[i]))
            if components[i, peak] < 0:
                components[i] = -components[i]
        self.components_ = components
        self.eigenvalues_ = np.maximum(eigenvalues[:N_COMPONENTS], 0.0)
        self.total_variance_ = float(np.trace(cov))
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "components_"):
            raise NotFittedError("PlanarPca is not fitted")
        X = check_feature_matrix(X)
        return (X - self.mean_) @ self.components_.T

    def project(self, x) -> Tuple[float, float]:
        """Project a single feature vector to (pc1, pc2)."""
        p = self.transform(np.asarray(x, dtype=float).reshape(1, -1))[0]
        return float(p[0]), float(p[1])

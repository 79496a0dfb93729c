"""scikit-learn style wrapper for batch classification of generators.

``X`` is a stack of square matrices with shape ``(n_samples, n, n)``; each
matrix is tagged with the estimator's ``family`` before classification.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .algebras import AlgebraFamily, LieAlgebraElement
from .classify import DEFAULT_QMAX, DEFAULT_TOL, Verdict, classify
from .exceptions import InvalidInputError


def check_matrix_stack(X, n: int | None = None) -> np.ndarray:
    """Validate a stack of finite square matrices; promote a single matrix to a stack of one."""
    A = np.asarray(X)
    if A.ndim == 2:
        A = A[None]
    if A.ndim != 3 or A.shape[1] != A.shape[2] or A.shape[1] == 0:
        raise InvalidInputError(f"expected shape (n_samples, n, n), got {np.shape(X)}")
    if A.shape[0] == 0:
        raise InvalidInputError("empty matrix stack")
    if not np.issubdtype(A.dtype, np.number):
        raise InvalidInputError("matrix stack must be numeric")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix stack has non-finite entries")
    if n is not None and A.shape[1] != n:
        raise InvalidInputError(f"estimator was fitted on {n}x{n} matrices, got {A.shape[1]}")
    return A


class KnottedSubgroupClassifier(ClassifierMixin, BaseEstimator):
    """Predicts ``"Trivial"``, ``"InjectiveLine"`` or ``"Knotted"`` per matrix.

    Nothing is learned; ``fit`` only validates input and records the matrix
    size so the estimator can sit in pipelines and grid searches.

    Parameters
    ----------
    family : str
        Algebra tag applied to every matrix (``"su"``, ``"so"``, ``"sl2R"``,
        ``"sl3R"``, ``"slnR"`` or ``"heisenberg"``).
    qmax : int
        Largest denominator accepted when testing commensurability.
    tol : float
        Residual accepted for each rational approximation.
    """

    def __init__(self, family="su", qmax=DEFAULT_QMAX, tol=DEFAULT_TOL):
        self.family = family
        self.qmax = qmax
        self.tol = tol

    def fit(self, X, y=None):
        A = check_matrix_stack(X)
        AlgebraFamily.of(self.family, A.shape[1])
        self.n_dim_ = A.shape[1]
        self.classes_ = np.array([v.value for v in Verdict])
        return self

    def _classify_all(self, X):
        check_is_fitted(self, "n_dim_")
        A = check_matrix_stack(X, self.n_dim_)
        fam = AlgebraFamily.of(self.family, self.n_dim_)
        return [classify(LieAlgebraElement(fam, M), qmax=self.qmax, tol=self.tol) for M in A]

    def predict(self, X):
        return np.array([c.verdict.value for c in self._classify_all(X)])

    def predict_period(self, X):
        """Minimal periods, NaN where ``exp(tX)`` is not periodic."""
        return np.array([c.period if c.knotted else np.nan for c in self._classify_all(X)])

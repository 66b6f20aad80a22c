"""scikit-learn compatible transformers over stacks of symmetric matrices.

Inputs are arrays of shape ``(n_samples, n, n)`` (a single ``(n, n)`` matrix is
treated as one sample). Both transformers are stateless apart from the
validated parameters and the matrix dimension seen in ``fit``, so they drop
into pipelines and ``clone`` / ``get_params`` work as usual.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import InvalidArgument
from .matrixcore import eigh
from .spectralfun import arrange_two_sided, as_weights, psi_truncated
from .validation import check_symmetric_stack


class _MatrixStackMixin:
    def _validate_stack(self, X, reset):
        X = check_symmetric_stack(X)
        n = X.shape[1]
        if reset:
            self.n_features_in_ = n
        elif n != self.n_features_in_:
            raise InvalidArgument(f"X has matrices of size {n}, but {type(self).__name__} was fitted with size {self.n_features_in_}")
        return X


class SpectrumTransformer(_MatrixStackMixin, TransformerMixin, BaseEstimator):
    """Sorted eigenvalues of each matrix, largest first.

    Examples
    --------
    >>> import numpy as np
    >>> SpectrumTransformer().fit_transform(np.diag([3.0, 1.0, 2.0]))
    array([[3., 2., 1.]])
    """

    def fit(self, X, y=None):
        self._validate_stack(X, reset=True)
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = self._validate_stack(X, reset=False)
        return np.stack([eigh(a).eigenvalues for a in X])


class WeightedEigenvalueSum(_MatrixStackMixin, TransformerMixin, BaseEstimator):
    """``psi(X) = sum_j mu_j lambda_j(X)`` over the two-sided arrangement.

    Parameters
    ----------
    weights : str or WeightSequence
        E.g. ``"tsap:1:2"``, ``"osp:1:5"`` or ``"list:1,1,1"``.
    zero_tol : float or None
        Eigenvalues with ``|lambda| <= zero_tol`` count as zero. None uses
        ``1e-10 * max|lambda|`` per matrix.
    require_monotone : bool
        Reject weights that are not nonincreasing in the two-sided order (the
        condition under which ``psi`` is convex).
    """

    def __init__(self, weights="tsap:1:2", zero_tol=None, require_monotone=True):
        self.weights = weights
        self.zero_tol = zero_tol
        self.require_monotone = require_monotone

    def fit(self, X, y=None):
        mu = as_weights(self.weights)
        if self.require_monotone:
            mu.require_monotone()
        if self.zero_tol is not None and self.zero_tol < 0:
            raise InvalidArgument("zero_tol must be >= 0")
        self._validate_stack(X, reset=True)
        self.weights_ = mu
        return self

    def _psi(self, a):
        w = eigh(a).eigenvalues
        tol = 1e-10 * float(np.max(np.abs(w))) if self.zero_tol is None else self.zero_tol
        ts = arrange_two_sided(w, tol)
        return psi_truncated(ts, self.weights_, max(ts.rank, 1))

    def transform(self, X):
        """Return ``psi`` per sample as a column of shape ``(n_samples, 1)``."""
        check_is_fitted(self, "weights_")
        X = self._validate_stack(X, reset=False)
        return np.array([[self._psi(a)] for a in X])

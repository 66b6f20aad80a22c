"""Input validation helpers shared by the functional API and the estimators."""

import numbers

import numpy as np

from .exceptions import InvalidArgument, InvalidMatrix


def as_float_array(x, ndim=None, name="array"):
    try:
        arr = np.asarray(x, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidArgument(f"{name} is not numeric: {exc}") from None
    if ndim is not None and arr.ndim != ndim:
        raise InvalidArgument(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    return arr


def check_finite(arr, name="array"):
    if not np.all(np.isfinite(arr)):
        bad = tuple(int(i) for i in np.argwhere(~np.isfinite(arr))[0])
        raise InvalidMatrix(f"{name} has a non-finite entry at {bad}")
    return arr


def first_asymmetric_pair(a):
    """Return the first ``(i, j)`` with ``i < j`` and ``a[i, j] != a[j, i]``, or None."""
    diff = np.argwhere(np.triu(a != a.T, 1))
    if diff.size == 0:
        return None
    i, j = diff[0]
    return int(i), int(j)


def check_symmetric(x, name="matrix"):
    """Validate a square, finite, exactly symmetric matrix.

    Returns a float64 copy. Symmetry is checked bit-for-bit: callers that want a
    symmetrized matrix must do so explicitly.
    """
    a = as_float_array(x, ndim=2, name=name)
    if a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidMatrix(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    check_finite(a, name)
    pair = first_asymmetric_pair(a)
    if pair is not None:
        i, j = pair
        raise InvalidMatrix(
            f"{name} is not symmetric: entry ({i}, {j}) = {a[i, j]!r} "
            f"but ({j}, {i}) = {a[j, i]!r}"
        )
    return np.array(a, copy=True)


def check_symmetric_stack(X, name="X"):
    """Validate a single symmetric matrix or a stack of shape (n_samples, n, n).

    Always returns a 3-D float64 array.
    """
    arr = as_float_array(X, name=name)
    if arr.ndim == 2:
        arr = arr[np.newaxis]
    if arr.ndim != 3:
        raise InvalidArgument(f"{name} must have shape (n, n) or (n_samples, n, n), got {arr.shape}")
    return np.stack([check_symmetric(a, name=f"{name}[{i}]") for i, a in enumerate(arr)])


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InvalidArgument(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InvalidArgument(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_positive_real(value, name, strict=True):
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise InvalidArgument(f"{name} must be a real number, got {value!r}") from None
    if not np.isfinite(v) or v < 0 or (strict and v == 0):
        bound = "> 0" if strict else ">= 0"
        raise InvalidArgument(f"{name} must be finite and {bound}, got {value!r}")
    return v

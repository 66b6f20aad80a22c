"""Compiled inner loops for the eigensolvers.

Kept free of validation and object wrappers; callers in :mod:`schurspec.matrixcore`
are responsible for checking inputs.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def jacobi_sweeps(a, want_vectors, threshold, max_sweeps):
    """Cyclic Jacobi on a copy of ``a``.

    Returns ``(diagonal, vectors, sweeps_used, converged)``. ``vectors`` is the
    accumulated rotation (identity-sized even when not requested, to keep the
    signature monomorphic).
    """
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                x = abs(a[p, q])
                if x > off:
                    off = x
        if off <= threshold:
            return np.diag(a).copy(), v, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - s * vkq
                        v[k, q] = s * vkp + c * vkq
    return np.diag(a).copy(), v, max_sweeps, False


@njit(cache=True, nogil=True)
def sturm_counts(d, e2, x, pivmin):
    """Number of eigenvalues strictly below each shift in ``x``.

    Uses the LDL^T pivot recurrence; the loop over shifts is innermost so it
    vectorizes.
    """
    n = d.shape[0]
    m = x.shape[0]
    q = np.empty(m)
    cnt = np.zeros(m, dtype=np.int64)
    for k in range(m):
        qk = d[0] - x[k]
        if abs(qk) < pivmin:
            qk = -pivmin
        q[k] = qk
        cnt[k] += qk < 0.0
    for i in range(1, n):
        di = d[i]
        ei = e2[i - 1]
        for k in range(m):
            qk = di - x[k] - ei / q[k]
            if abs(qk) < pivmin:
                qk = -pivmin
            q[k] = qk
            cnt[k] += qk < 0.0
    return cnt


@njit(cache=True, nogil=True)
def bisect_eigenvalues(d, e2, targets, lo0, hi0, tol, pivmin, max_iter):
    """Bisection for the eigenvalues with ascending ranks ``targets``.

    All brackets start as ``[lo0, hi0]`` and are halved together until every
    bracket is narrower than ``tol`` or stops shrinking in floating point.
    """
    m = targets.shape[0]
    lo = np.full(m, lo0)
    hi = np.full(m, hi0)
    mid = np.empty(m)
    for _ in range(max_iter):
        done = True
        for k in range(m):
            mid[k] = 0.5 * (lo[k] + hi[k])
            if hi[k] - lo[k] > tol and lo[k] < mid[k] < hi[k]:
                done = False
        if done:
            break
        cnt = sturm_counts(d, e2, mid, pivmin)
        for k in range(m):
            if cnt[k] > targets[k]:
                hi[k] = mid[k]
            else:
                lo[k] = mid[k]
    return 0.5 * (lo + hi), hi - lo

"""Symmetric eigenproblems and the finite-dimensional Schur convexity primitives.

Dense matrices go through cyclic Jacobi, tridiagonal ones through Sturm-sequence
bisection. Both return a :class:`Spectrum` whose eigenvalues are sorted
nonincreasing.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .campaign import TrialResult, derive_seed, jsonable, run_trials, summarize
from .exceptions import InvalidArgument, InvalidMatrix, SolverDivergence
from .validation import (
    as_float_array,
    check_finite,
    check_positive_int,
    check_positive_real,
    check_symmetric,
)

JACOBI_RELATIVE_THRESHOLD = 1e-13
JACOBI_MAX_SWEEPS = 100
BISECTION_RELATIVE_TOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SymmetricMatrix:
    """Dense real symmetric matrix; symmetry is checked exactly on construction."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(check_symmetric(self.entries)))

    @classmethod
    def symmetrized(cls, a):
        """Build from an arbitrary square matrix via ``(a + a.T) / 2``."""
        a = as_float_array(a, ndim=2, name="matrix")
        return cls((a + a.T) / 2.0)

    @property
    def n(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __add__(self, other):
        return SymmetricMatrix(self.entries + _dense(other))

    def __mul__(self, alpha):
        return SymmetricMatrix(float(alpha) * self.entries)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def trace(self):
        return float(np.trace(self.entries))

    def frobenius_norm(self):
        return float(np.linalg.norm(self.entries))


@dataclass(frozen=True, eq=False)
class TridiagonalMatrix:
    diagonal: np.ndarray
    offdiagonal: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        d = as_float_array(self.diagonal, ndim=1, name="diagonal")
        e = as_float_array(self.offdiagonal, ndim=1, name="offdiagonal")
        if d.size == 0:
            raise InvalidMatrix("tridiagonal matrix must have n >= 1")
        if e.size != d.size - 1:
            raise InvalidMatrix(
                f"offdiagonal must have n - 1 = {d.size - 1} entries, got {e.size}"
            )
        check_finite(d, "diagonal")
        check_finite(e, "offdiagonal")
        object.__setattr__(self, "diagonal", _frozen(d))
        object.__setattr__(self, "offdiagonal", _frozen(e))

    @property
    def n(self):
        return self.diagonal.size

    def to_dense(self):
        a = np.diag(self.diagonal)
        if self.n > 1:
            a += np.diag(self.offdiagonal, 1) + np.diag(self.offdiagonal, -1)
        return SymmetricMatrix(a)

    def inf_norm(self):
        absd = np.abs(self.diagonal)
        abse = np.abs(self.offdiagonal)
        rows = absd.copy()
        rows[:-1] += abse
        rows[1:] += abse
        return float(rows.max())


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted nonincreasing, optionally with paired eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = None
    residual: float = None

    def __post_init__(self):
        w = as_float_array(self.eigenvalues, ndim=1, name="eigenvalues")
        if np.any(np.diff(w) > 0):
            raise InvalidArgument("Spectrum eigenvalues must be sorted nonincreasing")
        object.__setattr__(self, "eigenvalues", _frozen(w))
        if self.eigenvectors is not None:
            object.__setattr__(self, "eigenvectors", _frozen(self.eigenvectors))

    def __len__(self):
        return self.eigenvalues.size

    def __iter__(self):
        return iter(self.eigenvalues.tolist())


@dataclass(frozen=True, eq=False)
class StiefelFrame:
    """An n-by-k matrix with orthonormal columns."""

    columns: np.ndarray

    ORTHONORMALITY_TOL = 1e-10

    def __post_init__(self):
        a = as_float_array(self.columns, ndim=2, name="frame")
        n, k = a.shape
        if k == 0 or k > n:
            raise InvalidArgument(f"frame must have 1 <= k <= n, got shape {a.shape}")
        check_finite(a, "frame")
        err = np.max(np.abs(a.T @ a - np.eye(k)))
        if err > self.ORTHONORMALITY_TOL:
            raise InvalidArgument(f"frame columns are not orthonormal (error {err:.3g})")
        object.__setattr__(self, "columns", _frozen(a))

    @property
    def n(self):
        return self.columns.shape[0]

    @property
    def k(self):
        return self.columns.shape[1]


def _dense(X):
    if isinstance(X, SymmetricMatrix):
        return X.entries
    if isinstance(X, TridiagonalMatrix):
        return X.to_dense().entries
    return check_symmetric(X)


def _sorted_desc(w, v=None):
    order = np.argsort(-w, kind="stable")
    return w[order], (None if v is None else v[:, order])


def eigh(X, want_vectors=False):
    """All eigenvalues of a symmetric matrix, sorted nonincreasing.

    Parameters
    ----------
    X : SymmetricMatrix or array_like
        Plain arrays are validated (square, finite, exactly symmetric).
    want_vectors : bool
        Also return orthonormal eigenvectors (columns paired with eigenvalues)
        and the max residual ``||X v - lambda v||``.

    Raises
    ------
    InvalidMatrix
        On malformed input.
    SolverDivergence
        If Jacobi does not converge within ``JACOBI_MAX_SWEEPS`` sweeps.
    """
    a = _dense(X)
    threshold = JACOBI_RELATIVE_THRESHOLD * float(np.linalg.norm(a))
    w, v, sweeps, converged = _kernels.jacobi_sweeps(
        np.ascontiguousarray(a), bool(want_vectors), threshold, JACOBI_MAX_SWEEPS
    )
    if not converged:
        raise SolverDivergence(
            f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (n={a.shape[0]})"
        )
    if not want_vectors:
        return Spectrum(_sorted_desc(w)[0])
    w, v = _sorted_desc(w, v)
    residual = float(np.max(np.linalg.norm(a @ v - v * w, axis=0)))
    return Spectrum(w, v, residual)


def eigh_tridiagonal(T, select=None, rtol=BISECTION_RELATIVE_TOL):
    """Eigenvalues of a symmetric tridiagonal matrix by Sturm bisection.

    ``select=(start, stop)`` restricts the result to positions ``start:stop`` of
    the nonincreasing ordering; by default all ``n`` eigenvalues are returned.
    Brackets are refined to width ``rtol * ||T||_inf``. The matrix is never
    densified.
    """
    if not isinstance(T, TridiagonalMatrix):
        T = TridiagonalMatrix(*T)
    n = T.n
    start, stop = (0, n) if select is None else select
    if not 0 <= start < stop <= n:
        raise InvalidArgument(f"select must satisfy 0 <= start < stop <= {n}, got {select}")
    d = np.ascontiguousarray(T.diagonal)
    e2 = np.ascontiguousarray(T.offdiagonal) ** 2
    abse = np.abs(T.offdiagonal)
    radius = np.zeros(n)
    radius[:-1] += abse
    radius[1:] += abse
    lo, hi = float(np.min(d - radius)), float(np.max(d + radius))
    norm = max(abs(lo), abs(hi))
    pivmin = np.finfo(float).tiny * max(1.0, float(e2.max()) if e2.size else 1.0)
    pad = 2.0 * np.finfo(float).eps * norm * n + 2.0 * pivmin
    lo, hi = lo - pad, hi + pad
    tol = max(check_positive_real(rtol, "rtol") * norm, 4.0 * pivmin)
    # descending position j is ascending rank n - 1 - j
    targets = np.arange(n - 1 - start, n - 1 - stop, -1, dtype=np.int64)
    w, width = _kernels.bisect_eigenvalues(d, e2, targets, lo, hi, tol, pivmin, 200)
    if np.any(width > max(tol, 8.0 * np.finfo(float).eps * norm)):
        raise SolverDivergence("bisection did not reach the requested tolerance")
    # brackets may overlap for clustered eigenvalues; enforce the ordering contract
    return Spectrum(np.minimum.accumulate(w))


def sum_top_k(X, k):
    """Sum of the ``k`` largest eigenvalues of ``X``."""
    w = eigh(X).eigenvalues
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 1 <= k <= w.size:
        raise InvalidArgument(f"k must be an integer in [1, {w.size}], got {k!r}")
    return float(np.sum(w[:k]))


def trace_quadratic(A, X):
    """``trace(A A^T X)`` for a Stiefel frame ``A``."""
    if not isinstance(A, StiefelFrame):
        A = StiefelFrame(A)
    a = _dense(X)
    if A.n != a.shape[0]:
        raise InvalidArgument(f"frame has n={A.n} but matrix has n={a.shape[0]}")
    C = A.columns
    return float(np.sum(C * (a @ C)))


def random_symmetric(n, seed, scale=1.0):
    """I.i.d. uniform(-scale, scale) entries, symmetrized as ``(M + M.T) / 2``.

    Deterministic in ``(n, seed, scale)``; the result is exactly symmetric since
    floating-point addition commutes.
    """
    n = check_positive_int(n, "n")
    scale = check_positive_real(scale, "scale")
    rng = np.random.default_rng(seed)
    m = rng.uniform(-scale, scale, size=(n, n))
    return SymmetricMatrix((m + m.T) / 2.0)


def _mgs(a):
    # two passes of modified Gram-Schmidt ("twice is enough")
    q = np.array(a, dtype=np.float64, copy=True)
    k = q.shape[1]
    for _ in range(2):
        for j in range(k):
            for i in range(j):
                q[:, j] -= (q[:, i] @ q[:, j]) * q[:, i]
            q[:, j] /= np.linalg.norm(q[:, j])
    return q


def random_frame(n, k, seed):
    """Random n-by-k Stiefel frame: Gram-Schmidt on a seeded Gaussian matrix."""
    n = check_positive_int(n, "n")
    k = check_positive_int(k, "k")
    if k > n:
        raise InvalidArgument(f"k must be <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    return StiefelFrame(_mgs(rng.standard_normal((n, k))))


def random_orthogonal(n, seed):
    return random_frame(n, n, seed)


def matrix_to_document(X):
    a = _dense(X)
    return {"n": int(a.shape[0]), "data": [float(x) for x in a.ravel()]}


def matrix_from_document(doc):
    """Parse the ``{"n": ..., "data": [...]}`` structure into a SymmetricMatrix."""
    try:
        n = doc["n"]
        data = doc["data"]
    except (KeyError, TypeError):
        raise InvalidMatrix("matrix document needs fields 'n' and 'data'") from None
    n = check_positive_int(n, "n")
    a = as_float_array(data, ndim=1, name="data")
    if a.size != n * n:
        raise InvalidMatrix(f"data must hold n*n = {n * n} numbers, got {a.size}")
    return SymmetricMatrix(a.reshape(n, n))


def write_matrix(X, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_document(X), fh, indent=1)
        fh.write("\n")


def read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidMatrix(f"{path}: not a valid matrix document ({exc})") from None
    return matrix_from_document(doc)


def weighted_eigenvalue_sum(X, mu):
    """``sum_i mu_i lambda_i(X)`` over the nonincreasing spectrum; ``mu`` has length ``n``."""
    w = eigh(X).eigenvalues
    mu = as_float_array(mu, ndim=1, name="mu")
    if mu.size != w.size:
        raise InvalidArgument(f"mu must have {w.size} entries, got {mu.size}")
    return float(mu @ w)


def verify_trace_sup(dim, k, trials, seed, tol=1e-9, frames=500, jobs=1):
    """Sum of the top ``k`` eigenvalues as a supremum of ``trace(A A^T X)``.

    Per trial: every one of ``frames`` random frames stays below the top-k sum,
    and the frame of the top-k eigenvectors attains it (both within
    ``tol * (1 + |top-k sum|)``).
    """
    dim = check_positive_int(dim, "dim")
    trials = check_positive_int(trials, "trials")
    frames = check_positive_int(frames, "frames")
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= dim:
        raise InvalidArgument(f"k must be in [1, {dim}], got {k!r}")

    def trial(i):
        X = random_symmetric(dim, derive_seed(seed, i, 0))
        spec = eigh(X, want_vectors=True)
        top = float(np.sum(spec.eigenvalues[:k]))
        allowed = tol * (1.0 + abs(top))
        best = max(
            trace_quadratic(random_frame(dim, k, derive_seed(seed, i, 1 + j)), X)
            for j in range(frames)
        )
        attained = trace_quadratic(StiefelFrame(spec.eigenvectors[:, :k]), X)
        witness = {"X": jsonable(X.entries), "top_k_sum": top}
        return [
            TrialResult(best - top, allowed, {**witness, "part": "upper", "best_frame": best}),
            TrialResult(abs(attained - top), allowed, {**witness, "part": "attained", "eigen_frame": attained}),
        ]

    return summarize("trace-sup", run_trials(trial, trials, jobs), trials, tol, seed)


def verify_unitary_invariance(dim, trials, mu, seed, tol=1e-9, jobs=1):
    """``sum mu_i lambda_i(Q^T X Q) == sum mu_i lambda_i(X)`` for random orthogonal ``Q``."""
    dim = check_positive_int(dim, "dim")
    trials = check_positive_int(trials, "trials")
    mu = as_float_array(mu, ndim=1, name="mu")

    def trial(i):
        X = random_symmetric(dim, derive_seed(seed, i, 0))
        Q = random_orthogonal(dim, derive_seed(seed, i, 1)).columns
        Y = SymmetricMatrix.symmetrized(Q.T @ X.entries @ Q)
        a, b = weighted_eigenvalue_sum(X, mu), weighted_eigenvalue_sum(Y, mu)
        scale = 1.0 + float(np.abs(mu) @ np.abs(eigh(X).eigenvalues))
        return TrialResult(abs(a - b), tol * scale, {"X": jsonable(X.entries), "Q": jsonable(Q), "phi_X": a, "phi_QXQ": b})

    return summarize("unitary-invariance", run_trials(trial, trials, jobs), trials, tol, seed)

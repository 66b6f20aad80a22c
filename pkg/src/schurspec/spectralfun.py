"""Weighted eigenvalue sums on two-sided spectra and their verification campaigns.

For a finite symmetric matrix (a finite-rank compact operator) the eigenvalues
are arranged two-sidedly::

    lambda_1 >= lambda_2 >= ... > 0 > ... >= lambda_{-2} >= lambda_{-1}

with missing indices padded by zero, and

    psi(S) = sum_{j != 0} mu_j lambda_j(S).

Analytic spectra (:class:`SpectrumGenerator`) are indexed one-sidedly,
``lambda_1 >= lambda_2 >= ...``, and paired with ``mu_1, mu_2, ...`` only.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.special import zeta

from .campaign import (
    TrialResult,
    VerificationReport,
    derive_seed,
    jsonable,
    run_trials,
    summarize,
)
from .exceptions import ConvergenceError, InvalidArgument, MonotonicityError
from .matrixcore import Spectrum, SymmetricMatrix, eigh, random_symmetric
from .validation import as_float_array, check_positive_int

logger = logging.getLogger(__name__)

__all__ = [
    "WeightSequence",
    "TwoSidedSpectrum",
    "SpectrumGenerator",
    "VerificationReport",
    "PsiResult",
    "arrange_two_sided",
    "psi",
    "psi_truncated",
    "psi_matrix",
    "truncation_error_bound",
    "convergence_check",
    "verify_sublinearity",
    "verify_convexity",
    "verify_homogeneity",
    "verify_spectral_continuity",
    "verify_finite_rank_approximation",
]

MONOTONICITY_CHECK_LENGTH = 10_000


# -- weights -------------------------------------------------------------------


@dataclass(frozen=True)
class WeightSequence:
    """Weights ``mu_j`` indexed by ``j in Z \\ {0}``.

    Families (string form in parentheses):

    - ``one_sided_power`` (``osp:c:p``): ``mu_n = c n^-p`` for ``n >= 1``, zero for ``n < 0``.
    - ``two_sided_antisymmetric_power`` (``tsap:c:p``): ``mu_n = c n^-p``, ``mu_-n = -c n^-p``.
    - ``finite_list`` (``list:a,b,...`` or ``list:a,b;m1,m2``): ``mu_1, mu_2, ...`` then,
      after ``;``, ``mu_-1, mu_-2, ...``. Everything else is zero.
    """

    family: str
    c: float = 1.0
    p: float = 2.0
    positive: tuple = ()
    negative: tuple = ()

    FAMILIES = ("one_sided_power", "two_sided_antisymmetric_power", "finite_list")
    _SHORT = {"osp": "one_sided_power", "tsap": "two_sided_antisymmetric_power"}

    def __post_init__(self):
        if self.family not in self.FAMILIES:
            raise InvalidArgument(f"unknown weight family {self.family!r}")
        if self.is_power:
            if not (math.isfinite(self.c) and math.isfinite(self.p)) or self.p <= 0:
                raise InvalidArgument(f"power weights need finite c and p > 0, got c={self.c}, p={self.p}")
        else:
            pos = tuple(float(v) for v in self.positive)
            neg = tuple(float(v) for v in self.negative)
            if not all(map(math.isfinite, pos + neg)):
                raise InvalidArgument("finite-list weights must be finite")
            object.__setattr__(self, "positive", pos)
            object.__setattr__(self, "negative", neg)

    @classmethod
    def one_sided_power(cls, c=1.0, p=2.0):
        return cls("one_sided_power", float(c), float(p))

    @classmethod
    def two_sided_antisymmetric_power(cls, c=1.0, p=2.0):
        return cls("two_sided_antisymmetric_power", float(c), float(p))

    @classmethod
    def finite(cls, positive, negative=()):
        return cls("finite_list", positive=tuple(positive), negative=tuple(negative))

    @classmethod
    def parse(cls, text):
        """Parse ``osp:c:p``, ``tsap:c:p`` or ``list:...``."""
        head, _, rest = text.strip().partition(":")
        try:
            if head in cls._SHORT:
                c, p = rest.split(":")
                return cls(cls._SHORT[head], float(c), float(p))
            if head == "list":
                pos_text, _, neg_text = rest.partition(";")
                pos = [float(v) for v in pos_text.split(",") if v.strip()]
                neg = [float(v) for v in neg_text.split(",") if v.strip()]
                if not pos and not neg:
                    raise ValueError("empty list")
                return cls.finite(pos, neg)
        except ValueError as exc:
            raise InvalidArgument(f"malformed weights {text!r}: {exc}") from None
        raise InvalidArgument(f"unknown weight family in {text!r}; expected osp, tsap or list")

    def __str__(self):
        if self.family == "one_sided_power":
            return f"osp:{self.c:g}:{self.p:g}"
        if self.family == "two_sided_antisymmetric_power":
            return f"tsap:{self.c:g}:{self.p:g}"
        pos = ",".join(f"{v:g}" for v in self.positive)
        if self.negative:
            return "list:" + pos + ";" + ",".join(f"{v:g}" for v in self.negative)
        return "list:" + pos

    @property
    def is_power(self):
        return self.family != "finite_list"

    @property
    def two_sided(self):
        if self.family == "finite_list":
            return bool(self.negative)
        return self.family == "two_sided_antisymmetric_power"

    @property
    def antisymmetric(self):
        """True when ``mu_-j == -mu_j`` for every ``j``."""
        if self.family == "two_sided_antisymmetric_power":
            return True
        if self.family == "one_sided_power":
            return self.c == 0
        m = max(len(self.positive), len(self.negative))
        return np.array_equal(self.positive_weights(m), -self.negative_weights(m))

    @property
    def decay_exponent(self):
        return self.p if self.is_power else math.inf

    def positive_weights(self, m):
        """``mu_1, ..., mu_m``."""
        if self.is_power:
            return self.c * np.arange(1, m + 1, dtype=float) ** -self.p
        w = np.zeros(m)
        k = min(m, len(self.positive))
        w[:k] = self.positive[:k]
        return w

    def negative_weights(self, m):
        """``mu_-1, ..., mu_-m``."""
        if self.family == "two_sided_antisymmetric_power":
            return -self.positive_weights(m)
        if self.family == "one_sided_power":
            return np.zeros(m)
        w = np.zeros(m)
        k = min(m, len(self.negative))
        w[:k] = self.negative[:k]
        return w

    def weight(self, j):
        if j == 0:
            raise InvalidArgument("index 0 carries no weight")
        return float(self.positive_weights(j)[-1] if j > 0 else self.negative_weights(-j)[-1])

    @property
    def support(self):
        """Largest ``|j|`` with a nonzero weight, or None for infinite families."""
        if self.is_power:
            return 0 if self.c == 0 else None
        nz = [i + 1 for i, v in enumerate(self.positive) if v != 0]
        nz += [i + 1 for i, v in enumerate(self.negative) if v != 0]
        return max(nz, default=0)

    def tail_abs_bound(self, m):
        """Upper bound on ``sum_{|j| >= m+1} |mu_j|``.

        Power families use the Hurwitz zeta ``sum_{j > m} j^-p = zeta(p, m + 1)``;
        finite lists are summed exactly. Infinite when ``p <= 1``.
        """
        if m < 0:
            raise InvalidArgument("m must be >= 0")
        if not self.is_power:
            return math.fsum(abs(v) for v in self.positive[m:] + self.negative[m:])
        if self.c == 0:
            return 0.0
        if self.p <= 1:
            return math.inf
        one_side = float(zeta(self.p, m + 1))
        sides = 2 if self.two_sided else 1
        return sides * abs(self.c) * one_side

    def abs_sum(self, m=None):
        """``sum |mu_j|`` over ``|j| <= m`` (all ``j`` when ``m`` is None)."""
        if m is not None:
            return math.fsum(np.abs(self.positive_weights(m))) + math.fsum(
                np.abs(self.negative_weights(m))
            )
        if not self.is_power:
            return math.fsum(abs(v) for v in self.positive + self.negative)
        if self.p <= 1 and self.c != 0:
            return math.inf
        sides = 2 if self.two_sided else 1
        return sides * abs(self.c) * float(zeta(self.p))

    def is_monotone(self, length=MONOTONICITY_CHECK_LENGTH):
        """Nonincreasing in the order ``mu_1 >= mu_2 >= ... >= mu_-2 >= mu_-1``.

        Power families are monotone iff ``c >= 0`` (``n^-p`` decreases for ``p > 0``);
        the first ``length`` indices are also checked numerically. Finite lists
        are implicitly padded by zeros in the middle of the order.
        """
        if self.is_power and self.c < 0:
            return False
        m = length if self.is_power else max(len(self.positive), len(self.negative)) + 1
        pos = self.positive_weights(m)
        neg = self.negative_weights(m)
        seq = np.concatenate([pos, neg[::-1]])
        return bool(np.all(seq[:-1] >= seq[1:]))

    def require_monotone(self):
        if not self.is_monotone():
            raise MonotonicityError(f"weights {self} are not nonincreasing in the two-sided order")
        return self


def as_weights(mu):
    if isinstance(mu, WeightSequence):
        return mu
    if isinstance(mu, str):
        return WeightSequence.parse(mu)
    return WeightSequence.finite(mu)


# -- spectra -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TwoSidedSpectrum:
    """Eigenvalues split by sign.

    ``positive[i]`` is ``lambda_{i+1}`` (descending, all > 0); ``negative[i]`` is
    ``lambda_{-(i+1)}`` (ascending, so ``negative[0]`` is the most negative).
    ``zeros`` keeps the values classed as zero so the multiset is recoverable.
    """

    positive: np.ndarray
    negative: np.ndarray
    zeros: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        for name in ("positive", "negative", "zeros"):
            a = np.array(as_float_array(getattr(self, name), ndim=1, name=name), copy=True)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        pos, neg = self.positive, self.negative
        if np.any(pos <= 0) or np.any(np.diff(pos) > 0):
            raise InvalidArgument("positive part must be > 0 and nonincreasing")
        if np.any(neg >= 0) or np.any(np.diff(neg) < 0):
            raise InvalidArgument("negative part must be < 0, most negative first")

    @property
    def has_zero(self):
        return self.zeros.size > 0

    @property
    def rank(self):
        return max(self.positive.size, self.negative.size)

    def value(self, j):
        """``lambda_j`` with zero padding; ``lambda_0 = 0``."""
        if j > 0:
            return float(self.positive[j - 1]) if j <= self.positive.size else 0.0
        if j < 0:
            return float(self.negative[-j - 1]) if -j <= self.negative.size else 0.0
        return 0.0

    def positive_values(self, m):
        out = np.zeros(m)
        k = min(m, self.positive.size)
        out[:k] = self.positive[:k]
        return out

    def negative_values(self, m):
        out = np.zeros(m)
        k = min(m, self.negative.size)
        out[:k] = self.negative[:k]
        return out

    def to_sorted(self):
        """All values back in one nonincreasing array."""
        return np.concatenate([self.positive, np.sort(self.zeros)[::-1], self.negative[::-1]])


def arrange_two_sided(s, zero_tol=0.0):
    """Split a spectrum into the two-sided arrangement.

    Values with ``|lambda| <= zero_tol`` are classed as zero.
    """
    if zero_tol < 0:
        raise InvalidArgument("zero_tol must be >= 0")
    w = s.eigenvalues if isinstance(s, Spectrum) else as_float_array(s, ndim=1, name="spectrum")
    w = np.sort(w)[::-1]
    small = np.abs(w) <= zero_tol
    return TwoSidedSpectrum(
        positive=w[(w > 0) & ~small],
        negative=w[(w < 0) & ~small][::-1],
        zeros=w[small],
    )


@dataclass(frozen=True)
class SpectrumGenerator:
    """A one-sided analytic spectrum ``n -> lambda_n``, ``n >= 1``, nonincreasing in ``n``.

    ``envelope = (C, g)`` promises ``|lambda_n| <= C n^g`` for every ``n >= 1``.
    ``decreasing_magnitude`` marks spectra with ``|lambda_n|`` nonincreasing,
    for which the sharper truncation estimate ``|lambda_{m+1}| * tail(mu)`` applies.
    """

    name: str
    func: Callable
    envelope: Optional[tuple] = None
    decreasing_magnitude: bool = False
    params: dict = field(default_factory=dict)
    prefix: Optional[Callable] = field(default=None, compare=False)

    def values(self, m):
        """``lambda_1, ..., lambda_m``."""
        if self.prefix is not None:
            return np.asarray(self.prefix(m), dtype=float)
        return np.asarray(self.func(np.arange(1, m + 1, dtype=float)), dtype=float)

    def __call__(self, n):
        n = np.asarray(n)
        if self.prefix is not None:
            return self.values(int(n.max()))[n - 1]
        return self.func(n.astype(float))

    @property
    def growth_exponent(self):
        return None if self.envelope is None else self.envelope[1]


def _as_spectrum_input(spec):
    """Normalize to TwoSidedSpectrum or SpectrumGenerator."""
    if isinstance(spec, (TwoSidedSpectrum, SpectrumGenerator)):
        return spec
    if isinstance(spec, Spectrum):
        return arrange_two_sided(spec)
    if isinstance(spec, SymmetricMatrix):
        return _arrange_solver_output(eigh(spec).eigenvalues)
    return arrange_two_sided(as_float_array(spec, ndim=1, name="spectrum"))


def _arrange_solver_output(w):
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    return arrange_two_sided(w, 1e-10 * scale)


# -- the functional -------------------------------------------------------------


class PsiResult(NamedTuple):
    value: float
    tail_bound: float
    terms: int


DEFAULT_GENERATOR_TERMS = 10_000


def psi_truncated(spec, mu, m):
    """``psi_m = sum_{|j| <= m} mu_j lambda_j`` (``j >= 1`` only for generators)."""
    m = check_positive_int(m, "m")
    spec, mu = _as_spectrum_input(spec), as_weights(mu)
    if isinstance(spec, SpectrumGenerator):
        return _fsum_dot(mu.positive_weights(m), spec.values(m))
    return _fsum_dot(mu.positive_weights(m), spec.positive_values(m)) + _fsum_dot(
        mu.negative_weights(m), spec.negative_values(m)
    )


def _fsum_dot(a, b):
    mask = a != 0
    return math.fsum((a[mask] * b[mask]).tolist())


def psi(spec, mu, terms=None):
    """Partial sum of the weighted eigenvalue series with a rigorous tail bound.

    The true value lies in ``[value - tail_bound, value + tail_bound]``. For a
    finite spectrum ``terms`` defaults to its rank (exact result, zero tail);
    for a generator it defaults to ``DEFAULT_GENERATOR_TERMS``.

    Raises
    ------
    ConvergenceError
        If the series is not known to converge absolutely.
    """
    spec, mu = _as_spectrum_input(spec), as_weights(mu)
    if isinstance(spec, SpectrumGenerator):
        if not convergence_check(spec, mu):
            raise ConvergenceError(_divergence_reason(spec, mu))
        terms = DEFAULT_GENERATOR_TERMS if terms is None else terms
    else:
        terms = max(spec.rank, 1) if terms is None else terms
    terms = check_positive_int(terms, "terms")
    value = psi_truncated(spec, mu, terms)
    return PsiResult(value, truncation_error_bound(spec, mu, terms), terms)


def psi_matrix(X, mu, zero_tol=None):
    """``psi`` of a symmetric matrix.

    ``zero_tol`` defaults to ``1e-10 * max|lambda|`` (solver resolution).
    """
    w = eigh(X).eigenvalues
    mu = as_weights(mu)
    ts = _arrange_solver_output(w) if zero_tol is None else arrange_two_sided(w, zero_tol)
    return psi_truncated(ts, mu, max(ts.rank, 1))


def truncation_error_bound(spec, mu, m):
    """Upper bound on ``|psi - psi_m|``.

    Two-sided and decreasing-magnitude spectra use
    ``max(-lambda_{-m-1}, lambda_{m+1}) * sum_{|j| >= m+1} |mu_j|``. Growing
    analytic spectra use their envelope instead:
    ``sum_{n > m} |mu_n| C n^g = |c| C zeta(p - g, m + 1)``.
    """
    if m < 0:
        raise InvalidArgument("m must be >= 0")
    spec, mu = _as_spectrum_input(spec), as_weights(mu)
    if not mu.is_power:
        # finite weights: the tail is a finite sum, evaluate it exactly
        k = max(len(mu.positive), len(mu.negative))
        if k <= m:
            return 0.0
        if isinstance(spec, SpectrumGenerator):
            lam = spec.values(k)[m:]
            return math.fsum(np.abs(mu.positive_weights(k)[m:] * lam).tolist())
        pos = np.abs(mu.positive_weights(k)[m:] * spec.positive_values(k)[m:])
        neg = np.abs(mu.negative_weights(k)[m:] * spec.negative_values(k)[m:])
        return math.fsum(pos.tolist() + neg.tolist())
    if mu.c == 0:
        return 0.0
    if isinstance(spec, TwoSidedSpectrum):
        lead = max(-spec.value(-(m + 1)), spec.value(m + 1))
    elif spec.decreasing_magnitude:
        lead = abs(float(spec.values(m + 1)[m]))
    else:
        return _envelope_tail(spec, mu, m)
    if lead == 0:
        return 0.0
    tail = mu.tail_abs_bound(m)
    if not math.isfinite(tail):
        raise ConvergenceError(f"weights {mu} are not absolutely summable (p <= 1)")
    return lead * tail


def _envelope_tail(spec, mu, m):
    if spec.envelope is None:
        raise ConvergenceError(f"{spec.name} has no growth envelope; cannot bound the tail")
    C, g = spec.envelope
    q = mu.p - g
    if q <= 1:
        raise ConvergenceError(_divergence_reason(spec, mu))
    return abs(mu.c) * C * float(zeta(q, m + 1))


def convergence_check(spec, mu):
    """Whether ``sum mu_n lambda_n`` converges absolutely, by comparison.

    Finite spectra and finite weight lists always converge. Otherwise the
    weights must decay like ``n^-p`` with ``p > g + 1`` where ``|lambda_n| <= C n^g``.
    An unknown growth envelope gives False (and a log message).
    """
    spec, mu = _as_spectrum_input(spec), as_weights(mu)
    if isinstance(spec, TwoSidedSpectrum) or not mu.is_power or mu.c == 0:
        return True
    if spec.envelope is None:
        logger.warning("%s: no growth envelope, convergence cannot be established", spec.name)
        return False
    return bool(mu.p > spec.envelope[1] + 1)


def _divergence_reason(spec, mu):
    if spec.envelope is None:
        return f"{spec.name} has no growth envelope"
    g = spec.envelope[1]
    return (
        f"series diverges for {spec.name} with weights {mu}: "
        f"need decay exponent p > g + 1 = {g + 1:g}, got p = {mu.p:g}"
    )


# -- campaigns -----------------------------------------------------------------


SAMPLERS = ("symmetric", "psd")


def sample_matrix(dim, seed, sampler="symmetric"):
    """Seeded test matrix: uniform symmetric, or PSD ``M M^T / dim``."""
    m = random_symmetric(dim, seed, 1.0)
    if sampler == "symmetric":
        return m
    if sampler == "psd":
        a = m.entries
        return SymmetricMatrix.symmetrized(a @ a.T / dim)
    raise InvalidArgument(f"sampler must be one of {SAMPLERS}, got {sampler!r}")


def _campaign_weights(mu, enforce=True):
    mu = as_weights(mu)
    return mu.require_monotone() if enforce else mu


def _pair(seed, trial, dim, sampler):
    S = sample_matrix(dim, derive_seed(seed, trial, 0), sampler)
    T = sample_matrix(dim, derive_seed(seed, trial, 1), sampler)
    return S, T


def _psi_exact(X, mu):
    return psi_matrix(X, mu)


def verify_sublinearity(dim, trials, mu, seed, tol=1e-9, jobs=1, sampler="symmetric", pairs=None):
    """Check ``psi(S + T) <= psi(S) + psi(T)`` on seeded random pairs.

    ``pairs`` replaces the random sampling with explicit ``(S, T)`` matrices;
    this replay mode skips the monotonicity guard so that known counterexamples
    for non-monotone weights can be exhibited.

    Raises
    ------
    MonotonicityError
        For non-monotone weights in sampling mode.
    """
    mu = _campaign_weights(mu, enforce=pairs is None)
    if pairs is not None:
        pairs = [(SymmetricMatrix(np.asarray(S)), SymmetricMatrix(np.asarray(T))) for S, T in pairs]
        trials = len(pairs)
    else:
        dim = check_positive_int(dim, "dim")
    trials = check_positive_int(trials, "trials")

    def trial(i):
        S, T = pairs[i] if pairs is not None else _pair(seed, i, dim, sampler)
        a, b, ab = _psi_exact(S, mu), _psi_exact(T, mu), _psi_exact(S + T, mu)
        scale = 1.0 + max(abs(a), abs(b), abs(ab))
        witness = {"S": jsonable(S.entries), "T": jsonable(T.entries), "psi_S": a, "psi_T": b, "psi_S_plus_T": ab}
        return TrialResult(ab - (a + b), tol * scale, witness)

    return summarize("sublinearity", run_trials(trial, trials, jobs), trials, tol, seed)


def verify_convexity(dim, trials, mu, seed, tol=1e-9, jobs=1, sampler="symmetric"):
    """Check ``psi(tS + (1-t)T) <= t psi(S) + (1-t) psi(T)`` for ``t ~ U[0, 1]``."""
    mu = _campaign_weights(mu)
    dim = check_positive_int(dim, "dim")
    trials = check_positive_int(trials, "trials")

    def trial(i):
        S, T = _pair(seed, i, dim, sampler)
        t = float(np.random.default_rng(derive_seed(seed, i, 2)).uniform())
        mix = SymmetricMatrix(t * S.entries + (1.0 - t) * T.entries)
        a, b, m = _psi_exact(S, mu), _psi_exact(T, mu), _psi_exact(mix, mu)
        rhs = t * a + (1.0 - t) * b
        scale = 1.0 + max(abs(a), abs(b), abs(m))
        witness = {"S": jsonable(S.entries), "T": jsonable(T.entries), "t": t, "lhs": m, "rhs": rhs}
        return TrialResult(m - rhs, tol * scale, witness)

    return summarize("convexity", run_trials(trial, trials, jobs), trials, tol, seed)


def verify_homogeneity(dim, trials, mu, seed, tol=1e-9, jobs=1, sampler="symmetric", max_alpha=5.0):
    """Check ``psi(alpha S) = alpha psi(S)`` for ``alpha >= 0``.

    For antisymmetric weights (``mu_-j = -mu_j``) each trial also checks
    ``psi(alpha S) = |alpha| psi(S)`` for a negative ``alpha``; for other weight
    families that identity is not claimed and not tested.
    """
    mu = _campaign_weights(mu)
    dim = check_positive_int(dim, "dim")
    trials = check_positive_int(trials, "trials")
    antisymmetric = mu.antisymmetric

    def one(S, base, alpha):
        val = _psi_exact(S * alpha, mu)
        expected = abs(alpha) * base
        scale = 1.0 + max(abs(val), abs(expected))
        witness = {"S": jsonable(S.entries), "alpha": alpha, "psi_alpha_S": val, "expected": expected}
        return TrialResult(abs(val - expected), tol * scale, witness)

    def trial(i):
        S = sample_matrix(dim, derive_seed(seed, i, 0), sampler)
        rng = np.random.default_rng(derive_seed(seed, i, 2))
        base = _psi_exact(S, mu)
        out = [one(S, base, float(rng.uniform(0.0, max_alpha)))]
        if antisymmetric:
            out.append(one(S, base, -float(rng.uniform(0.0, max_alpha))))
        return out

    return summarize("homogeneity", run_trials(trial, trials, jobs), trials, tol, seed)


def verify_spectral_continuity(dim, trials, mu, seed, tol=1e-9, jobs=1, eps=0.01, eig_tol=1e-10, sampler="symmetric"):
    """Perturbation checks for small symmetric ``E`` with ``||E||_2 <= eps``.

    Per trial: (a) ``max_j |lambda_j(S+E) - lambda_j(S)| <= ||E||_2 + eig_tol`` on
    sorted spectra, and (b) ``|psi(S+E) - psi(S)| <= ||E||_2 * sum_{|j|<=dim} |mu_j| + tol``.
    (b) implies lower semicontinuity of ``psi`` along norm-convergent sequences.
    """
    mu = _campaign_weights(mu)
    dim = check_positive_int(dim, "dim")
    trials = check_positive_int(trials, "trials")
    lipschitz = mu.abs_sum(dim)

    def trial(i):
        S = sample_matrix(dim, derive_seed(seed, i, 0), sampler)
        E0 = random_symmetric(dim, derive_seed(seed, i, 1), 1.0)
        size = float(np.random.default_rng(derive_seed(seed, i, 2)).uniform(0.0, 1.0))
        E = E0 * (size * eps / float(np.max(np.abs(eigh(E0).eigenvalues))))
        norm_e = float(np.max(np.abs(eigh(E).eigenvalues)))
        SE = S + E
        shift = float(np.max(np.abs(eigh(SE).eigenvalues - eigh(S).eigenvalues)))
        dpsi = abs(_psi_exact(SE, mu) - _psi_exact(S, mu))
        witness = {"S": jsonable(S.entries), "E": jsonable(E.entries), "norm_E": norm_e}
        return [
            TrialResult(shift - norm_e, eig_tol, {**witness, "part": "eigenvalues", "shift": shift}),
            TrialResult(dpsi - norm_e * lipschitz, tol, {**witness, "part": "psi", "dpsi": dpsi}),
        ]

    return summarize("continuity", run_trials(trial, trials, jobs), trials, tol, seed)


def verify_finite_rank_approximation(spec, mu, m_list, reference_terms=None, tol=1e-12):
    """Check ``|psi - psi_m| <= truncation_error_bound(m)`` along ``m_list``.

    ``psi`` is replaced by a long partial sum whose own tail bound is added to
    the observed gap, so the comparison stays rigorous. The gaps must also
    shrink monotonically with ``m`` (within ``tol``), i.e. ``psi_m`` is Cauchy
    at the bounded rate.

    Raises
    ------
    ConvergenceError
        If the series for ``spec`` and ``mu`` is not known to converge.
    """
    spec, mu = _as_spectrum_input(spec), as_weights(mu)
    if not convergence_check(spec, mu):
        raise ConvergenceError(_divergence_reason(spec, mu))
    m_list = sorted(check_positive_int(m, "m") for m in m_list)
    if not m_list:
        raise InvalidArgument("m_list must not be empty")
    if isinstance(spec, TwoSidedSpectrum):
        ref = psi(spec, mu, max(spec.rank, m_list[-1], 1))
    else:
        terms = reference_terms or max(100 * m_list[-1], 100_000)
        ref = psi(spec, mu, terms)
    results, rows = [], []
    prev_gap = math.inf
    for m in m_list:
        gap = abs(ref.value - psi_truncated(spec, mu, m))
        bound = truncation_error_bound(spec, mu, m)
        slack = tol * (1.0 + abs(ref.value))
        witness = {"m": m, "error": gap, "bound": bound, "reference_tail": ref.tail_bound}
        results.append((m, TrialResult(gap + ref.tail_bound - bound, slack, {**witness, "part": "bound"})))
        results.append((m, TrialResult(gap - prev_gap, slack, {**witness, "part": "monotone"})))
        prev_gap = gap
        rows.append(witness)
    report = summarize("truncation", results, len(m_list), tol, 0)
    # the table is short, so keep every row for plotting, not only violations
    bad = {d["m"] for d in report.details}
    rows = [{**row, "violated": row["m"] in bad} for row in rows]
    return replace(report, details=rows)


def truncation_table(spec, mu, m_list, reference_terms=None):
    """Rows ``(m, |psi - psi_m|, bound)`` for plotting."""
    spec, mu = _as_spectrum_input(spec), as_weights(mu)
    if isinstance(spec, TwoSidedSpectrum):
        ref = psi(spec, mu, max(spec.rank, max(m_list), 1))
    else:
        ref = psi(spec, mu, reference_terms or max(100 * max(m_list), 100_000))
    return [
        (m, abs(ref.value - psi_truncated(spec, mu, m)), truncation_error_bound(spec, mu, m))
        for m in sorted(m_list)
    ]

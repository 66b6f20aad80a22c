"""Majorization cones, Schur convexity checks and the classical example functions.

A function is Schur convex when ``x, y`` nonincreasing with ``y - x`` in the
dual cone of the nonincreasing cone implies ``f(x) <= f(y)``. For symmetric C^1
functions this is equivalent to ``(x_i - x_j)(df/dx_i - df/dx_j) >= 0``.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .campaign import TrialResult, jsonable, run_trials, summarize, trial_rng
from .exceptions import DomainError, InvalidArgument, Overflow
from .validation import as_float_array, check_positive_int

FD_RELATIVE_STEP = 1e-5


def _vector(x):
    v = as_float_array(x, name="vector")
    if v.ndim != 1:
        v = v.reshape(-1)
    if not np.all(np.isfinite(v)):
        raise InvalidArgument("vector components must be finite")
    return v


def in_descending_cone(x):
    """True iff ``x_1 >= x_2 >= ... >= x_n``."""
    v = _vector(x)
    return bool(np.all(v[:-1] >= v[1:]))


def in_dual_cone(y, tol=0.0):
    """True iff every prefix sum of ``y`` is ``>= -tol`` and ``|sum(y)| <= tol``."""
    if tol < 0:
        raise InvalidArgument("tol must be >= 0")
    v = _vector(y)
    prefix = np.cumsum(v)
    return bool(np.all(prefix[:-1] >= -tol) and abs(prefix[-1]) <= tol)


def complete_symmetric(x, r):
    """Complete homogeneous symmetric polynomial: sum of all degree-``r`` monomials.

    Built with the prefix recurrence ``h_k(x_1..x_j) = h_k(x_1..x_{j-1}) + x_j h_{k-1}(x_1..x_j)``.
    ``r = 0`` gives 1.
    """
    if isinstance(r, bool) or not isinstance(r, (int, np.integer)) or r < 0:
        raise InvalidArgument(f"r must be a nonnegative integer, got {r!r}")
    v = _vector(x)
    h = np.zeros(r + 1)
    h[0] = 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        for xj in v:
            for k in range(1, r + 1):
                h[k] += xj * h[k - 1]
    if not np.isfinite(h[r]):
        raise Overflow(f"complete symmetric function of degree {r} overflowed")
    return float(h[r])


# -- scalar functions for the divided-difference construction ------------------


@dataclass(frozen=True)
class ScalarFunction:
    """A differentiable ``f: I -> R`` with optional closed forms.

    ``divided`` is an accurate ``(f(y) - f(x)) / (y - x)`` for ``x != y`` (avoids
    cancellation when ``x`` and ``y`` are close); ``derivative`` may instead be a
    tabulated ``(knots, values)`` pair interpolated linearly.
    """

    name: str
    f: Callable[[float], float]
    derivative: Optional[object] = None
    divided: Optional[Callable[[float, float], float]] = None
    interval: tuple = (-math.inf, math.inf)

    def contains(self, t):
        lo, hi = self.interval
        return lo < t < hi

    def fprime(self, t):
        if callable(self.derivative):
            return float(self.derivative(t))
        if self.derivative is not None:
            knots, values = self.derivative
            return float(np.interp(t, knots, values))
        h = FD_RELATIVE_STEP * (1.0 + abs(t))
        if not (self.contains(t - h) and self.contains(t + h)):
            raise DomainError(f"central difference at {t} leaves {self.interval}")
        return (self.f(t + h) - self.f(t - h)) / (2.0 * h)

    @classmethod
    def tabulated(cls, name, f, knots, values, interval=None):
        knots = np.asarray(knots, dtype=float)
        if interval is None:
            interval = (float(knots[0]), float(knots[-1]))
        return cls(name, f, (knots, np.asarray(values, dtype=float)), None, interval)


def _exp_divided(x, y):
    d = y - x
    return math.exp(x) * math.expm1(d) / d


SCALAR_FUNCTIONS = {
    "cube": ScalarFunction(
        "cube", lambda t: t**3, lambda t: 3 * t**2, lambda x, y: x * x + x * y + y * y
    ),
    "quartic": ScalarFunction(
        "quartic",
        lambda t: t**4,
        lambda t: 4 * t**3,
        lambda x, y: (x + y) * (x * x + y * y),
    ),
    "exp": ScalarFunction("exp", math.exp, math.exp, _exp_divided),
}


def merkle_divided_difference(f_spec, x, y):
    """``(f(y) - f(x)) / (y - x)``, or ``f'(x)`` on the diagonal.

    Without an analytic derivative the diagonal value is a central difference
    with step ``1e-5 * (1 + |x|)``.
    """
    if isinstance(f_spec, str):
        f_spec = SCALAR_FUNCTIONS[f_spec]
    x, y = float(x), float(y)
    if not (f_spec.contains(x) and f_spec.contains(y)):
        raise DomainError(f"({x}, {y}) outside the interval {f_spec.interval} of {f_spec.name}")
    if x == y:
        return f_spec.fprime(x)
    if f_spec.divided is not None:
        return float(f_spec.divided(x, y))
    return (f_spec.f(y) - f_spec.f(x)) / (y - x)


# -- symmetric function specs --------------------------------------------------


class Kind(str, Enum):
    POWER_SUM = "powsum"
    COMPLETE = "csym"
    COMPLETE_RATIO = "csym-ratio"
    MERKLE = "merkle"
    PRODUCT = "prod"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SymmetricFunctionSpec:
    """A permutation-symmetric function on an open box ``(low, high)^n``.

    Build with :meth:`parse` from the ``kind:param`` strings used on the command
    line (``csym:3``, ``csym-ratio:2``, ``powsum:2``, ``merkle:cube``, ``prod``),
    or with :meth:`custom` around an arbitrary callable.
    """

    kind: Kind
    param: object = None
    domain: tuple = (-math.inf, math.inf)
    func: Optional[Callable] = field(default=None, compare=False)
    arity: Optional[int] = None

    @classmethod
    def parse(cls, text, domain=None):
        kind_text, _, param = text.partition(":")
        try:
            kind = Kind(kind_text.strip())
        except ValueError:
            raise InvalidArgument(f"unknown function kind {kind_text!r}") from None
        if kind is Kind.CUSTOM:
            raise InvalidArgument("custom functions cannot be parsed from text")
        if kind is Kind.MERKLE:
            if param not in SCALAR_FUNCTIONS:
                raise InvalidArgument(
                    f"merkle needs one of {sorted(SCALAR_FUNCTIONS)}, got {param!r}"
                )
            fs = SCALAR_FUNCTIONS[param]
            return cls(kind, fs, domain or fs.interval, arity=2)
        if kind is Kind.PRODUCT:
            return cls(kind, None, domain or (0.0, math.inf))
        try:
            value = float(param) if kind is Kind.POWER_SUM else int(param)
        except ValueError:
            raise InvalidArgument(f"bad parameter {param!r} for {kind.value}") from None
        if kind is Kind.POWER_SUM:
            if value < 1:
                raise InvalidArgument("powsum exponent must be >= 1")
            even_int = value == int(value) and int(value) % 2 == 0
            default = (-math.inf, math.inf) if even_int else (0.0, math.inf)
            return cls(kind, value, domain or default)
        if value < 1:
            raise InvalidArgument(f"{kind.value} degree must be >= 1")
        return cls(kind, value, domain or (0.0, math.inf))

    @classmethod
    def custom(cls, func, domain=(-math.inf, math.inf), name=None):
        return cls(Kind.CUSTOM, name, tuple(domain), func)

    def __str__(self):
        if self.kind is Kind.MERKLE:
            return f"merkle:{self.param.name}"
        if self.param is None:
            return self.kind.value
        return f"{self.kind.value}:{self.param}"

    def contains(self, x):
        lo, hi = self.domain
        v = np.asarray(x, dtype=float)
        return bool(np.all((v > lo) & (v < hi)))

    def __call__(self, x):
        v = _vector(x)
        if not self.contains(v):
            raise DomainError(f"{v.tolist()} is outside the domain {self.domain} of {self}")
        if self.arity is not None and v.size != self.arity:
            raise InvalidArgument(f"{self} takes exactly {self.arity} components")
        kind = self.kind
        if kind is Kind.POWER_SUM:
            return float(np.sum(v**self.param))
        if kind is Kind.COMPLETE:
            return complete_symmetric(v, self.param)
        if kind is Kind.COMPLETE_RATIO:
            return complete_symmetric(v, self.param) / complete_symmetric(v, self.param - 1)
        if kind is Kind.MERKLE:
            return merkle_divided_difference(self.param, v[0], v[1])
        if kind is Kind.PRODUCT:
            return float(np.prod(v))
        return float(self.func(v))


def as_function_spec(f):
    if isinstance(f, SymmetricFunctionSpec):
        return f
    if isinstance(f, str):
        return SymmetricFunctionSpec.parse(f)
    if callable(f):
        return SymmetricFunctionSpec.custom(f)
    raise InvalidArgument(f"cannot interpret {f!r} as a function spec")


# -- checks --------------------------------------------------------------------


class Status(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class CheckOutcome:
    status: Status
    gap: float = 0.0

    def __bool__(self):
        return self.status is not Status.VIOLATED


def isotone_pair_check(f, x, y, tol=1e-9):
    """Check ``f(x) <= f(y)`` for a majorization pair.

    ``gap`` is ``f(x) - f(y)``; the pair holds iff ``gap <= tol * (1 + |f(y)|)``.
    Pairs with ``x`` or ``y`` not nonincreasing, or ``y - x`` outside the dual
    cone (to ``tol`` scaled by the vectors' magnitude), are inapplicable.
    """
    f = as_function_spec(f)
    xv, yv = _vector(x), _vector(y)
    if xv.shape != yv.shape:
        raise InvalidArgument("x and y must have the same length")
    scale = 1.0 + float(np.max(np.abs(np.concatenate([xv, yv]))))
    if not (in_descending_cone(xv) and in_descending_cone(yv)):
        return CheckOutcome(Status.INAPPLICABLE)
    if not in_dual_cone(yv - xv, tol * scale * xv.size):
        return CheckOutcome(Status.INAPPLICABLE)
    fx, fy = f(xv), f(yv)
    gap = fx - fy
    if gap <= tol * (1.0 + abs(fy)):
        return CheckOutcome(Status.HOLDS, gap)
    return CheckOutcome(Status.VIOLATED, gap)


def central_gradient(f, x, rel_step=FD_RELATIVE_STEP):
    f = as_function_spec(f)
    v = _vector(x)
    grad = np.empty_like(v)
    for i in range(v.size):
        h = rel_step * (1.0 + abs(v[i]))
        up, down = v.copy(), v.copy()
        up[i] += h
        down[i] -= h
        if not (f.contains(up) and f.contains(down)):
            raise DomainError(f"finite-difference stencil at component {i} leaves {f.domain}")
        grad[i] = (f(up) - f(down)) / (2.0 * h)
    return grad


def criterion_products(f, x, rel_step=FD_RELATIVE_STEP):
    """``(x_i - x_j)(g_i - g_j)`` for all ``i < j`` with a central-difference gradient ``g``."""
    v = _vector(x)
    g = central_gradient(f, v, rel_step)
    i, j = np.triu_indices(v.size, 1)
    return (v[i] - v[j]) * (g[i] - g[j])


def schur_criterion_check(f, x, h=FD_RELATIVE_STEP, tol=1e-9):
    """Derivative criterion at one point.

    ``h`` is the relative step: component ``i`` is perturbed by ``h * (1 + |x_i|)``.
    Holds iff every product is ``>= -tol * (1 + |f(x)|)``; ``gap`` is the smallest
    product (0 for a single component).
    """
    f = as_function_spec(f)
    if not h > 0:
        raise InvalidArgument("h must be > 0")
    v = _vector(x)
    if not f.contains(v):
        raise DomainError(f"{v.tolist()} is outside the domain {f.domain} of {f}")
    products = criterion_products(f, v, h)
    worst = float(products.min()) if products.size else 0.0
    if worst >= -tol * (1.0 + abs(f(v))):
        return CheckOutcome(Status.HOLDS, worst)
    return CheckOutcome(Status.VIOLATED, worst)


# -- sampling and campaigns ----------------------------------------------------


def majorized_pair(rng, n, low, high, mixes=3):
    """Sample ``(x, y)``, both nonincreasing in ``[low, high]``, with ``y - x`` in the dual cone.

    ``y`` is uniform then sorted; ``x`` is ``y`` pushed through a few random
    convex combinations with permutations of itself (a doubly stochastic map),
    then sorted. Doubly stochastic images are exactly the vectors majorized by
    ``y``, so the precondition holds up to rounding.
    """
    y = np.sort(rng.uniform(low, high, size=n))[::-1]
    x = y.copy()
    for _ in range(mixes):
        t = rng.uniform()
        x = t * x + (1.0 - t) * x[rng.permutation(n)]
    x = np.clip(np.sort(x)[::-1], y[-1], y[0])
    return x, y


def interior_point(rng, n, low, high):
    return rng.uniform(low, high, size=n)


def isotone_campaign(f, n, trials, seed, low, high, tol=1e-9, jobs=1):
    """Sample majorization pairs in ``(low, high)^n`` and count isotonicity failures."""
    f = as_function_spec(f)
    n = check_positive_int(n, "n")
    trials = check_positive_int(trials, "trials")

    def trial(i):
        x, y = majorized_pair(trial_rng(seed, i), n, low, high)
        fx, fy = f(x), f(y)
        out = isotone_pair_check(f, x, y, tol)
        excess = fx - fy
        if out.status is Status.INAPPLICABLE:
            # a sampler bug, not a property failure; surface it loudly
            return TrialResult(math.inf, 0.0, {"x": jsonable(x), "y": jsonable(y), "inapplicable": True})
        return TrialResult(excess, tol * (1.0 + abs(fy)), {"x": jsonable(x), "y": jsonable(y)})

    results = run_trials(trial, trials, jobs)
    return summarize(f"isotone[{f}]", results, trials, tol, seed)


def criterion_campaign(f, n, trials, seed, low, high, tol=1e-9, h=FD_RELATIVE_STEP, jobs=1):
    """Evaluate the derivative criterion at seeded interior points of ``(low, high)^n``."""
    f = as_function_spec(f)
    n = check_positive_int(n, "n")
    trials = check_positive_int(trials, "trials")
    width = high - low
    # keep the stencil inside the open box
    margin = 2.0 * h * (1.0 + max(abs(low), abs(high)))
    lo, hi = low + min(margin, width / 4), high - min(margin, width / 4)

    def trial(i):
        x = interior_point(trial_rng(seed, i), n, lo, hi)
        products = criterion_products(f, x, h)
        worst = float(products.min()) if products.size else 0.0
        return TrialResult(-worst, tol * (1.0 + abs(f(x))), {"x": jsonable(x)})

    results = run_trials(trial, trials, jobs)
    return summarize(f"schur-criterion[{f}]", results, trials, tol, seed)

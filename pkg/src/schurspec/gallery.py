"""Example operators: finite-difference discretizations and closed-form spectra.

Discretized operators return their stiffness matrix ``K`` together with an
:class:`OperatorSpec`. For the compact solution operators (Sturm-Liouville,
periodic Schrodinger) the spectrum of ``S`` is the reciprocal of the spectrum of
``K``; :func:`solution_spectrum` computes it without forming ``K^-1``.
"""

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    InvalidArgument,
    InvalidParameter,
    NoEigenvalues,
    NonPositiveCoefficient,
    SingularOperator,
)
from .matrixcore import Spectrum, SymmetricMatrix, TridiagonalMatrix, eigh, eigh_tridiagonal
from .spectralfun import SpectrumGenerator
from .validation import as_float_array, check_positive_int, check_positive_real

MIN_GRID = 3


@dataclass(frozen=True)
class OperatorSpec:
    """Descriptor of a gallery operator.

    ``kind`` is one of ``sturm_liouville``, ``periodic_schrodinger``,
    ``dirichlet_schrodinger`` or ``analytic``; ``shift`` is the constant added to
    the potential to make the discrete operator positive.
    """

    kind: str
    params: dict = field(default_factory=dict)
    shift: float = 0.0


def _samples(f, points, name):
    """Evaluate a coefficient given as a constant, a callable or precomputed samples."""
    if callable(f):
        vals = np.asarray(f(points), dtype=float)
        vals = np.broadcast_to(vals, points.shape).copy()
    else:
        vals = as_float_array(f, name=name)
        if vals.ndim == 0:
            vals = np.full(points.shape, float(vals))
        elif vals.shape != points.shape:
            raise InvalidArgument(f"{name} needs {points.size} samples, got {vals.size}")
    if not np.all(np.isfinite(vals)):
        raise InvalidArgument(f"{name} samples must be finite")
    return vals


def sturm_liouville_grid(L, N):
    """Interior nodes and cell midpoints of the uniform grid with ``h = L / (N + 1)``."""
    h = L / (N + 1)
    nodes = h * np.arange(1, N + 1)
    midpoints = h * (np.arange(N + 1) + 0.5)
    return nodes, midpoints, h


def build_sturm_liouville(p, q, L, N):
    """Stiffness matrix of ``-(p u')' + (q + C) u`` with ``u(0) = u(L) = 0``.

    ``p`` is sampled at the ``N + 1`` cell midpoints ``(i + 1/2) h`` and ``q`` at
    the ``N`` interior nodes ``i h`` (``h = L / (N + 1)``); both may also be
    constants or callables. ``C = max(0, -min q)``.

    Raises
    ------
    NonPositiveCoefficient
        If any ``p`` sample is ``<= 0``.
    """
    L = check_positive_real(L, "L")
    N = check_positive_int(N, "N", MIN_GRID)
    nodes, midpoints, h = sturm_liouville_grid(L, N)
    pm = _samples(p, midpoints, "p")
    qn = _samples(q, nodes, "q")
    if np.any(pm <= 0):
        raise NonPositiveCoefficient(f"p must be > 0, min sample is {pm.min():g}")
    shift = max(0.0, -float(qn.min()))
    diag = (pm[:-1] + pm[1:]) / h**2 + qn + shift
    off = -pm[1:-1] / h**2
    spec = OperatorSpec("sturm_liouville", {"L": L, "N": N}, shift)
    return TridiagonalMatrix(diag, off), spec


def periodic_grid(N):
    h = 2.0 * math.pi / N
    return h * np.arange(N), h


def build_periodic_schrodinger(V, N):
    """Stiffness matrix of ``-u'' + (V + C) u`` on ``[0, 2 pi)`` with periodic ends.

    ``V`` is sampled at ``x_j = 2 pi j / N``. ``C = 0`` when ``min V > 0`` and
    ``1 - min V`` otherwise, so the shifted potential is at least 1.

    Raises
    ------
    SingularOperator
        If the shifted matrix is not numerically positive definite.
    """
    N = check_positive_int(N, "N", MIN_GRID)
    x, h = periodic_grid(N)
    v = _samples(V, x, "V")
    vmin = float(v.min())
    shift = 0.0 if vmin > 0 else 1.0 - vmin
    K = np.diag(2.0 / h**2 + v + shift)
    idx = np.arange(N)
    K[idx, (idx + 1) % N] += -1.0 / h**2
    K[(idx + 1) % N, idx] += -1.0 / h**2
    K = SymmetricMatrix(K)
    spec = OperatorSpec("periodic_schrodinger", {"N": N}, shift)
    return K, spec


def build_dirichlet_schrodinger(V, N):
    """Matrix of ``u'' + V u`` on ``(0, 1)`` with ``u(0) = u(1) = 0``.

    The sign follows ``H_0 = d^2/dx^2``, so eigenvalues are near ``-n^2 pi^2``.
    ``V`` is sampled at the interior nodes ``i / (N + 1)``.
    """
    N = check_positive_int(N, "N", MIN_GRID)
    nodes, _, h = sturm_liouville_grid(1.0, N)
    v = _samples(V, nodes, "V")
    diag = -2.0 / h**2 + v
    off = np.full(N - 1, 1.0 / h**2)
    spec = OperatorSpec("dirichlet_schrodinger", {"N": N}, 0.0)
    return TridiagonalMatrix(diag, off), spec


SOLUTION_BISECTION_RTOL = 4.0 * np.finfo(float).eps


def solution_spectrum(K, spec=None, select=None):
    """Spectrum of the solution operator ``S = K^-1``, i.e. reciprocals of ``K``'s eigenvalues.

    ``select=(start, stop)`` picks positions of the nonincreasing ``S``-spectrum,
    which are the smallest eigenvalues of ``K``. Those are refined close to
    machine precision, since inverting turns ``K``'s absolute error into a
    relative error of ``S``.
    """
    if isinstance(K, TridiagonalMatrix):
        n = K.n
        if select is not None:
            start, stop = select
            select = (n - stop, n - start)
        w = eigh_tridiagonal(K, select, rtol=SOLUTION_BISECTION_RTOL).eigenvalues
        norm = K.inf_norm()
    else:
        w = eigh(K).eigenvalues
        n = w.size
        if select is not None:
            w = w[n - select[1] : n - select[0]]
        norm = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and w[-1] <= 1e-12 * norm:
        raise SingularOperator(
            f"{spec.kind if spec else 'operator'} is not positive definite "
            f"(smallest eigenvalue {w[-1]:.3g})"
        )
    return Spectrum(1.0 / w[::-1])


def operator_spectrum(K, select=None):
    """Spectrum of ``K`` itself (used for the Dirichlet Schrodinger operator)."""
    if isinstance(K, TridiagonalMatrix):
        return eigh_tridiagonal(K, select)
    w = eigh(K).eigenvalues
    return Spectrum(w if select is None else w[select[0] : select[1]])


# -- closed-form spectra -------------------------------------------------------


def _positive(params, *names):
    out = []
    for name in names:
        if name not in params:
            raise InvalidParameter(f"missing parameter {name!r}")
        try:
            v = float(params[name])
        except (TypeError, ValueError):
            raise InvalidParameter(f"{name} must be a number, got {params[name]!r}") from None
        if not (math.isfinite(v) and v > 0):
            raise InvalidParameter(f"{name} must be > 0, got {params[name]!r}")
        out.append(v)
    return out


def _hydrogen(params):
    alpha = float(params.get("alpha", 0.0))
    if not alpha > 0:
        raise NoEigenvalues("no eigenvalues for alpha<0" if alpha < 0 else "alpha must be > 0")
    return SpectrumGenerator(
        "hydrogen", lambda n: alpha / (4.0 * n**2), (alpha / 4.0, -2.0), True, {"alpha": alpha}
    )


def _sturm_liouville_flat(params):
    (L,) = _positive({"L": 1.0, **params}, "L")
    C = L**2 / math.pi**2
    return SpectrumGenerator("sl", lambda n: C / n**2, (C, -2.0), True, {"L": L})


def _well(params):
    full = {"hbar": 1.0, "m": 1.0, **params}
    if "width" not in full:
        if "a" in full or "b" in full:
            a, b = _positive(full, "a", "b")
            full["width"] = a + b
        else:
            full["width"] = math.pi
    hbar, m, width = _positive(full, "hbar", "m", "width")
    C = hbar**2 * math.pi**2 / (2.0 * m * width**2)
    return SpectrumGenerator(
        "well", lambda n: -C * n**2, (C, 2.0), False, {"hbar": hbar, "m": m, "width": width}
    )


def _oscillator(params):
    if "hbar_omega" in params:
        (hw,) = _positive(params, "hbar_omega")
    else:
        hbar, omega = _positive({"hbar": 1.0, "omega": 1.0, **params}, "hbar", "omega")
        hw = hbar * omega
    return SpectrumGenerator(
        "oscillator", lambda n: -hw * (n + 0.5), (1.5 * hw, 1.0), False, {"hbar_omega": hw}
    )


def _standing(params):
    hbar, L = _positive({"hbar": 1.0, **params}, "hbar", "L")
    C = 2.0 * hbar * math.pi / L
    return SpectrumGenerator("standing", lambda n: -C * n, (C, 1.0), False, {"hbar": hbar, "L": L})


def _two_electron(params):
    alpha, beta = _positive(params, "alpha", "beta")
    # bounded, nonincreasing, but accumulating at max(alpha, beta)/4 rather than 0
    return SpectrumGenerator(
        "twoelectron",
        None,
        ((alpha + beta) / 4.0, 0.0),
        True,
        {"alpha": alpha, "beta": beta},
        prefix=lambda m: merge_double_spectrum(alpha, beta, m),
    )


def _synthetic(params):
    g, c = _positive({"c": 1.0, **params}, "g", "c")
    return synthetic_unbounded_spectrum(g, c)


ANALYTIC = {
    "hydrogen": _hydrogen,
    "sl": _sturm_liouville_flat,
    "well": _well,
    "oscillator": _oscillator,
    "standing": _standing,
    "twoelectron": _two_electron,
    "synthetic": _synthetic,
}


def analytic_spectrum(name, **params):
    """Closed-form spectrum generator.

    ============  ==========================================  ============  =====
    name          lambda_n, n >= 1                            parameters    g
    ============  ==========================================  ============  =====
    hydrogen      alpha / (4 n^2)                             alpha > 0     -2
    sl            L^2 / (n^2 pi^2)                            L             -2
    well          -hbar^2 pi^2 n^2 / (2 m width^2)            hbar, m,      2
                                                              width or a, b
                                                              (default 1,
                                                              1, pi)
    oscillator    -hbar_omega (n + 1/2)                       hbar_omega    1
    standing      -2 hbar pi n / L                            hbar, L       1
    twoelectron   merged alpha/(4n^2) + beta/(4m^2)           alpha, beta   0
    synthetic     -c n^g                                      g, c          g
    ============  ==========================================  ============  =====

    The oscillator index starts at 1, so ``lambda_1 = -3 hbar_omega / 2``.

    Raises
    ------
    NoEigenvalues
        For hydrogen with ``alpha <= 0``.
    InvalidParameter
        For unknown names or invalid parameters.
    """
    try:
        factory = ANALYTIC[name]
    except KeyError:
        raise InvalidParameter(f"unknown analytic spectrum {name!r}; choose from {sorted(ANALYTIC)}") from None
    return factory(params)


def synthetic_unbounded_spectrum(g, c=1.0):
    """``lambda_n = -c n^g``: a stand-in for spectra tending to minus infinity."""
    g = check_positive_real(g, "g")
    c = check_positive_real(c, "c")
    return SpectrumGenerator("synthetic", lambda n: -c * n**g, (c, g), False, {"g": g, "c": c})


def merge_double_spectrum(alpha, beta, count, return_indices=False):
    """The ``count`` largest values of ``alpha/(4n^2) + beta/(4m^2)``, ``n, m >= 1``.

    Best-first expansion of the lattice from ``(1, 1)``: each popped ``(n, m)``
    pushes ``(n+1, m)`` and ``(n, m+1)``, both no larger. Ties pop in
    lexicographic ``(n, m)`` order.
    """
    alpha, beta = _positive({"alpha": alpha, "beta": beta}, "alpha", "beta")
    count = check_positive_int(count, "count")

    def value(n, m):
        return alpha / (4.0 * n * n) + beta / (4.0 * m * m)

    heap = [(-value(1, 1), 1, 1)]
    seen = {(1, 1)}
    values, indices = [], []
    while len(values) < count:
        negv, n, m = heapq.heappop(heap)
        values.append(-negv)
        indices.append((n, m))
        for nb in ((n + 1, m), (n, m + 1)):
            if nb not in seen:
                seen.add(nb)
                heapq.heappush(heap, (-value(*nb), *nb))
    values = np.array(values)
    return (values, indices) if return_indices else values

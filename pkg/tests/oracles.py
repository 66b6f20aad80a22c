"""Independent reference computations used by the tests.

Nothing here imports schurspec; each oracle uses a different route to the
answer than the library does.
"""

import heapq
import itertools
import math

import mpmath
import numpy as np
import scipy.linalg


def lu_det(a):
    """Determinant from the LU factors."""
    p, l, u = scipy.linalg.lu(np.asarray(a, dtype=float))
    return float(np.linalg.det(p)) * float(np.prod(np.diag(u)))


def charpoly_roots(a, grid=4001, tol=1e-14):
    """Eigenvalues of a symmetric matrix as sign changes of det(a - tI), descending.

    Brackets come from a fine grid over the Gershgorin interval; each is refined
    by plain bisection on the determinant. The grid is refined until all n
    roots are separated.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    r = np.sum(np.abs(a), axis=1) - np.abs(np.diag(a))
    lo, hi = float(np.min(np.diag(a) - r)) - 1.0, float(np.max(np.diag(a) + r)) + 1.0
    eye = np.eye(n)

    def p(t):
        return lu_det(a - t * eye)

    ts = np.linspace(lo, hi, grid)
    vals = np.array([p(t) for t in ts])
    roots = []
    for i in range(grid - 1):
        if vals[i] == 0.0:
            roots.append(ts[i])
            continue
        if vals[i] * vals[i + 1] < 0:
            x0, x1, f0 = ts[i], ts[i + 1], vals[i]
            while x1 - x0 > tol * max(1.0, abs(x0)):
                xm = 0.5 * (x0 + x1)
                fm = p(xm)
                if fm == 0.0:
                    x0 = x1 = xm
                    break
                if f0 * fm < 0:
                    x1 = xm
                else:
                    x0, f0 = xm, fm
            roots.append(0.5 * (x0 + x1))
    if len(roots) < n and grid < 10**6:
        return charpoly_roots(a, 4 * grid, tol)
    return np.sort(np.array(roots))[::-1]


def complete_symmetric_brute(x, r):
    """Sum of all degree-r monomials by enumerating multisets of indices."""
    return math.fsum(
        math.prod(x[i] for i in idx)
        for idx in itertools.combinations_with_replacement(range(len(x)), r)
    )


def merged_double_brute(alpha, beta, count, box=None):
    """Largest ``count`` values of alpha/(4n^2) + beta/(4m^2) over an n, m box."""
    box = box or count
    vals = [alpha / (4.0 * n * n) + beta / (4.0 * m * m) for n in range(1, box + 1) for m in range(1, box + 1)]
    return heapq.nlargest(count, vals)


def oscillator_psi(p=5, hbar_omega=1.0, dps=30):
    """sum_{n>=1} -hbar_omega (n + 1/2) n^-p by mpmath, as a direct sum and via zeta."""
    mpmath.mp.dps = dps
    direct = mpmath.nsum(lambda n: -hbar_omega * (n + mpmath.mpf(1) / 2) * n ** (-p), [1, mpmath.inf])
    closed = -hbar_omega * (mpmath.zeta(p - 1) + mpmath.zeta(p) / 2)
    return float(direct), float(closed)


def power_series_sum(coeff, p, start=1, dps=30):
    """sum_{n>=start} coeff(n) n^-p by mpmath.nsum."""
    mpmath.mp.dps = dps
    return float(mpmath.nsum(lambda n: coeff(n) * n ** (-p), [start, mpmath.inf]))


def tail_sum(f, start, count):
    """Explicit partial sum of f(n) for n in [start, start + count)."""
    n = np.arange(start, start + count, dtype=float)
    return math.fsum(f(n).tolist())


def dirichlet_laplacian_eigs(n, h):
    """Eigenvalues of tridiag(-1, 2, -1)/h^2 of size n, descending (sine basis)."""
    k = np.arange(1, n + 1)
    return np.sort((2.0 / h**2) * (1.0 - np.cos(k * np.pi / (n + 1))))[::-1]


def periodic_laplacian_eigs(n, h, shift=0.0):
    """Eigenvalues of the circulant -D2 + shift on n points, descending (Fourier basis)."""
    k = np.arange(n)
    return np.sort(shift + (2.0 / h**2) * (1.0 - np.cos(2.0 * np.pi * k / n)))[::-1]

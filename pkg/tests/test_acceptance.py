"""Acceptance criteria, one test per criterion.

Each test prints a single ``AC<n> PASS|FAIL`` line (also under pytest's output
capture) and then asserts. Run directly with ``python3 tests/test_acceptance.py``
for just the summary lines.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from schurspec import gallery, majorization, matrixcore, spectralfun  # noqa: E402
from schurspec.spectralfun import WeightSequence  # noqa: E402

TSAP2 = WeightSequence.parse("tsap:1:2")
OSP5 = WeightSequence.parse("osp:1:5")


def ac1():
    """Sturm-Liouville p=1, q=0, L=1, N=2000: top 10 within 1% of L^2/(k^2 pi^2), < 10 s."""
    K, spec = gallery.build_sturm_liouville(1.0, 0.0, 1.0, 2000)
    w = gallery.solution_spectrum(K, spec, (0, 10)).eigenvalues
    k = np.arange(1, 11)
    rel = np.max(np.abs(w - 1 / (k**2 * math.pi**2)) * k**2 * math.pi**2)
    return rel <= 0.01, f"max rel err {rel:.2e}", 10.0


def ac2():
    """trace(A A^T X) <= top-3 sum over 100 matrices x 500 frames, attained at eigenvectors, < 30 s."""
    r = matrixcore.verify_trace_sup(6, 3, 100, seed=0, tol=1e-9, frames=500)
    return r.passed and r.trials == 100, f"violations {r.violations}, max excess {r.max_violation:.1e}", 30.0


def ac3():
    """Sublinearity on 1000 pairs (dim 12, tsap:1:2) and the non-monotone witness flagged, < 60 s."""
    r = spectralfun.verify_sublinearity(12, 1000, TSAP2, seed=1, tol=1e-9)
    witness = spectralfun.verify_sublinearity(
        None, None, WeightSequence.finite([0.0, 1.0]), seed=0, pairs=[(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))]
    )
    ok = r.passed and r.trials == 1000 and not witness.passed and witness.violations == 1
    return ok, f"campaign violations {r.violations}, witness flagged {not witness.passed}", 60.0


def ac4():
    """Convexity and homogeneity, 1000 trials each, dim 12; the |alpha| law only for antisymmetric weights."""
    reports = [
        spectralfun.verify_convexity(12, 1000, TSAP2, seed=2),
        spectralfun.verify_convexity(12, 1000, WeightSequence.parse("osp:1:1.5"), seed=3, sampler="psd"),
        spectralfun.verify_homogeneity(12, 1000, TSAP2, seed=4),  # alpha >= 0 and alpha < 0
        spectralfun.verify_homogeneity(12, 1000, WeightSequence.parse("osp:1:2"), seed=5),  # alpha >= 0 only
    ]
    bad = sum(r.violations for r in reports)
    return all(r.passed for r in reports), f"violations {bad} over {len(reports)} campaigns", None


def ac5():
    """500 trials, dim 10, ||E|| <= 0.01: Weyl shift <= ||E|| + 1e-10 and Lipschitz psi bound + 1e-9."""
    r = spectralfun.verify_spectral_continuity(10, 500, TSAP2, seed=6, tol=1e-9, eps=0.01, eig_tol=1e-10)
    return r.passed and r.trials == 500, f"violations {r.violations}", None


def ac6():
    """Truncation bound for hydrogen (alpha=4) and oscillator with osp:1:5; psi(1e4 terms) vs oracle to 1e-6."""
    m_list = [5, 10, 50, 100, 500]
    hyd = gallery.analytic_spectrum("hydrogen", alpha=4)
    osc = gallery.analytic_spectrum("oscillator", hbar_omega=1)
    reports = [spectralfun.verify_finite_rank_approximation(g, OSP5, m_list) for g in (hyd, osc)]
    hyd_exact = oracles.power_series_sum(lambda n: n**-2, 5)  # sum n^-7 = zeta(7)
    _, osc_exact = oracles.oscillator_psi(5, 1.0)
    gaps = [
        abs(spectralfun.psi(hyd, OSP5, 10_000).value - hyd_exact),
        abs(spectralfun.psi(osc, OSP5, 10_000).value - osc_exact),
    ]
    ok = all(r.passed for r in reports) and max(gaps) <= 1e-6
    return ok, f"bound violations {sum(r.violations for r in reports)}, oracle gaps {gaps[0]:.1e}/{gaps[1]:.1e}", None


def ac7():
    """V(x)=x on (0,1), N=4000: |lambda_n + n^2 pi^2 - 1/2| <= 0.1 for n = 5..15, < 10 s."""
    K, _ = gallery.build_dirichlet_schrodinger(lambda x: x, 4000)
    w = gallery.operator_spectrum(K, (0, 15)).eigenvalues
    n = np.arange(5, 16)
    dev = np.max(np.abs(w[4:15] + n**2 * math.pi**2 - 0.5))
    return dev <= 0.1, f"max deviation {dev:.3e}", 10.0


def ac8():
    """c_r (r<=4, n<=6) and c_r/c_{r-1} pass the criterion at 1000 points in (0.5, 5)^n; x1 x2 flagged."""
    bad, runs = 0, 0
    for n in range(2, 7):
        for r in range(1, 5):
            specs = [f"csym:{r}"] + ([f"csym-ratio:{r}"] if r >= 2 else [])
            for text in specs:
                rep = majorization.criterion_campaign(text, n, 1000, seed=100 * n + r, low=0.5, high=5.0, tol=1e-9)
                bad += rep.violations
                runs += 1
    concave = majorization.criterion_campaign("prod", 2, 1000, seed=7, low=0.5, high=5.0, tol=1e-9)
    ok = bad == 0 and concave.violations == 1000
    return ok, f"{runs} campaigns, violations {bad}; x1*x2 flagged {concave.violations}/1000", None


def ac9():
    """Davis unitary invariance, 200 trials, dim 8, |diff| <= 1e-9 scale."""
    reports = [
        matrixcore.verify_unitary_invariance(8, 200, TSAP2.positive_weights(8), seed=8, tol=1e-9),
        matrixcore.verify_unitary_invariance(8, 200, np.linspace(1, -1, 8), seed=9, tol=1e-9),
    ]
    return all(r.passed and r.trials == 200 for r in reports), f"violations {sum(r.violations for r in reports)}", None


def ac10():
    """eigh vs char-poly oracle (1e-8, 50 x 5x5); tridiagonal vs dense (1e-9, n<=200); merge vs brute force."""
    e1 = max(
        float(np.max(np.abs(matrixcore.eigh(X).eigenvalues - oracles.charpoly_roots(X.entries))))
        for X in (matrixcore.random_symmetric(5, s) for s in range(50))
    )
    e2 = 0.0
    rng = np.random.default_rng(10)
    for n in (1, 2, 3, 10, 50, 100, 200):
        T = matrixcore.TridiagonalMatrix(rng.uniform(-5, 5, n), rng.uniform(-3, 3, n - 1))
        dense = matrixcore.eigh(T.to_dense()).eigenvalues
        e2 = max(e2, float(np.max(np.abs(matrixcore.eigh_tridiagonal(T).eigenvalues - dense))))
    merge_ok = all(
        np.allclose(gallery.merge_double_spectrum(a, b, c), oracles.merged_double_brute(a, b, c), rtol=1e-15, atol=0)
        for a, b, c in [(4, 4, 1000), (1, 100, 1000), (100, 1, 1000), (7.5, 0.3, 500), (4, 400, 2)]
    )
    ok = e1 <= 1e-8 and e2 <= 1e-9 and merge_ok
    return ok, f"charpoly err {e1:.1e}, tridiagonal err {e2:.1e}, merge match {merge_ok}", None


CRITERIA = [ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10]


def evaluate(fn):
    start = time.perf_counter()
    ok, detail, limit = fn()
    elapsed = time.perf_counter() - start
    in_time = limit is None or elapsed < limit
    timing = f"{elapsed:.1f}s" + (f" (limit {limit:.0f}s)" if limit else "")
    line = f"{fn.__name__.upper()} {'PASS' if ok and in_time else 'FAIL'}: {fn.__doc__.splitlines()[0]} [{detail}; {timing}]"
    return ok and in_time, line


@pytest.mark.parametrize("fn", CRITERIA, ids=[f.__name__ for f in CRITERIA])
def test_acceptance(fn, capsys):
    ok, line = evaluate(fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(fn) for fn in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)

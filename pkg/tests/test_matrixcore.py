import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from schurspec import matrixcore as mc
from schurspec.exceptions import InvalidArgument, InvalidMatrix

import oracles


def sym(n, seed):
    return mc.random_symmetric(n, seed)


def test_eigh_diagonal():
    assert mc.eigh(np.diag([3.0, 1.0, 2.0])).eigenvalues.tolist() == [3.0, 2.0, 1.0]


def test_eigh_swap():
    np.testing.assert_allclose(mc.eigh([[0.0, 1.0], [1.0, 0.0]]).eigenvalues, [1.0, -1.0], atol=1e-15)


@pytest.mark.parametrize("seed", range(10))
def test_eigh_matches_charpoly_oracle(seed):
    X = sym(5, seed)
    np.testing.assert_allclose(mc.eigh(X).eigenvalues, oracles.charpoly_roots(X.entries), atol=1e-8)


def test_eigh_vectors_and_residual():
    X = sym(9, 3)
    s = mc.eigh(X, want_vectors=True)
    V = s.eigenvectors
    np.testing.assert_allclose(V.T @ V, np.eye(9), atol=1e-12)
    np.testing.assert_allclose(X.entries @ V, V * s.eigenvalues, atol=1e-12)
    assert s.residual < 1e-12


def test_eigh_rejects_bad_input():
    with pytest.raises(InvalidMatrix, match=r"\(0, 1\)"):
        mc.eigh([[1.0, 2.0], [2.0 + 1e-15, 1.0]])
    with pytest.raises(InvalidMatrix):
        mc.eigh(np.ones((2, 3)))
    with pytest.raises(InvalidMatrix):
        mc.eigh([[np.nan]])


def test_eigh_empty_and_one():
    assert mc.eigh([[4.0]]).eigenvalues.tolist() == [4.0]


def test_tridiagonal_closed_form_3x3():
    w = mc.eigh_tridiagonal(mc.TridiagonalMatrix([2.0, 2.0, 2.0], [-1.0, -1.0])).eigenvalues
    np.testing.assert_allclose(w, [2 + np.sqrt(2), 2.0, 2 - np.sqrt(2)], atol=1e-12)


def test_tridiagonal_1x1():
    assert mc.eigh_tridiagonal(mc.TridiagonalMatrix([5.0], [])).eigenvalues.tolist() == pytest.approx([5.0])


def test_tridiagonal_dirichlet_laplacian():
    n, h = 50, 1.0 / 51
    T = mc.TridiagonalMatrix(np.full(n, 2 / h**2), np.full(n - 1, -1 / h**2))
    np.testing.assert_allclose(mc.eigh_tridiagonal(T).eigenvalues, oracles.dirichlet_laplacian_eigs(n, h), atol=1e-8)


def test_tridiagonal_select():
    rng = np.random.default_rng(0)
    T = mc.TridiagonalMatrix(rng.normal(size=40), rng.normal(size=39))
    full = mc.eigh_tridiagonal(T).eigenvalues
    np.testing.assert_allclose(mc.eigh_tridiagonal(T, select=(3, 9)).eigenvalues, full[3:9], atol=1e-12)
    with pytest.raises(InvalidArgument):
        mc.eigh_tridiagonal(T, select=(5, 5))


@pytest.mark.parametrize("n", [2, 7, 50, 200])
def test_tridiagonal_matches_dense(n):
    rng = np.random.default_rng(n)
    T = mc.TridiagonalMatrix(rng.uniform(-2, 2, n), rng.uniform(-1, 1, n - 1))
    np.testing.assert_allclose(mc.eigh_tridiagonal(T).eigenvalues, mc.eigh(T.to_dense()).eigenvalues, atol=1e-9)


def test_tridiagonal_bad_shapes():
    with pytest.raises(InvalidMatrix):
        mc.TridiagonalMatrix([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(InvalidMatrix):
        mc.TridiagonalMatrix([], [])


def test_sum_top_k():
    assert mc.sum_top_k(np.diag([3.0, 1.0, 2.0]), 2) == pytest.approx(5.0)
    X = sym(7, 1)
    assert mc.sum_top_k(X, 7) == pytest.approx(X.trace(), abs=1e-12)
    for k in (0, 8, 1.5):
        with pytest.raises(InvalidArgument):
            mc.sum_top_k(X, k)


def test_trace_quadratic_identity_frames():
    X = np.diag([3.0, 2.0, 1.0])
    assert mc.trace_quadratic(np.eye(3)[:, :2], X) == pytest.approx(5.0)
    assert mc.trace_quadratic(np.eye(3)[:, 2:], X) == pytest.approx(1.0)
    assert mc.trace_quadratic(np.eye(3)[:, 2:], X) <= mc.sum_top_k(X, 1)


def test_trace_quadratic_bounded_by_top_k():
    for i in range(1000):
        X = sym(6, i)
        k = 1 + i % 6
        A = mc.random_frame(6, k, 10_000 + i)
        top = mc.sum_top_k(X, k)
        assert mc.trace_quadratic(A, X) <= top + 1e-9 * (1 + abs(top))


def test_stiefel_rejects_non_orthonormal():
    with pytest.raises(InvalidArgument):
        mc.StiefelFrame(np.ones((3, 1)))
    with pytest.raises(InvalidArgument):
        mc.StiefelFrame(np.eye(2, 3))


def test_random_symmetric():
    a, b = sym(3, 42), sym(3, 42)
    assert np.array_equal(a.entries, b.entries)
    assert sym(1, 0).n == 1
    c = mc.random_symmetric(8, 7, 2.0).entries
    assert np.array_equal(c, c.T)
    assert np.abs(c).max() <= 2.0
    assert not np.array_equal(sym(4, 1).entries, sym(4, 2).entries)


def test_random_orthogonal():
    assert abs(mc.random_orthogonal(1, 0).columns[0, 0]) == pytest.approx(1.0)
    Q = mc.random_orthogonal(4, 9).columns
    np.testing.assert_allclose(Q.T @ Q, np.eye(4), atol=1e-10)
    assert abs(oracles.lu_det(mc.random_orthogonal(5, 3).columns)) == pytest.approx(1.0, abs=1e-9)


def test_symmetric_matrix_algebra():
    a, b = sym(4, 0), sym(4, 1)
    np.testing.assert_array_equal((a + b).entries, a.entries + b.entries)
    np.testing.assert_array_equal((2.0 * a).entries, 2.0 * a.entries)
    assert a.entries.flags.writeable is False
    assert mc.SymmetricMatrix.symmetrized([[1.0, 2.0], [0.0, 1.0]]).entries[0, 1] == 1.0


def test_spectrum_must_be_sorted():
    with pytest.raises(InvalidArgument):
        mc.Spectrum([1.0, 2.0])


def test_matrix_document_roundtrip(tmp_path):
    X = sym(5, 11)
    path = tmp_path / "x.json"
    mc.write_matrix(X, path)
    assert mc.read_matrix(path) == X
    doc = json.loads(path.read_text())
    assert doc["n"] == 5
    with pytest.raises(InvalidMatrix):
        mc.matrix_from_document({"n": 2, "data": [1.0, 2.0, 3.0]})


def test_weighted_eigenvalue_sum():
    assert mc.weighted_eigenvalue_sum(np.diag([1.0, 3.0, 2.0]), [1.0, 0.5, 0.0]) == pytest.approx(4.0)
    with pytest.raises(InvalidArgument):
        mc.weighted_eigenvalue_sum(np.eye(2), [1.0])


def test_verify_trace_sup_small():
    r = mc.verify_trace_sup(5, 2, 10, seed=3, frames=50)
    assert r.passed and r.violations == 0 and r.trials == 10


def test_verify_unitary_invariance_small():
    r = mc.verify_unitary_invariance(6, 20, np.linspace(1, -1, 6), seed=2)
    assert r.passed


def test_verify_trace_sup_jobs_agree():
    a = mc.verify_trace_sup(4, 2, 6, seed=1, frames=20, jobs=1)
    b = mc.verify_trace_sup(4, 2, 6, seed=1, frames=20, jobs=3)
    assert a.dumps() == b.dumps()


small = st.integers(1, 6).flatmap(
    lambda n: arrays(np.float64, (n, n), elements=st.floats(-100, 100, allow_nan=False, width=64))
)


@settings(max_examples=60, deadline=None)
@given(small)
def test_property_eigh_trace_and_norm(a):
    X = mc.SymmetricMatrix.symmetrized(a)
    w = mc.eigh(X).eigenvalues
    scale = 1.0 + X.frobenius_norm()
    assert abs(w.sum() - X.trace()) <= 1e-10 * scale * X.n
    assert abs(np.sqrt(np.sum(w**2)) - X.frobenius_norm()) <= 1e-10 * scale
    assert np.all(np.diff(w) <= 0)


@settings(max_examples=40, deadline=None)
@given(small, st.floats(-3, 3, allow_nan=False))
def test_property_eigh_shift_and_scale(a, c):
    X = mc.SymmetricMatrix.symmetrized(a)
    w = mc.eigh(X).eigenvalues
    scale = 1.0 + X.frobenius_norm()
    shifted = mc.eigh(X + c * np.eye(X.n)).eigenvalues
    np.testing.assert_allclose(shifted, w + c, atol=1e-10 * scale * (1 + abs(c)))
    np.testing.assert_allclose(mc.eigh(-1.0 * X).eigenvalues, -w[::-1], atol=1e-10 * scale)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_property_unitary_invariance(n, s1, s2):
    X = mc.random_symmetric(n, s1)
    Q = mc.random_orthogonal(n, s2).columns
    Y = mc.SymmetricMatrix.symmetrized(Q.T @ X.entries @ Q)
    np.testing.assert_allclose(mc.eigh(Y).eigenvalues, mc.eigh(X).eigenvalues, atol=1e-12 * n)
